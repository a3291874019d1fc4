"""Truncated power series, polynomial/rational-function algebra over the
coefficient field, exact Pade reconstruction, and expansions at 0 and at
infinity.

TruncSeries holds coefficients on a finite exponent window [lo, hi] together
with the direction of truncation: an ascending series (``zero_below=True``)
is exactly zero below lo and *unknown* above hi, a z^-1-type series
(``zero_above=True``) is the mirror image.  Multiplication tracks how far the
product is determined (min(a.hi + b.lo, b.hi + a.lo) for two ascending
series) instead of silently pretending more orders are known.

Coefficients may be field elements or matrices over the field; exp/log take
the multiplicative identity explicitly so both cases share code.  Pade
reconstruction is exact linear algebra: minimal denominator degree first,
free variables pinned to zero, candidate verified against *every* known
coefficient before it is accepted — failure returns None, never a wrong
answer.
"""

from __future__ import annotations

from ._kernel import pdiv_exact, pgcd, pmul, psub
from .errors import DomainError, EvaluationError
from .linmat import Matrix
from .scalars import Scalar, specialize

__all__ = [
    "TruncSeries",
    "series_mul",
    "series_exp",
    "series_log",
    "theta_from_h",
    "h_from_theta",
    "FPoly",
    "RationalFunction",
    "pade_reconstruct",
    "expand_at_infinity",
    "solve_linear",
]


def _is_zero_entry(x, field):
    if isinstance(x, Matrix):
        return x.is_zero()
    return field.is_zero(x)


class TruncSeries:
    __slots__ = ("coeffs", "lo", "hi", "zero", "field", "zero_below", "zero_above")

    def __init__(self, coeffs, lo, hi, zero, field, zero_below=True, zero_above=False):
        if lo > hi:
            raise DomainError("empty series window")
        if zero_below == zero_above:
            raise DomainError("series must be truncated on exactly one side")
        self.coeffs = {k: v for k, v in coeffs.items() if lo <= k <= hi}
        self.lo = lo
        self.hi = hi
        self.zero = zero
        self.field = field
        self.zero_below = zero_below
        self.zero_above = zero_above

    @classmethod
    def from_list(cls, values, zero, field, start=0):
        return cls(
            dict(enumerate(values, start)),
            start,
            start + len(values) - 1,
            zero,
            field,
        )

    def coeff(self, k):
        if k in self.coeffs:
            return self.coeffs[k]
        if self.lo <= k <= self.hi:
            return self.zero
        if k < self.lo and self.zero_below:
            return self.zero
        if k > self.hi and self.zero_above:
            return self.zero
        raise DomainError(f"coefficient {k} beyond the truncation window")

    def known(self, k):
        return (
            self.lo <= k <= self.hi
            or (k < self.lo and self.zero_below)
            or (k > self.hi and self.zero_above)
        )

    def truncate(self, hi=None, lo=None):
        return TruncSeries(
            self.coeffs,
            self.lo if lo is None else lo,
            self.hi if hi is None else hi,
            self.zero,
            self.field,
            self.zero_below,
            self.zero_above,
        )

    def __add__(self, other):
        if self.zero_below != other.zero_below:
            raise DomainError("adding series truncated in opposite directions")
        if self.zero_below:
            lo, hi = min(self.lo, other.lo), min(self.hi, other.hi)
        else:
            lo, hi = max(self.lo, other.lo), max(self.hi, other.hi)
        out = {}
        for k in range(lo, hi + 1):
            out[k] = self.coeff(k) + other.coeff(k)
        return TruncSeries(
            out, lo, hi, self.zero, self.field, self.zero_below, self.zero_above
        )

    def __sub__(self, other):
        return self + other.scale(self.field.from_int(-1))

    def scale(self, c):
        return TruncSeries(
            {k: c * v for k, v in self.coeffs.items()},
            self.lo,
            self.hi,
            self.zero,
            self.field,
            self.zero_below,
            self.zero_above,
        )

    def scale_z(self, alpha):
        """Substitute z -> alpha z."""
        out = {}
        for k, v in self.coeffs.items():
            out[k] = (alpha**k) * v
        return TruncSeries(
            out, self.lo, self.hi, self.zero, self.field,
            self.zero_below, self.zero_above,
        )

    def shift_z(self, m):
        """Multiply by z^m."""
        return TruncSeries(
            {k + m: v for k, v in self.coeffs.items()},
            self.lo + m,
            self.hi + m,
            self.zero,
            self.field,
            self.zero_below,
            self.zero_above,
        )

    def is_zero(self, scale=1.0):
        return all(
            _is_zero_entry_scaled(v, self.field, scale)
            for v in self.coeffs.values()
        )

    def __repr__(self):
        kind = "asc" if self.zero_below else "desc"
        return f"TruncSeries[{kind} {self.lo}..{self.hi}]"


def _is_zero_entry_scaled(x, field, scale):
    if isinstance(x, Matrix):
        return x.is_zero(scale)
    return field.is_zero(x, scale)


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Cauchy product on the window where it is fully determined."""
    if a.zero_below != b.zero_below:
        raise DomainError("multiplying series truncated in opposite directions")
    lo = a.lo + b.lo
    if a.zero_below:
        hi = min(a.hi + b.lo, b.hi + a.lo)
        if hi < lo:
            raise DomainError("product window is empty at this truncation")
    else:
        hi = a.hi + b.hi
        lo = max(a.lo + b.hi, b.lo + a.hi)
    out = {}
    for k in range(lo, hi + 1):
        acc = None
        for i, va in a.coeffs.items():
            j = k - i
            vb = b.coeffs.get(j)
            if vb is None:
                continue
            term = va * vb
            acc = term if acc is None else acc + term
        if acc is not None:
            out[k] = acc
    return TruncSeries(
        out, lo, hi, a.zero, a.field, a.zero_below, a.zero_above
    )


def series_exp(s: TruncSeries, one) -> TruncSeries:
    """exp of an ascending series with zero constant term."""
    if not s.zero_below or s.lo < 0 or (s.known(0) and not _is_zero_entry(s.coeff(0), s.field)):
        raise DomainError("series_exp needs an ascending series with no constant term")
    T = s.hi
    body = s.truncate(lo=max(s.lo, 1))
    out = TruncSeries({0: one}, 0, T, s.zero, s.field)
    power = TruncSeries({0: one}, 0, T, s.zero, s.field)
    fact = 1
    for k in range(1, T + 1):
        power = series_mul(power, body).truncate(hi=T, lo=0)
        fact *= k
        out = out + power.scale(s.field.from_fraction(1, fact))
    return out


def series_log(s: TruncSeries, one) -> TruncSeries:
    """log of an ascending series with constant term equal to `one`."""
    if not s.zero_below or s.lo > 0:
        raise DomainError("series_log needs an ascending series from order 0")
    T = s.hi
    dev = s - TruncSeries({0: one}, 0, T, s.zero, s.field)
    if dev.known(0) and not _is_zero_entry(dev.coeff(0), s.field):
        raise DomainError("series_log needs constant term 1")
    dev = dev.truncate(lo=1)
    out = TruncSeries({}, 0, T, s.zero, s.field)
    power = TruncSeries({0: one}, 0, T, s.zero, s.field)
    for k in range(1, T + 1):
        power = series_mul(power, dev).truncate(hi=T, lo=0)
        sign = 1 if k % 2 else -1
        out = out + power.scale(s.field.from_fraction(sign, k))
    return out


# -- the Theta <-> H change of coordinates -------------------------------------


def theta_from_h(h_list, T, field, one):
    """Θ-coefficients from commuting H_m (m = 1..T).

    Returns (theta0, [Θ_1..Θ_T]) where theta0 is the scalar 1/(q - q^-1)
    and 1 + Σ_{m>=1} (q - q^-1) Θ_m z^m = exp((q - q^-1) Σ_m H_m z^m).
    """
    kappa = field.q - field.one / field.q
    zero = h_list[0] * field.zero if h_list else field.zero
    s = TruncSeries(
        {m: h_list[m - 1] * kappa for m in range(1, min(len(h_list), T) + 1)},
        0,
        T,
        zero,
        field,
    )
    e = series_exp(s, one)
    theta0 = field.one / kappa
    thetas = [e.coeff(m) * (field.one / kappa) for m in range(1, T + 1)]
    return theta0, thetas


def h_from_theta(theta_list, T, field, one, check_commuting=True):
    """Inverse of theta_from_h; requires the Θ_m to commute pairwise."""
    if check_commuting:
        for i in range(len(theta_list)):
            for j in range(i + 1, len(theta_list)):
                a, b = theta_list[i], theta_list[j]
                if isinstance(a, Matrix):
                    if not (a @ b - b @ a).is_zero():
                        raise DomainError("theta coefficients do not commute")
    kappa = field.q - field.one / field.q
    zero = theta_list[0] * field.zero if theta_list else field.zero
    s = TruncSeries(
        {0: one},
        0,
        T,
        zero,
        field,
    )
    for m in range(1, min(len(theta_list), T) + 1):
        s = s + TruncSeries({m: theta_list[m - 1] * kappa}, 0, T, zero, field)
    l = series_log(s, one)
    return [l.coeff(m) * (field.one / kappa) for m in range(1, T + 1)]


# -- polynomials and rational functions over the field --------------------------


def _zprimitive(zp):
    """Divide a z-polynomial with integer-polynomial coefficients by the
    gcd of its coefficients (any unit is acceptable to the callers)."""
    g = []
    for c in zp:
        if c:
            g = pgcd(g, c)
            if g == [1]:
                return zp
    if not g:
        return zp
    return [pdiv_exact(c, g) if c else [] for c in zp]


def _fraction_free(coeffs):
    """Scalar z-coefficients -> primitive integer-polynomial coefficient
    lists with denominators cleared (ascending in z, trimmed)."""
    den = [1]
    for c in coeffs:
        if c.num:
            den = pdiv_exact(pmul(den, c.den), pgcd(den, c.den))
    out = [pmul(c.num, pdiv_exact(den, c.den)) if c.num else [] for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return _zprimitive(out)


def _zprem(a, b):
    """Pseudo-remainder in z of integer-coefficient z-polynomials: the
    remainder of lead(b)^k * a by b, computed without fractions."""
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    while len(r) - 1 >= db:
        lc = r.pop()
        if not lc:
            continue
        k = len(r) - db
        r = [pmul(x, lb) if x else [] for x in r]
        for j in range(db):
            r[k + j] = psub(r[k + j], pmul(b[j], lc))
    while r and not r[-1]:
        r.pop()
    return r


class FPoly:
    """Polynomial in z with coefficients in the field, ascending list."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field):
        coeffs = list(coeffs)
        while coeffs and field.is_zero(coeffs[-1]):
            coeffs.pop()
        self.coeffs = coeffs
        self.field = field

    @classmethod
    def one(cls, field):
        return cls([field.one], field)

    @classmethod
    def from_roots(cls, inverse_roots, field):
        """Product of (1 - a z) over the given a's (constant term 1)."""
        p = cls.one(field)
        for a in inverse_roots:
            p = p * cls([field.one, -a], field)
        return p

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def coeff(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.field.zero

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return FPoly(
            [self.coeff(k) + other.coeff(k) for k in range(n)], self.field
        )

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return FPoly(
            [self.coeff(k) - other.coeff(k) for k in range(n)], self.field
        )

    def __neg__(self):
        return FPoly([-c for c in self.coeffs], self.field)

    def __mul__(self, other):
        if not isinstance(other, FPoly):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return FPoly([], self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _nonzero(a, self.field):
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return FPoly(out, self.field)

    __rmul__ = __mul__

    def scale(self, c):
        return FPoly([c * a for a in self.coeffs], self.field)

    def divmod(self, other):
        if other.is_zero():
            raise DomainError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [self.field.zero] * max(len(rem) - len(other.coeffs) + 1, 0)
        d = other.degree
        lead = other.coeffs[-1]
        for k in range(len(rem) - 1 - d, -1, -1):
            c = rem[k + d]
            if _nonzero(c, self.field):
                f = c / lead
                q[k] = f
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - f * b
        return FPoly(q, self.field), FPoly(rem, self.field)

    def gcd(self, other):
        if not self.field.exact:
            a, b = self, other
            while not b.is_zero():
                a, b = b, a.divmod(b)[1]
            if a.is_zero():
                return a
            return a.scale(self.field.one / a.coeffs[-1])
        # Fraction-free primitive remainder sequence: naive Euclid over the
        # fraction field blows up through cross-gcds on every division step.
        a = _fraction_free(self.coeffs)
        b = _fraction_free(other.coeffs)
        if len(a) < len(b):
            a, b = b, a
        while b:
            a, b = b, _zprimitive(_zprem(a, b))
        if not a:
            return FPoly([], self.field)
        g = FPoly([Scalar._raw(c, [1]) for c in a], self.field)
        return g.scale(self.field.one / g.coeffs[-1])

    def eval(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def scale_z(self, alpha):
        """p(alpha z)."""
        out, p = [], self.field.one
        for c in self.coeffs:
            out.append(c * p)
            p = p * alpha
        return FPoly(out, self.field)

    def reverse(self, d=None):
        """z^d p(1/z) for d >= deg p (default deg p)."""
        if self.is_zero():
            return FPoly([], self.field)
        if d is None:
            d = self.degree
        if d < self.degree:
            raise DomainError("reverse degree below polynomial degree")
        out = [self.field.zero] * (d + 1)
        for k, c in enumerate(self.coeffs):
            out[d - k] = c
        return FPoly(out, self.field)

    def shift(self, m):
        return FPoly([self.field.zero] * m + self.coeffs, self.field)

    def __eq__(self, other):
        if not isinstance(other, FPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return all(
            self.field.eq(self.coeff(k), other.coeff(k)) for k in range(n)
        )

    def __str__(self):
        return _zpoly_str(self.coeffs)

    def __repr__(self):
        return f"FPoly({self})"

    def coeff_strings(self):
        return [str(c) for c in self.coeffs]


def _nonzero(c, field):
    return not field.is_zero(c)


def _zpoly_str(coeffs):
    if not coeffs:
        return "0"
    parts = []
    for k, c in enumerate(coeffs):
        cs = str(c)
        if cs == "0":
            continue
        if k == 0:
            parts.append(cs)
            continue
        zpow = "z" if k == 1 else f"z^{k}"
        if cs == "1":
            parts.append(zpow)
        elif cs == "-1":
            parts.append(f"-{zpow}")
        elif any(ch in cs[1:] for ch in "+-") and not cs.startswith("("):
            parts.append(f"({cs})*{zpow}")
        else:
            parts.append(f"{cs}*{zpow}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


class RationalFunction:
    """num/den over the field, normalised: gcd removed (exact backend) and
    the lowest nonzero denominator coefficient scaled to 1."""

    __slots__ = ("num", "den", "field")

    def __init__(self, num: FPoly, den: FPoly):
        if den.is_zero():
            raise DomainError("zero denominator")
        field = num.field
        if field.exact and not num.is_zero():
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        pivot = None
        for c in den.coeffs:
            if _nonzero(c, field):
                pivot = c
                break
        inv = field.one / pivot
        self.num = num.scale(inv)
        self.den = den.scale(inv)
        self.field = field

    @classmethod
    def constant(cls, c, field):
        return cls(FPoly([c], field), FPoly.one(field))

    def __mul__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(other, self.field)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(other, self.field)
        if other.num.is_zero():
            raise DomainError("dividing by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __add__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(other, self.field)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(other, self.field)
        return RationalFunction(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def is_zero(self):
        return self.num.is_zero()

    def eval(self, x):
        dv = self.den.eval(x)
        if self.field.is_zero(dv):
            raise DomainError("evaluation at a pole")
        return self.num.eval(x) / dv

    def scale_z(self, alpha):
        return RationalFunction(self.num.scale_z(alpha), self.den.scale_z(alpha))

    def inv_z(self):
        """f(1/z) as a rational function of z."""
        d = max(self.num.degree, self.den.degree, 0)
        return RationalFunction(self.num.reverse(d), self.den.reverse(d))

    def inv(self):
        if self.num.is_zero():
            raise DomainError("inverting the zero rational function")
        return RationalFunction(self.den, self.num)

    def expand_at_zero(self, T) -> TruncSeries:
        d0 = self.den.coeff(0)
        if self.field.is_zero(d0):
            raise DomainError("pole at z = 0")
        inv = self.field.one / d0
        out = {}
        for k in range(0, T + 1):
            acc = self.num.coeff(k)
            for i in range(0, k):
                acc = acc - out[i] * self.den.coeff(k - i)
            out[k] = acc * inv
        return TruncSeries(out, 0, T, self.field.zero, self.field)

    def expand_at_infinity(self, T) -> TruncSeries:
        """Expansion in z^-1: coefficients for exponents down to -T."""
        d = max(self.num.degree, self.den.degree, 0)
        nrev = self.num.reverse(d)
        drev = self.den.reverse(d)
        v = 0
        while self.field.is_zero(drev.coeff(v)) and v <= drev.degree:
            v += 1
        core = FPoly(drev.coeffs[v:], self.field)
        s = RationalFunction(nrev, core).expand_at_zero(T + v)
        out = {v - m: c for m, c in s.coeffs.items() if -T <= v - m <= v}
        return TruncSeries(
            out, -T, v, self.field.zero, self.field,
            zero_below=False, zero_above=True,
        )

    def __str__(self):
        if self.den == FPoly.one(self.field):
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def expand_at_infinity(f: RationalFunction, T) -> TruncSeries:
    return f.expand_at_infinity(T)


# -- exact linear solving and Pade reconstruction --------------------------------


def solve_linear(rows, rhs, field):
    """One solution of rows·x = rhs (free variables pinned to zero), or None.

    Gauss-Jordan over the field; exact backends pivot on the first nonzero,
    the numeric backend on the largest magnitude.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) + [v] for r, v in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = None
        if field.exact:
            for i in range(r, m):
                if a[i][c]:
                    piv = i
                    break
        else:
            if r < m:
                piv = max(range(r, m), key=lambda i: abs(a[i][c]))
                if field.is_zero(a[piv][c]):
                    piv = None
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.one / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and _nonzero(a[i][c], field):
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    # consistency: zero rows must have zero rhs
    for i in range(r, m):
        if not field.is_zero(a[i][n], scale=_row_scale(a[i][:n], field)):
            return None
    x = [field.zero] * n
    for i, c in enumerate(piv_cols):
        x[c] = a[i][n]
    return x


def _row_scale(row, field):
    if field.exact:
        return 1.0
    return max([abs(v) for v in row] + [1.0])


# Screening point for the exact Pade search: off the real axis so real
# root coincidences cannot fake a match, modulus near 1 so high q-degrees
# neither overflow nor underflow.
_SCREEN_Q0 = complex(1.06, 0.31)


def _csolve(rows, rhs):
    """Partial-pivot complex Gauss; None when a pivot is numerically zero."""
    n = len(rows)
    a = [list(r) + [v] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(a[i][col]))
        big = max(abs(x) for r in a for x in r[:-1])
        if abs(a[piv][col]) <= 1e-12 * max(big, 1.0):
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1.0 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col:
                f = a[i][col]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


def _screen_values(c):
    """Complex images of exact coefficients at the screening point, or None."""
    try:
        vals = [complex(specialize(x, _SCREEN_Q0)) for x in c]
    except (EvaluationError, OverflowError):
        return None
    if any(v != v or abs(v) == float("inf") for v in vals):
        return None
    return vals


def _screen_rejects(vals, nnum, nden, T):
    """True when the candidate degrees decisively fail at the screen point.

    A candidate that exists over the exact field specializes to a solution
    here with residual at rounding level, so only residuals far above it
    reject; singular screen systems never do.
    """
    tol = 1e-6 * max([abs(v) for v in vals] + [1.0])
    if nden:
        rows = [[vals[k - i] if 0 <= k - i <= T else 0j
                 for i in range(1, nden + 1)]
                for k in range(nnum + 1, nnum + nden + 1)]
        rhs = [-vals[k] for k in range(nnum + 1, nnum + nden + 1)]
        sol = _csolve(rows, rhs)
        if sol is None:
            return False
        r = [1.0 + 0j] + sol
    else:
        r = [1.0 + 0j]
    for k in range(nnum + 1, T + 1):
        acc = 0j
        for i in range(0, min(k, nden) + 1):
            acc += r[i] * vals[k - i]
        if abs(acc) > tol:
            return True
    return False


def pade_reconstruct(s: TruncSeries, max_num_deg: int, max_den_deg: int):
    """Minimal rational function matching an ascending scalar series.

    Deterministic search: denominator degree ascending, then numerator degree
    ascending; the linear system pins free variables to zero; a candidate is
    accepted only if its Taylor expansion reproduces every known coefficient
    of s.  Returns a RationalFunction with den(0) = 1, or None.

    Exact fields screen each candidate numerically first: the solve over
    Q(q) is priced well above a complex solve, and most candidates in the
    search fail.  Acceptance still goes through the exact verification.
    """
    if not s.zero_below:
        raise DomainError("pade_reconstruct expects an ascending series")
    if s.lo < 0:
        raise DomainError("pade_reconstruct expects exponents >= 0")
    T = s.hi
    if T < max_num_deg + max_den_deg + 1:
        raise DomainError(
            f"window T={T} too small for degrees ({max_num_deg},{max_den_deg})"
        )
    field = s.field
    c = [s.coeff(k) for k in range(T + 1)]
    scale = 1.0 if field.exact else max([abs(v) for v in c] + [1.0])
    screen = _screen_values(c) if field.exact else None
    for nden in range(0, max_den_deg + 1):
        for nnum in range(0, max_num_deg + 1):
            if screen is not None and _screen_rejects(screen, nnum, nden, T):
                continue
            # unknowns r_1..r_nden with r_0 = 1:
            # sum_{i=0..nden} r_i c_{k-i} = 0 for k = nnum+1 .. nnum+nden
            rows, rhs = [], []
            for k in range(nnum + 1, nnum + nden + 1):
                rows.append(
                    [c[k - i] if 0 <= k - i <= T else field.zero
                     for i in range(1, nden + 1)]
                )
                rhs.append(-c[k])
            if nden:
                sol = solve_linear(rows, rhs, field)
                if sol is None:
                    continue
                r = [field.one] + sol
            else:
                r = [field.one]
            den = FPoly(r, field)
            num_coeffs = []
            for k in range(0, nnum + 1):
                acc = field.zero
                for i in range(0, min(k, nden) + 1):
                    acc = acc + r[i] * c[k - i]
                num_coeffs.append(acc)
            cand = RationalFunction(FPoly(num_coeffs, field), den)
            exp = cand.expand_at_zero(T)
            ok = all(
                field.is_zero(exp.coeff(k) - c[k], scale) for k in range(T + 1)
            )
            if ok:
                return cand
    return None
