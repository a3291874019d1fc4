"""Exact arithmetic in the coefficient field Q(q) of rational functions in q.

Representation
--------------
A :class:`Scalar` is a reduced fraction ``num / den`` of integer-coefficient
polynomials in q.  Each polynomial is an ascending coefficient list of Python
ints with no trailing zeros; ``[]`` is the zero polynomial.  The stored form
is canonical and unique:

* ``gcd(num, den) = 1`` in ZZ[q] — no common polynomial factor, and the
  integer contents of num and den are coprime;
* the leading coefficient of ``den`` is positive;
* ``den`` is never zero, and the zero element is ``[] / [1]``.

Equality is therefore structural, hashing is cheap, and ``str()`` round-trips
through :func:`parse_scalar`.  Negative powers of q never appear explicitly:
q^-1 is the fraction ``[1] / [0, 1]``.

Operator inventory: ``+ - * / ** == hash bool``, with ints and
:class:`fractions.Fraction` coerced on either side.

q-numbers
---------
:func:`qint` gives the balanced q-integer [k] = (q^k - q^-k)/(q - q^-1),
:func:`qfact` and :func:`qbinom` the derived factorials and binomials.

Backends
--------
:class:`ExactField` and :class:`NumericField` expose the same small constant
factory / zero-test protocol, so every construction in the package can run
either over exact Scalars or over complex numbers at a fixed q0 (guarded
against roots of unity up to order 48).  :func:`specialize` maps a Scalar to
its complex value at q0 and raises :class:`~qonsager.errors.EvaluationError`
at poles.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from ._kernel import (
    padd,
    pdiv_exact,
    pgcd,
    pmul,
    pmul_int,
    pneg,
    pprim,
    psub,
)
from .errors import DomainError, EvaluationError

__all__ = [
    "Scalar",
    "ZERO",
    "ONE",
    "Q",
    "qint",
    "qfact",
    "qbinom",
    "parse_scalar",
    "specialize",
    "scalar_sqrt",
    "ExactField",
    "NumericField",
    "DEFAULT_Q0",
]


class Scalar:
    """An element of Q(q) in canonical reduced form."""

    __slots__ = ("num", "den", "_h")

    def __init__(self, num, den=1):
        if isinstance(num, int):
            num = [num] if num else []
        if isinstance(den, int):
            if den == 0:
                raise DomainError("zero denominator")
            den = [den]
        num, den = _reduce(list(num), list(den))
        self.num = num
        self.den = den
        self._h = None

    @classmethod
    def _raw(cls, num, den):
        """Wrap coefficient lists already known to be in canonical form."""
        s = object.__new__(cls)
        s.num = num
        s.den = den
        s._h = None
        return s

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d1 == d2:
            if d1 == [1]:
                return Scalar._raw(padd(n1, n2), [1])
            return Scalar(padd(n1, n2), d1)
        g = pgcd(d1, d2)
        if g == [1]:
            num = padd(pmul(n1, d2), pmul(n2, d1))
            if not num:
                return ZERO
            return Scalar._raw(num, pmul(d1, d2))
        d1g = pdiv_exact(d1, g)
        d2g = pdiv_exact(d2, g)
        num = padd(pmul(n1, d2g), pmul(n2, d1g))
        if not num:
            return ZERO
        h = pgcd(num, g)
        if h != [1]:
            num = pdiv_exact(num, h)
            g = pdiv_exact(g, h)
        den = pmul(pmul(g, d1g), d2g)
        if den[-1] < 0:
            num, den = pneg(num), pneg(den)
        return Scalar._raw(num, den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return Scalar._raw(pneg(self.num), self.den)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not n1 or not n2:
            return ZERO
        if d1 == [1] and d2 == [1]:
            return Scalar._raw(pmul(n1, n2), [1])
        g1 = pgcd(n1, d2)
        if g1 != [1]:
            n1 = pdiv_exact(n1, g1)
            d2 = pdiv_exact(d2, g1)
        g2 = pgcd(n2, d1)
        if g2 != [1]:
            n2 = pdiv_exact(n2, g2)
            d1 = pdiv_exact(d1, g2)
        num = pmul(n1, n2)
        den = pmul(d1, d2)
        if den[-1] < 0:
            num, den = pneg(num), pneg(den)
        return Scalar._raw(num, den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return ONE
        base = self if k > 0 else self.inv()
        k = abs(k)
        # num/den coprime stays coprime under powers, so no re-reduction
        num, den, bn, bd = [1], [1], base.num, base.den
        while k:
            if k & 1:
                num, den = pmul(num, bn), pmul(den, bd)
            k >>= 1
            if k:
                bn, bd = pmul(bn, bn), pmul(bd, bd)
        return Scalar._raw(num, den)

    def inv(self) -> "Scalar":
        if not self.num:
            raise DomainError("inverting zero")
        num, den = self.den, self.num
        if den[-1] < 0:
            num, den = pneg(num), pneg(den)
        return Scalar._raw(num, den)

    # -- comparisons / hashing ----------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __bool__(self):
        return bool(self.num)

    def __hash__(self):
        if self._h is None:
            if self.den == [1] and len(self.num) <= 1:
                self._h = hash(self.num[0] if self.num else 0)
            elif len(self.num) <= 1 and len(self.den) == 1:
                self._h = hash(
                    Fraction(self.num[0] if self.num else 0, self.den[0])
                )
            else:
                self._h = hash((tuple(self.num), tuple(self.den)))
        return self._h

    # -- presentation --------------------------------------------------------

    def __str__(self):
        if self.den == [1]:
            return _poly_str(self.num)
        return f"({_poly_str(self.num)})/({_poly_str(self.den)})"

    def __repr__(self):
        return f"Scalar('{self}')"

    def degree_pair(self):
        """(deg num, deg den), with deg 0-polynomial = -1."""
        return len(self.num) - 1, len(self.den) - 1


def _reduce(num, den):
    while num and num[-1] == 0:
        num.pop()
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise DomainError("zero denominator")
    if not num:
        return [], [1]
    g = pgcd(num, den)
    if g != [1]:
        num = pdiv_exact(num, g)
        den = pdiv_exact(den, g)
    if den[-1] < 0:
        num, den = pneg(num), pneg(den)
    return num, den


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar._raw([x] if x else [], [1])
    if isinstance(x, Fraction):
        return Scalar(x.numerator, x.denominator)
    return NotImplemented


ZERO = Scalar._raw([], [1])
ONE = Scalar._raw([1], [1])
Q = Scalar._raw([0, 1], [1])


def _poly_str(p):
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            var = "q" if k == 1 else f"q^{k}"
            body = var if mag == 1 else f"{mag}*{var}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+" if c > 0 else "-") + body)
    return "".join(parts)


# -- q-numbers ---------------------------------------------------------------


def qint(k: int) -> Scalar:
    """The balanced q-integer [k] = (q^k - q^-k)/(q - q^-1).

    [0] = 0, [-k] = -[k]; e.g. [2] = q + q^-1.
    """
    if k == 0:
        return ZERO
    n = abs(k)
    num = [1 if i % 2 == 0 else 0 for i in range(2 * n - 1)]
    den = [0] * (n - 1) + [1]
    s = Scalar._raw(num, den)
    return -s if k < 0 else s


def qfact(k: int) -> Scalar:
    """[k]! = [1][2]...[k]; requires k >= 0."""
    if k < 0:
        raise DomainError("qfact of a negative integer")
    out = ONE
    for i in range(2, k + 1):
        out = out * qint(i)
    return out


def qbinom(k: int, l: int) -> Scalar:
    """The q-binomial [k choose l] for 0 <= l <= k."""
    if not 0 <= l <= k:
        raise DomainError(f"qbinom({k}, {l}) outside 0 <= l <= k")
    l = min(l, k - l)
    out = ONE
    for i in range(1, l + 1):
        out = out * qint(k - l + i) / qint(i)
    return out


# -- parsing -----------------------------------------------------------------


def parse_scalar(text: str) -> Scalar:
    """Parse expressions like "q^4", "1/(q-q^-1)", "3*q^2-1" into Scalars.

    Grammar: + - * / ^ (or **), integer literals, the variable q and
    parentheses; exponents are (possibly negative) integers.
    """
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take():
        t = peek()
        pos[0] += 1
        return t

    def expect(t):
        if take() != t:
            raise DomainError(f"malformed scalar expression: {text!r}")

    def parse_expr():
        node = parse_term()
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term():
        node = parse_factor()
        while peek() in ("*", "/"):
            op = take()
            rhs = parse_factor()
            node = node * rhs if op == "*" else node / rhs
        return node

    def parse_factor():
        if peek() == "-":
            take()
            return -parse_factor()
        if peek() == "+":
            take()
            return parse_factor()
        node = parse_atom()
        if peek() == "^":
            take()
            sign = 1
            if peek() == "-":
                take()
                sign = -1
            e = take()
            if not isinstance(e, int):
                raise DomainError(f"malformed exponent in {text!r}")
            node = node ** (sign * e)
        return node

    def parse_atom():
        t = take()
        if t == "(":
            node = parse_expr()
            expect(")")
            return node
        if t == "q":
            return Q
        if isinstance(t, int):
            return Scalar(t)
        raise DomainError(f"malformed scalar expression: {text!r}")

    node = parse_expr()
    if pos[0] != len(tokens):
        raise DomainError(f"trailing input in scalar expression: {text!r}")
    return node


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(int(text[i:j]))
            i = j
        elif ch == "q":
            tokens.append("q")
            i += 1
        elif ch == "*":
            if i + 1 < n and text[i + 1] == "*":
                tokens.append("^")
                i += 2
            else:
                tokens.append("*")
                i += 1
        elif ch in "+-/^()":
            tokens.append(ch)
            i += 1
        else:
            raise DomainError(f"unexpected character {ch!r} in scalar expression")
    return tokens


# -- numeric specialization ---------------------------------------------------


def specialize(s: Scalar, q0: complex) -> complex:
    """Evaluate s at q = q0; raises EvaluationError at q0 = 0 and at poles."""
    q0 = complex(q0)
    if q0 == 0:
        raise EvaluationError("q0 = 0 is outside the torus")
    dv = _horner(s.den, q0)
    if dv == 0:
        raise EvaluationError(f"pole of {s} at q0 = {q0}")
    return _horner(s.num, q0) / dv


def _horner(p, x):
    acc = 0j
    for c in reversed(p):
        acc = acc * x + c
    return acc


# -- exact square roots --------------------------------------------------------


def scalar_sqrt(s: Scalar):
    """Exact square root in Q(q), or None when s is not a perfect square.

    The returned root has a positive leading numerator coefficient.
    """
    if not s.num:
        return ZERO
    m = pmul(s.num, s.den)
    c, p = pprim(m)
    if p[-1] < 0:
        return None
    t = isqrt(c)
    if t * t != c:
        return None
    root = _poly_sqrt(p)
    if root is None:
        return None
    return Scalar(pmul_int(root, t), list(s.den))


def _poly_sqrt(p):
    """Integer square root of a primitive polynomial, or None."""
    d = len(p) - 1
    if d % 2:
        return None
    m = d // 2
    s0 = isqrt(p[-1])
    if s0 * s0 != p[-1]:
        return None
    # solve descending: s_k = (p_k - sum_{0<i<k} s_i s_{k-i}) / (2 s_0)
    pd = list(reversed(p))
    sd = [s0] + [0] * m
    for k in range(1, m + 1):
        acc = pd[k]
        for i in range(1, k):
            acc -= sd[i] * sd[k - i]
        val, rem = divmod(acc, 2 * s0)
        if rem:
            return None
        sd[k] = val
    root = list(reversed(sd))
    if pmul(root, root) != p:
        return None
    return root


# -- coefficient backends -------------------------------------------------------

DEFAULT_Q0 = 1.3


class ExactField:
    """Constant factory / zero-test protocol over exact Scalars."""

    exact = True
    name = "exact"

    zero = ZERO
    one = ONE
    q = Q

    @staticmethod
    def from_int(n: int) -> Scalar:
        return Scalar(n)

    @staticmethod
    def from_fraction(p: int, r: int) -> Scalar:
        return Scalar(p, r)

    @staticmethod
    def from_scalar(s: Scalar) -> Scalar:
        return s

    @staticmethod
    def qint(k: int) -> Scalar:
        return qint(k)

    @staticmethod
    def is_zero(x, scale=1.0) -> bool:
        return not x

    @staticmethod
    def eq(a, b) -> bool:
        return a == b

    @staticmethod
    def conj(x):
        return x

    def __repr__(self):
        return "ExactField()"


class NumericField:
    """Same protocol over complex numbers at a fixed q0.

    q0 must stay away from 0 and from roots of unity of order <= 48 (the
    q-integers appearing in any supported window must not vanish).
    """

    exact = False
    name = "numeric"

    def __init__(self, q0: complex = DEFAULT_Q0, tol: float = 1e-9):
        q0 = complex(q0)
        if q0 == 0:
            raise EvaluationError("q0 = 0 is outside the torus")
        w = q0
        for k in range(1, 49):
            if abs(w - 1.0) < 1e-8:
                raise EvaluationError(
                    f"q0 = {q0} is within 1e-8 of a root of unity (order {k})"
                )
            w *= q0
        self.q0 = q0
        self.tol = tol
        self.zero = 0j
        self.one = 1 + 0j
        self.q = q0

    def from_int(self, n: int) -> complex:
        return complex(n)

    def from_fraction(self, p: int, r: int) -> complex:
        return complex(p) / complex(r)

    def from_scalar(self, s: Scalar) -> complex:
        return specialize(s, self.q0)

    def qint(self, k: int) -> complex:
        if k == 0:
            return 0j
        return (self.q0**k - self.q0**-k) / (self.q0 - 1 / self.q0)

    def is_zero(self, x, scale=1.0) -> bool:
        return abs(x) <= self.tol * max(1.0, scale)

    def eq(self, a, b) -> bool:
        return self.is_zero(a - b, scale=max(abs(a), abs(b)))

    @staticmethod
    def conj(x):
        return x.conjugate()

    def __repr__(self):
        return f"NumericField(q0={self.q0}, tol={self.tol})"
