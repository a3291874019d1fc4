"""Integer-polynomial kernel (pure-Python reference implementation).

A polynomial in q with integer coefficients is a list of Python ints in
ascending degree order with no trailing zeros; the zero polynomial is the
empty list [].  Nothing here knows about fractions, matrices or q-numbers:
these are the primitive coefficient-list operations that everything in the
exact scalar field reduces to.  A compiled twin (_cykernel) exports the same
names; the package picks whichever imports.

Division conventions:

* pdiv_exact(a, b) performs the division a / b in ZZ[q] and raises if the
  quotient does not exist with integer coefficients (it is used only where
  Gauss's lemma guarantees exactness).
* prem(a, b) is the pseudo-remainder: lc(b)^(deg a - deg b + 1) * a  mod  b,
  computed entirely over ZZ.
* pgcd(a, b) is the full ZZ[q] gcd (content included), normalised to a
  positive leading coefficient, computed with a primitive pseudo-remainder
  sequence.
"""

from math import gcd as _igcd

__all__ = [
    "pnorm",
    "padd",
    "psub",
    "pneg",
    "pmul",
    "pmul_int",
    "pshift",
    "pcontent",
    "pprim",
    "pdiv_exact",
    "prem",
    "pgcd",
]


def pnorm(a):
    """Strip trailing zero coefficients (in place) and return the list."""
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return pnorm(out)


def psub(a, b):
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return pnorm(out)


def pneg(a):
    return [-c for c in a]


def pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return pnorm(out)


def pmul_int(a, k):
    if k == 0:
        return []
    return [c * k for c in a]


def pshift(a, k):
    """Multiply by q^k, k >= 0."""
    if not a:
        return []
    return [0] * k + list(a)


def pcontent(a):
    """gcd of the coefficients (nonnegative; 0 for the zero polynomial)."""
    g = 0
    for c in a:
        g = _igcd(g, c)
        if g == 1:
            return 1
    return g


def pprim(a):
    """Return (content, primitive part); the primitive part keeps the sign
    of the leading coefficient, the content is nonnegative."""
    c = pcontent(a)
    if c in (0, 1):
        return c, list(a)
    return c, [x // c for x in a]


def pdiv_exact(a, b):
    """Exact division in ZZ[q]; raises ValueError if b does not divide a."""
    if not b:
        raise ValueError("division by zero polynomial")
    if not a:
        return []
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    dq = len(a) - 1 - db
    if dq < 0:
        raise ValueError("inexact polynomial division")
    quo = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        c = r[k + db]
        if c:
            cq, rem = divmod(c, lb)
            if rem:
                raise ValueError("inexact polynomial division")
            quo[k] = cq
            for j in range(db + 1):
                r[k + j] -= cq * b[j]
    if any(r):
        raise ValueError("inexact polynomial division")
    return pnorm(quo)


def prem(a, b):
    """Pseudo-remainder of a by b over ZZ: lc(b)^(deg a - deg b + 1) * a mod b."""
    if not b:
        raise ValueError("pseudo-remainder by zero polynomial")
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return list(a)
    lb = b[-1]
    r = list(a)
    e = da - db + 1
    while r and len(r) - 1 >= db:
        d = len(r) - 1 - db
        lr = r[-1]
        r = psub(pmul_int(r, lb), pshift(pmul_int(b, lr), d))
        e -= 1
    if e > 0 and r:
        r = pmul_int(r, lb**e)
    return r


def pgcd(a, b):
    """gcd in ZZ[q] (content included), positive leading coefficient."""
    if not a:
        return _posnorm(list(b))
    if not b:
        return _posnorm(list(a))
    ca, pa = pprim(a)
    cb, pb = pprim(b)
    cg = _igcd(ca, cb)
    # primitive pseudo-remainder sequence
    if len(pa) < len(pb):
        pa, pb = pb, pa
    while pb:
        _, r = pprim(prem(pa, pb))
        pa, pb = pb, r
    g = _posnorm(pa)
    return pmul_int(g, cg) if cg != 1 else g


def _posnorm(a):
    if a and a[-1] < 0:
        return pneg(a)
    return a
