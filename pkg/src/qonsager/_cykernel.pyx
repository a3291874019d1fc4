# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled integer-polynomial kernel.

Same contract as _pykernel (coefficient lists, ascending degree, [] == 0).
pmul takes a machine-word fast path when a coefficient-size bound guarantees
no overflow; everything falls back to arbitrary-precision Python ints.
"""

from libc.stdlib cimport free, malloc
from math import gcd as _igcd

__all__ = [
    "pnorm", "padd", "psub", "pneg", "pmul", "pmul_int", "pshift",
    "pcontent", "pprim", "pdiv_exact", "prem", "pgcd",
]

DEF FAST_BOUND = 4611686018427387904  # 2**62


def pnorm(list a):
    while a and a[len(a) - 1] == 0:
        a.pop()
    return a


def padd(list a, list b):
    cdef Py_ssize_t i, la = len(a), lb = len(b)
    if la < lb:
        a, b = b, a
        la, lb = lb, la
    cdef list out = list(a)
    for i in range(lb):
        out[i] = out[i] + b[i]
    return pnorm(out)


def psub(list a, list b):
    cdef Py_ssize_t i, la = len(a), lb = len(b)
    cdef list out = list(a)
    if lb > la:
        out.extend([0] * (lb - la))
    for i in range(lb):
        out[i] = out[i] - b[i]
    return pnorm(out)


def pneg(list a):
    cdef Py_ssize_t i
    cdef list out = list(a)
    for i in range(len(out)):
        out[i] = -out[i]
    return out


cdef list _pmul_obj(list a, list b):
    cdef Py_ssize_t i, j, la = len(a), lb = len(b)
    cdef list out = [0] * (la + lb - 1)
    cdef object ca
    for i in range(la):
        ca = a[i]
        if ca:
            for j in range(lb):
                out[i + j] = out[i + j] + ca * b[j]
    return pnorm(out)


def pmul(list a, list b):
    cdef Py_ssize_t i, j, la = len(a), lb = len(b)
    if la == 0 or lb == 0:
        return []
    # machine-word fast path when |a_i| * |b_j| * min(la, lb) < 2**62
    cdef object maxa = 0, maxb = 0, c
    for i in range(la):
        c = a[i]
        if c < 0:
            c = -c
        if c > maxa:
            maxa = c
    for j in range(lb):
        c = b[j]
        if c < 0:
            c = -c
        if c > maxb:
            maxb = c
    if maxa * maxb * (la if la < lb else lb) >= FAST_BOUND:
        return _pmul_obj(a, b)
    cdef long long *ca = <long long *> malloc(la * sizeof(long long))
    cdef long long *cb = <long long *> malloc(lb * sizeof(long long))
    cdef long long *co = <long long *> malloc((la + lb - 1) * sizeof(long long))
    if ca == NULL or cb == NULL or co == NULL:
        free(ca); free(cb); free(co)
        return _pmul_obj(a, b)
    try:
        for i in range(la):
            ca[i] = a[i]
        for j in range(lb):
            cb[j] = b[j]
        for i in range(la + lb - 1):
            co[i] = 0
        for i in range(la):
            if ca[i] != 0:
                for j in range(lb):
                    co[i + j] += ca[i] * cb[j]
        out = [0] * (la + lb - 1)
        for i in range(la + lb - 1):
            out[i] = co[i]
    finally:
        free(ca); free(cb); free(co)
    return pnorm(out)


def pmul_int(list a, k):
    cdef Py_ssize_t i
    if k == 0:
        return []
    cdef list out = list(a)
    for i in range(len(out)):
        out[i] = out[i] * k
    return out


def pshift(list a, Py_ssize_t k):
    if not a:
        return []
    return [0] * k + a


def pcontent(list a):
    cdef Py_ssize_t i
    g = 0
    for i in range(len(a)):
        g = _igcd(g, a[i])
        if g == 1:
            return 1
    return g


def pprim(list a):
    cdef Py_ssize_t i
    c = pcontent(a)
    if c == 0 or c == 1:
        return c, list(a)
    cdef list out = list(a)
    for i in range(len(out)):
        out[i] = out[i] // c
    return c, out


def pdiv_exact(list a, list b):
    cdef Py_ssize_t k, j, db, dq
    if not b:
        raise ValueError("division by zero polynomial")
    if not a:
        return []
    cdef list r = list(a)
    db = len(b) - 1
    lb = b[db]
    dq = len(a) - 1 - db
    if dq < 0:
        raise ValueError("inexact polynomial division")
    cdef list quo = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        c = r[k + db]
        if c:
            cq, rem = divmod(c, lb)
            if rem:
                raise ValueError("inexact polynomial division")
            quo[k] = cq
            for j in range(db + 1):
                r[k + j] = r[k + j] - cq * b[j]
    for k in range(len(r)):
        if r[k]:
            raise ValueError("inexact polynomial division")
    return pnorm(quo)


def prem(list a, list b):
    cdef Py_ssize_t da, db, d, e
    if not b:
        raise ValueError("pseudo-remainder by zero polynomial")
    da = len(a) - 1
    db = len(b) - 1
    if da < db:
        return list(a)
    lb = b[db]
    cdef list r = list(a)
    e = da - db + 1
    while r and len(r) - 1 >= db:
        d = len(r) - 1 - db
        lr = r[len(r) - 1]
        r = psub(pmul_int(r, lb), pshift(pmul_int(b, lr), d))
        e -= 1
    if e > 0 and r:
        r = pmul_int(r, lb**e)
    return r


def pgcd(list a, list b):
    if not a:
        return _posnorm(list(b))
    if not b:
        return _posnorm(list(a))
    ca, pa = pprim(a)
    cb, pb = pprim(b)
    cg = _igcd(ca, cb)
    if len(pa) < len(pb):
        pa, pb = pb, pa
    while pb:
        _, r = pprim(prem(pa, pb))
        pa, pb = pb, r
    cdef list g = _posnorm(pa)
    return pmul_int(g, cg) if cg != 1 else g


cdef list _posnorm(list a):
    if a and a[len(a) - 1] < 0:
        return pneg(a)
    return a
