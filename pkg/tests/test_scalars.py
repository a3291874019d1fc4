"""Exact scalar field: canonical forms, q-numbers, parsing, specialization.

The independent oracle for arithmetic is sympy's symbolic simplifier; the
frozen expected strings below were computed by hand from the definitions.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qonsager import _pykernel
from qonsager._kernel import KERNEL_NAME, impl
from qonsager.errors import DomainError, EvaluationError
from qonsager.scalars import (
    ONE,
    Q,
    ZERO,
    NumericField,
    Scalar,
    parse_scalar,
    qbinom,
    qfact,
    qint,
    scalar_sqrt,
    specialize,
)

qs = sympy.Symbol("q")


def to_sympy(s: Scalar):
    num = sum(c * qs**k for k, c in enumerate(s.num))
    den = sum(c * qs**k for k, c in enumerate(s.den))
    return sympy.together(num / den)


coeffs = st.lists(st.integers(-9, 9), max_size=5)
nonzero_coeffs = coeffs.filter(lambda p: any(p))


@st.composite
def scalars(draw):
    return Scalar(draw(coeffs), draw(nonzero_coeffs))


# ---------------------------------------------------------------- q-numbers


def test_qint_basics():
    assert qint(0) == ZERO
    assert qint(1) == ONE
    assert str(qint(2)) == "(q^2+1)/(q)"
    assert qint(2) == Q + 1 / Q
    assert qint(3) == Q**2 + 1 + Q**-2
    for k in range(1, 8):
        assert qint(-k) == -qint(k)


def test_qint_against_defining_formula():
    for k in range(-6, 7):
        lhs = qint(k) * (Q - 1 / Q)
        assert lhs == Q**k - Q**-k


def test_qbinom_examples():
    assert qbinom(3, 1) == Q**2 + 1 + Q**-2
    assert qbinom(4, 2) == qfact(4) / (qfact(2) * qfact(2))
    assert qbinom(5, 0) == ONE
    assert qbinom(5, 5) == ONE


def test_qbinom_domain():
    with pytest.raises(DomainError):
        qbinom(3, -1)
    with pytest.raises(DomainError):
        qbinom(3, 4)


def test_qbinom_pascal():
    # balanced q-Pascal rule, checked against sympy for n <= 6
    for n in range(1, 7):
        for k in range(0, n + 1):
            expr = to_sympy(qbinom(n, k))
            prod = sympy.prod(
                [
                    (qs ** (n - k + i) - qs ** -(n - k + i)) / (qs**i - qs**-i)
                    for i in range(1, k + 1)
                ]
            )
            assert sympy.simplify(expr - prod) == 0


# ---------------------------------------------------------------- canonicality


def test_canonical_examples():
    assert str(parse_scalar("1/(q-q^-1)")) == "(q)/(q^2-1)"
    assert str(parse_scalar("q^4")) == "q^4"
    assert str(parse_scalar("3*q^2-1")) == "3*q^2-1"
    assert str(ZERO) == "0"
    assert str(-ONE) == "-1"


@given(scalars(), nonzero_coeffs)
def test_canonical_uniqueness(s, f):
    from qonsager._kernel import pmul

    blown = Scalar(pmul(s.num, f), pmul(s.den, f))
    assert blown == s
    assert blown.num == s.num and blown.den == s.den
    assert hash(blown) == hash(s)


@given(scalars())
def test_denominator_sign_invariant(s):
    assert s.den[-1] > 0


@given(scalars())
def test_gcd_invariant(s):
    from qonsager._kernel import pgcd

    if s.num:
        assert pgcd(s.num, s.den) == [1]


def test_int_fraction_coercion():
    assert Scalar(3) == 3
    assert hash(Scalar(3)) == hash(3)
    assert Scalar(1, 2) == Fraction(1, 2)
    assert hash(Scalar(1, 2)) == hash(Fraction(1, 2))
    assert 2 + Q - Q == 2
    assert Fraction(1, 2) * Q == Q / 2


# ---------------------------------------------------------------- field axioms


@given(scalars(), scalars(), scalars())
@settings(max_examples=60)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a
    assert a * ONE == a
    assert a - a == ZERO
    if b:
        assert (a / b) * b == a
        assert b * b.inv() == ONE


@given(scalars(), st.integers(-4, 4))
def test_pow(a, k):
    if not a and k <= 0:
        return
    expected = ONE
    for _ in range(abs(k)):
        expected = expected * (a if k > 0 else a.inv())
    assert a**k == expected


def test_zero_division():
    with pytest.raises(DomainError):
        ONE / ZERO
    with pytest.raises(DomainError):
        ZERO.inv()
    with pytest.raises(DomainError):
        Scalar([1], [])


# ---------------------------------------------------------------- sympy oracle


@given(scalars(), scalars())
@settings(max_examples=40, deadline=None)
def test_arithmetic_matches_sympy(a, b):
    assert sympy.simplify(to_sympy(a + b) - (to_sympy(a) + to_sympy(b))) == 0
    assert sympy.simplify(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


# ---------------------------------------------------------------- parsing


@given(scalars())
def test_str_parse_roundtrip(s):
    assert parse_scalar(str(s)) == s


def test_parse_variants():
    assert parse_scalar("q**2") == Q**2
    assert parse_scalar(" q ^ -3 ") == Q**-3
    assert parse_scalar("-(q+1)/(q-1)") == -(Q + 1) / (Q - 1)
    assert parse_scalar("2^3") == Scalar(8)
    with pytest.raises(DomainError):
        parse_scalar("q +")
    with pytest.raises(DomainError):
        parse_scalar("x")
    with pytest.raises(DomainError):
        parse_scalar("q^q")


# ---------------------------------------------------------------- specialization


def test_specialize_examples():
    assert specialize(qint(2), 2) == pytest.approx(2.5)
    assert specialize(Q**-1, 4) == pytest.approx(0.25)
    with pytest.raises(EvaluationError):
        specialize(1 / (Q - 1), 1.0)
    with pytest.raises(EvaluationError):
        specialize(Q, 0.0)


@given(scalars(), scalars(), st.sampled_from([1.3, 0.7, 2.0, -1.5]))
@settings(max_examples=60)
def test_specialize_is_ring_hom(a, b, q0):
    try:
        va, vb = specialize(a, q0), specialize(b, q0)
        vs = specialize(a + b, q0)
        vp = specialize(a * b, q0)
    except EvaluationError:
        return
    assert abs(vs - (va + vb)) <= 1e-9 * max(1.0, abs(va), abs(vb))
    assert abs(vp - va * vb) <= 1e-9 * max(1.0, abs(va * vb))


def test_numeric_field_guards():
    with pytest.raises(EvaluationError):
        NumericField(1.0)  # root of unity of order 1
    with pytest.raises(EvaluationError):
        NumericField(-1.0)
    with pytest.raises(EvaluationError):
        NumericField(0.0)
    f = NumericField(1.3)
    assert f.eq(f.qint(2), 1.3 + 1 / 1.3)


# ---------------------------------------------------------------- square roots


@given(scalars())
def test_sqrt_of_square(s):
    r = scalar_sqrt(s * s)
    assert r is not None
    assert r == s or r == -s


def test_sqrt_non_squares():
    assert scalar_sqrt(Q) is None
    assert scalar_sqrt(Q**2 + 1) is None
    assert scalar_sqrt(-(Q**2)) is None
    assert scalar_sqrt(Scalar(2)) is None
    assert scalar_sqrt(ZERO) == ZERO
    assert scalar_sqrt(Q**4) == Q**2


# ---------------------------------------------------------------- kernel parity


ints = st.lists(st.integers(-50, 50), max_size=8).map(
    lambda p: _pykernel.pnorm(list(p))
)


@given(ints, ints)
def test_kernel_parity_mul_gcd(a, b):
    if KERNEL_NAME == "pure-python":
        pytest.skip("compiled kernel not built")
    assert impl.pmul(list(a), list(b)) == _pykernel.pmul(list(a), list(b))
    assert impl.padd(list(a), list(b)) == _pykernel.padd(list(a), list(b))
    assert impl.psub(list(a), list(b)) == _pykernel.psub(list(a), list(b))
    assert impl.pgcd(list(a), list(b)) == _pykernel.pgcd(list(a), list(b))
    if b:
        prod = _pykernel.pmul(list(a), list(b))
        assert impl.pdiv_exact(list(prod), list(b)) == _pykernel.pdiv_exact(
            list(prod), list(b)
        )
        assert impl.prem(list(a), list(b)) == _pykernel.prem(list(a), list(b))


@given(ints, ints)
def test_kernel_mul_bignum_path(a, b):
    # force coefficients past the machine-word fast-path bound
    big = 2**70
    a = [c * big for c in a]
    assert impl.pmul(list(a), list(b)) == _pykernel.pmul(list(a), list(b))


@given(ints, ints)
@settings(max_examples=40, deadline=None)
def test_gcd_matches_sympy(a, b):
    if not a or not b:
        return
    pa = sympy.Poly(list(reversed(a)), qs)
    pb = sympy.Poly(list(reversed(b)), qs)
    expected = sympy.gcd(pa, pb)
    got = _pykernel.pgcd(list(a), list(b))
    got_poly = sympy.Poly(list(reversed(got)), qs)
    # sympy normalizes over QQ; compare up to a rational unit
    quo, rem = sympy.div(got_poly, expected, qs)
    assert rem.is_zero and sympy.degree(quo, qs) <= 0
