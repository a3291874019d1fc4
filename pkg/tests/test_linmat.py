"""Matrices, gradings, q-brackets, triangularity, numeric eigenstructure."""

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qonsager.errors import DomainError, NumericError
from qonsager.linmat import (
    BlockTriangularityError,
    GradedOperator,
    Grading,
    Matrix,
    assert_block_triangular,
    degree_components,
    generalized_eigenspaces,
    qbracket,
)
from qonsager.scalars import ExactField, NumericField, Q, Scalar, qint

F = ExactField()

entry_pool = [
    Scalar(0),
    Scalar(1),
    Scalar(-1),
    Scalar(2),
    Q,
    Q**-1,
    Q + 1,
    Q - Q**-1,
    Scalar(1, 2),
]


def mats(n):
    return st.lists(
        st.lists(st.sampled_from(entry_pool), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    ).map(lambda rows: Matrix(rows, F))


def to_sympy_matrix(A):
    qs = sympy.Symbol("q")

    def conv(s):
        num = sum(c * qs**k for k, c in enumerate(s.num))
        den = sum(c * qs**k for k, c in enumerate(s.den))
        return num / den

    return sympy.Matrix([[conv(a) for a in r] for r in A.rows])


# ------------------------------------------------------------------ qbracket


def test_qbracket_sl2_pair():
    # [E, F]_1 on the 2-dim module equals (K - K^-1)/(q - q^-1)
    E = Matrix([[0, 1], [0, 0]], F).map_entries(Scalar)
    Fm = Matrix([[0, 0], [1, 0]], F).map_entries(Scalar)
    K = Matrix.diagonal([Q, Q**-1], F)
    lhs = qbracket(E, Fm, F.one)
    rhs = (K - K.inverse()).scale(1 / (Q - Q**-1))
    assert lhs == rhs


@given(mats(3), mats(3), st.sampled_from([Q, Q**-1, Q**2, Scalar(1)]))
@settings(max_examples=30)
def test_qbracket_antisymmetry(A, B, v):
    # [A,B]_v = -v [B,A]_{1/v}
    assert qbracket(A, B, v) == qbracket(B, A, v.inv()).scale(-v)


# ------------------------------------------------------------------ arithmetic


@given(mats(3), mats(3), mats(3))
@settings(max_examples=30)
def test_ring_axioms(A, B, C):
    assert (A + B) + C == A + (B + C)
    assert A @ (B @ C) == (A @ B) @ C
    assert A @ (B + C) == A @ B + A @ C
    assert (A + B).transpose() == A.transpose() + B.transpose()
    assert (A @ B).transpose() == B.transpose() @ A.transpose()


@given(mats(2), mats(2), mats(2), mats(2))
@settings(max_examples=20)
def test_kron_mixed_product(A, B, C, D):
    assert A.kron(B) @ C.kron(D) == (A @ C).kron(B @ D)


def test_inverse_roundtrip():
    A = Matrix([[Q, Scalar(1), Scalar(0)],
                [Scalar(0), Q**-1, Q + 1],
                [Scalar(0), Scalar(0), Scalar(2)]], F)
    assert A @ A.inverse() == Matrix.identity(3, F)
    assert A.inverse() @ A == Matrix.identity(3, F)
    with pytest.raises(DomainError):
        Matrix.zeros(2, 2, F).inverse()


@given(mats(3))
@settings(max_examples=25, deadline=None)
def test_charpoly_matches_sympy(A):
    got = A.charpoly()
    qs = sympy.Symbol("q")
    lam = sympy.Symbol("lam")
    expected = to_sympy_matrix(A).charpoly(lam)
    mine = sum(
        to_sympy_matrix(Matrix([[c]], F))[0, 0] * lam ** (A.n - k)
        for k, c in enumerate(got)
    )
    assert sympy.simplify(sympy.expand(mine - expected.as_expr())) == 0


@given(mats(3))
@settings(max_examples=20)
def test_cayley_hamilton(A):
    coeffs = A.charpoly()
    acc = Matrix.zeros(3, 3, F)
    for k, c in enumerate(coeffs):
        acc = acc + (A ** (3 - k)).scale(c)
    assert acc.is_zero()


# ------------------------------------------------------------------ gradings


def test_grading_tensor_and_total():
    g1 = Grading([(0,), (-1,)])
    g2 = Grading([(0,), (-1,), (-2,)])
    gt = g1.tensor(g2)
    assert gt.degrees == [
        (0, 0), (0, -1), (0, -2), (-1, 0), (-1, -1), (-1, -2),
    ]
    assert gt.total().degrees == [(0,), (-1,), (-2,), (-1,), (-2,), (-3,)]
    assert gt.project(1).degrees == [(0,), (-1,), (-2,)] * 2
    assert gt.total().pieces() == {
        (-3,): [5], (-2,): [2, 4], (-1,): [1, 3], (0,): [0],
    }


@given(mats(4), st.lists(st.integers(-3, 0), min_size=4, max_size=4))
@settings(max_examples=30)
def test_degree_components_reassemble(A, degs):
    g = Grading([(d,) for d in degs])
    go = degree_components(A, g)
    assert go.sum() == A
    # each component is a pure shift
    for s, M in go.components.items():
        for i, j, a in M.nonzero_entries():
            assert g.shift(i, j) == s


def test_block_triangular_witness():
    g = Grading([(0,), (-1,)])
    ok = Matrix([[Q, Scalar(0)], [Scalar(1), Scalar(2)]], F)  # lowering only
    blocks = assert_block_triangular(ok, g, "lowering")
    assert blocks[0][1].rows == [[Q]]
    assert blocks[-1][1].rows == [[Scalar(2)]]
    with pytest.raises(BlockTriangularityError) as exc:
        assert_block_triangular(ok, g, "raising")
    assert exc.value.witness == (1, 0, (-1, 0))


def test_block_charpoly_product():
    # charpoly of a block-triangular matrix = product over diagonal blocks
    g = Grading([(0,), (0,), (-1,)])
    A = Matrix(
        [
            [Q, Scalar(1), Scalar(0)],
            [Scalar(2), Q**-1, Scalar(0)],
            [Scalar(1), Q, Scalar(3)],
        ],
        F,
    )
    blocks = assert_block_triangular(A, g, "lowering")
    lam = sympy.Symbol("lam")
    total = sympy.prod(
        [
            to_sympy_matrix(blk).charpoly(lam).as_expr()
            for _, blk in blocks.values()
        ]
    )
    whole = to_sympy_matrix(A).charpoly(lam).as_expr()
    assert sympy.simplify(total - whole) == 0


# ------------------------------------------------------------------ numeric


def test_generalized_eigenspaces_diagonalizable():
    rng = np.random.default_rng(7)
    S = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    D = np.diag([2.0, 2.0, -1.0, 0.5])
    A = S @ D @ np.linalg.inv(S)
    spaces = generalized_eigenspaces(A, tol=1e-9)
    assert [(round(w.real, 6), m) for w, m, _ in spaces] == [
        (-1.0, 1),
        (0.5, 1),
        (2.0, 2),
    ]
    for w, m, basis in spaces:
        resid = np.linalg.norm(
            np.linalg.matrix_power(A - w * np.eye(4), m) @ basis
        )
        assert resid <= 1e-6


def test_generalized_eigenspaces_jordan_block():
    # nontrivial Jordan structure: nilpotent rank-1 perturbation
    J = np.array([[3.0, 1.0], [0.0, 3.0]])
    spaces = generalized_eigenspaces(J)
    assert len(spaces) == 1
    w, m, basis = spaces[0]
    assert abs(w - 3.0) < 1e-9 and m == 2
    assert basis.shape == (2, 2)


def test_generalized_eigenspaces_ill_conditioned():
    A = np.diag([1.0, 1.0 + 5e-6])
    with pytest.raises(NumericError):
        generalized_eigenspaces(A, tol=1e-9)


def test_numeric_matrix_roundtrip():
    nf = NumericField(1.3)
    K = Matrix.diagonal([nf.q, 1 / nf.q], nf)
    E = Matrix([[0j, nf.one], [0j, 0j]], nf)
    got = qbracket(K, E, nf.one)
    expected = E.scale(nf.q - 1 / nf.q)
    assert (got - expected).is_zero()
    arr = K.to_ndarray()
    assert arr.shape == (2, 2) and arr[0, 0] == pytest.approx(1.3)
