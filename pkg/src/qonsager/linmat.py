"""Dense matrices over the exact or numeric coefficient field, plus the
grading bookkeeping every certification suite leans on.

A Matrix stores a list-of-rows over a field backend (see qonsager.scalars);
all binary operations assume both operands live over the same backend.  The
product is written either ``A @ B`` or ``A * B``; ``c * A`` with a scalar-like
``c`` scales entrywise.

A Grading assigns every basis index an integer degree *vector* — length 1 for
a single module (top degree 0, weights descending), length f for an f-fold
tensor product, where the degrees of the factors are kept as separate
coordinates rather than summed.  degree_components splits an operator by the
shift vector (row degree minus column degree); assert_block_triangular checks
one-dimensional shifts are all >= 0 (raising) or <= 0 (lowering) and returns
the diagonal blocks.

generalized_eigenspaces is numeric-only by design: exact mode never needs
eigenvectors, and Jordan structure over Q(q) is out of scope.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import DomainError, NumericError
from .scalars import ExactField, Scalar

__all__ = [
    "Matrix",
    "Grading",
    "GradedOperator",
    "qbracket",
    "degree_components",
    "assert_block_triangular",
    "BlockTriangularityError",
    "generalized_eigenspaces",
]


class Matrix:
    __slots__ = ("n", "m", "rows", "field")

    def __init__(self, rows, field):
        self.rows = [list(r) for r in rows]
        self.n = len(self.rows)
        self.m = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.m for r in self.rows):
            raise DomainError("ragged matrix rows")
        self.field = field

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, n, m, field):
        z = field.zero
        return cls([[z] * m for _ in range(n)], field)

    @classmethod
    def identity(cls, n, field):
        z, one = field.zero, field.one
        return cls(
            [[one if i == j else z for j in range(n)] for i in range(n)], field
        )

    @classmethod
    def diagonal(cls, entries, field):
        z = field.zero
        n = len(entries)
        return cls(
            [[entries[i] if i == j else z for j in range(n)] for i in range(n)],
            field,
        )

    def copy(self):
        return Matrix(self.rows, self.field)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return Matrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
            self.field,
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return Matrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
            self.field,
        )

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.field)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.m != other.n:
            raise DomainError(f"shape mismatch {self.n}x{self.m} @ {other.n}x{other.m}")
        bt = list(zip(*other.rows))
        z = self.field.zero
        out = []
        for ra in self.rows:
            row = []
            for cb in bt:
                acc = z
                for a, b in zip(ra, cb):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(out, self.field)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Matrix):
            return NotImplemented
        return self.scale(other)

    def scale(self, c):
        return Matrix([[c * a for a in r] for r in self.rows], self.field)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = Matrix.identity(self.n, self.field)
        base = self
        while k:
            if k & 1:
                out = out @ base
            k >>= 1
            if k:
                base = base @ base
        return out

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    # -- structure ------------------------------------------------------------

    def transpose(self):
        return Matrix(list(zip(*self.rows)), self.field)

    def trace(self):
        acc = self.field.zero
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def kron(self, other):
        out = []
        for ra in self.rows:
            for rb in other.rows:
                out.append([a * b for a in ra for b in rb])
        return Matrix(out, self.field)

    def submatrix(self, rows, cols):
        return Matrix(
            [[self.rows[i][j] for j in cols] for i in rows], self.field
        )

    def diagonal_entries(self):
        return [self.rows[i][i] for i in range(min(self.n, self.m))]

    def is_zero(self, scale=1.0):
        f = self.field
        return all(f.is_zero(a, scale) for r in self.rows for a in r)

    def max_abs(self):
        """Largest |entry| after numeric coercion — the natural residual scale."""
        if self.field.exact:
            raise DomainError("max_abs is a numeric-backend notion")
        return max((abs(a) for r in self.rows for a in r), default=0.0)

    def nonzero_entries(self):
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if a:
                    yield i, j, a

    # -- solved forms ----------------------------------------------------------

    def inverse(self):
        if self.n != self.m:
            raise DomainError("inverting a non-square matrix")
        f = self.field
        n = self.n
        a = [list(r) for r in self.rows]
        b = [list(r) for r in Matrix.identity(n, f).rows]
        for col in range(n):
            piv = None
            if f.exact:
                for i in range(col, n):
                    if a[i][col]:
                        piv = i
                        break
            else:
                piv = max(range(col, n), key=lambda i: abs(a[i][col]))
                if f.is_zero(a[piv][col]):
                    piv = None
            if piv is None:
                raise DomainError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
            inv = f.one / a[col][col]
            a[col] = [x * inv for x in a[col]]
            b[col] = [x * inv for x in b[col]]
            for i in range(n):
                if i != col and a[i][col]:
                    c = a[i][col]
                    a[i] = [x - c * y for x, y in zip(a[i], a[col])]
                    b[i] = [x - c * y for x, y in zip(b[i], b[col])]
        return Matrix(b, f)

    def charpoly(self):
        """Monic characteristic polynomial, coefficients descending in λ,
        via the Faddeev–LeVerrier recurrence (division-free except by k)."""
        if self.n != self.m:
            raise DomainError("charpoly of a non-square matrix")
        f = self.field
        n = self.n
        coeffs = [f.one]
        M = Matrix.identity(n, f)
        for k in range(1, n + 1):
            AM = self @ M
            ck = -(AM.trace() * f.from_fraction(1, k))
            coeffs.append(ck)
            M = AM + Matrix.identity(n, f).scale(ck)
        return coeffs

    def to_ndarray(self):
        if self.field.exact:
            raise DomainError("to_ndarray needs a numeric-backend matrix")
        return np.array(
            [[complex(a) for a in r] for r in self.rows], dtype=complex
        )

    def map_entries(self, fn, field=None):
        return Matrix(
            [[fn(a) for a in r] for r in self.rows],
            field if field is not None else self.field,
        )

    def __repr__(self):
        if self.n <= 6 and self.m <= 6:
            body = "; ".join(
                " ".join(str(a) for a in r) for r in self.rows
            )
            return f"Matrix[{body}]"
        return f"Matrix({self.n}x{self.m})"


def qbracket(A: Matrix, B: Matrix, v) -> Matrix:
    """[A, B]_v = AB - v BA; v = 1 is the plain commutator."""
    return A @ B - (B @ A).scale(v)


# -- gradings ----------------------------------------------------------------


class Grading:
    """Integer degree vectors, one per basis index."""

    __slots__ = ("degrees",)

    def __init__(self, degrees):
        self.degrees = [tuple(d) for d in degrees]
        if self.degrees:
            ar = len(self.degrees[0])
            if any(len(d) != ar for d in self.degrees):
                raise DomainError("grading degree vectors of mixed arity")

    @property
    def dim(self):
        return len(self.degrees)

    @property
    def arity(self):
        return len(self.degrees[0]) if self.degrees else 0

    def tensor(self, other: "Grading") -> "Grading":
        """Kron-ordered concatenation: index i*dim(other)+j gets deg_i ++ deg_j."""
        return Grading(
            [di + dj for di in self.degrees for dj in other.degrees]
        )

    def total(self) -> "Grading":
        """Collapse to a one-dimensional grading by summing coordinates."""
        return Grading([(sum(d),) for d in self.degrees])

    def project(self, coord: int) -> "Grading":
        return Grading([(d[coord],) for d in self.degrees])

    def pieces(self):
        """degree vector -> ordered list of basis indices."""
        out = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return dict(sorted(out.items()))

    def shift(self, i: int, j: int):
        return tuple(a - b for a, b in zip(self.degrees[i], self.degrees[j]))

    def __eq__(self, other):
        return isinstance(other, Grading) and self.degrees == other.degrees

    def __repr__(self):
        return f"Grading({self.degrees})"


class GradedOperator:
    """An operator split into pure degree-shift components."""

    __slots__ = ("components", "n", "field")

    def __init__(self, components, n, field):
        self.components = components
        self.n = n
        self.field = field

    def shifts(self):
        return sorted(self.components)

    def component(self, shift) -> Matrix:
        shift = tuple(shift)
        if shift in self.components:
            return self.components[shift]
        return Matrix.zeros(self.n, self.n, self.field)

    def sum(self) -> Matrix:
        acc = Matrix.zeros(self.n, self.n, self.field)
        for mat in self.components.values():
            acc = acc + mat
        return acc


def degree_components(A: Matrix, g: Grading) -> GradedOperator:
    """Split A by degree shift; exact reassembly is guaranteed."""
    if A.n != g.dim or A.m != g.dim:
        raise DomainError("grading dimension does not match the matrix")
    f = A.field
    comps = {}
    for i, j, a in A.nonzero_entries():
        s = g.shift(i, j)
        if s not in comps:
            comps[s] = Matrix.zeros(A.n, A.m, f)
        comps[s].rows[i][j] = a
    return GradedOperator(comps, A.n, f)


class BlockTriangularityError(DomainError):
    """Raised when a matrix fails a block-triangularity assertion; carries
    the offending (row, col, (deg_row, deg_col)) witness."""

    def __init__(self, witness):
        self.witness = witness
        row, col, degs = witness
        super().__init__(
            f"triangularity violated at entry ({row},{col}), degrees {degs}"
        )


def assert_block_triangular(A: Matrix, g: Grading, direction: str = "raising"):
    """Check every nonzero entry has deg(row) >= deg(col) (raising) or
    <= (lowering) for a one-dimensional grading; return the diagonal blocks
    as a dict degree -> (indices, Matrix).  Raises BlockTriangularityError
    with a (row, col, (deg_row, deg_col)) witness otherwise."""
    if g.arity != 1:
        raise DomainError("block triangularity needs a one-dimensional grading")
    if direction not in ("raising", "lowering"):
        raise DomainError(f"unknown direction {direction!r}")
    scale = 1.0 if A.field.exact else max(A.max_abs(), 1.0)
    for i, j, a in A.nonzero_entries():
        if A.field.is_zero(a, scale):
            continue
        di, dj = g.degrees[i][0], g.degrees[j][0]
        if (direction == "raising" and di < dj) or (
            direction == "lowering" and di > dj
        ):
            raise BlockTriangularityError((i, j, (di, dj)))
    blocks = {}
    for deg, idx in g.pieces().items():
        blocks[deg[0]] = (idx, A.submatrix(idx, idx))
    return blocks


# -- numeric eigenstructure ---------------------------------------------------


def generalized_eigenspaces(A, tol: float = 1e-9):
    """Generalized eigenspace decomposition of a numeric matrix.

    Returns a list of (eigenvalue, multiplicity, basis) triples, where basis
    is an (n, multiplicity) ndarray spanning ker (A - λ)^multiplicity, sorted
    by (Re λ, Im λ).  Raises NumericError when the eigenvalue clusters are
    ambiguous at the requested tolerance or a residual check fails
    (ill-conditioning diagnostics rather than wrong answers).
    """
    if isinstance(A, Matrix):
        arr = A.to_ndarray()
    else:
        arr = np.asarray(A, dtype=complex)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise DomainError("generalized_eigenspaces needs a square matrix")
    scale = max(1.0, float(np.abs(arr).max()))
    evals = np.linalg.eigvals(arr)
    order = np.lexsort((evals.imag, evals.real))
    evals = evals[order]
    # greedy clustering along the sorted list
    clusters = []
    for w in evals:
        if clusters and abs(w - clusters[-1][-1]) <= 1e3 * tol * scale:
            clusters[-1].append(w)
        else:
            clusters.append([w])
    centers = [sum(c) / len(c) for c in clusters]
    for a, b in zip(centers, centers[1:]):
        if abs(a - b) < 1e4 * tol * scale:
            raise NumericError(
                f"eigenvalue clusters {a} and {b} are too close to separate "
                f"at tol={tol}; raise tol or move q0"
            )
    out = []
    eye = np.eye(n)
    for center, cluster in zip(centers, clusters):
        mult = len(cluster)
        M = np.linalg.matrix_power(arr - center * eye, mult)
        _, sv, vh = np.linalg.svd(M)
        small = sv <= tol * scale**mult * n
        k = int(small.sum())
        if k != mult:
            raise NumericError(
                f"eigenvalue {center}: algebraic multiplicity {mult} but "
                f"nullspace of dimension {k} at the working tolerance"
            )
        basis = vh.conj().T[:, n - mult:]
        resid = np.linalg.norm(M @ basis, axis=0)
        norms = np.linalg.norm(basis, axis=0)
        if np.any(resid > 1e3 * tol * scale**mult * norms):
            raise NumericError(
                f"eigenvalue {center}: generalized eigenvector residual "
                f"{resid.max():.3e} exceeds tolerance"
            )
        out.append((center, mult, basis))
    return out
