"""Exact linear algebra over Q and F_p.

Every hom-space computation in KernelLab ends up here: ranks, kernels,
images, linear solves and the homology of a three-term sequence.
"""

from dataclasses import dataclass
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import FieldMismatchError, NotAComplexError
from .fields import FieldSpec, Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    """Immutable matrix with exact entries over a FieldSpec."""

    field: FieldSpec
    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ValueError(f"ExactMatrix needs a 2-d array, got shape {arr.shape}")
        arr = self.field.normalize_array(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    # construction

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[object]], cols: Optional[int] = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("Ragged rows")
        arr = np.empty((len(rows), width), dtype=object)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                arr[i, j] = field.element(value)
        return cls(field, arr)

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence[object]], rows: int) -> "ExactMatrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls.from_rows(field, columns).T

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "ExactMatrix":
        return cls(field, field.zeros(rows, cols))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        arr = field.zeros(n, n)
        for i in range(n):
            arr[i, i] = field.one
        return cls(field, arr)

    @classmethod
    def unit_vector(cls, field: FieldSpec, n: int, index: int) -> "ExactMatrix":
        arr = field.zeros(n, 1)
        arr[index, 0] = field.one
        return cls(field, arr)

    @classmethod
    def hstack(cls, field: FieldSpec, blocks: Sequence["ExactMatrix"], rows: int) -> "ExactMatrix":
        blocks = list(blocks)
        if not blocks:
            return cls.zeros(field, rows, 0)
        for b in blocks:
            field.ensure_same(b.field)
            if b.rows != rows:
                raise ValueError(f"hstack row mismatch: {b.rows} != {rows}")
        return cls(field, np.concatenate([b.data for b in blocks], axis=1))

    @classmethod
    def vstack(cls, field: FieldSpec, blocks: Sequence["ExactMatrix"], cols: int) -> "ExactMatrix":
        blocks = list(blocks)
        if not blocks:
            return cls.zeros(field, 0, cols)
        for b in blocks:
            field.ensure_same(b.field)
            if b.cols != cols:
                raise ValueError(f"vstack column mismatch: {b.cols} != {cols}")
        return cls(field, np.concatenate([b.data for b in blocks], axis=0))

    @classmethod
    def block(cls, field: FieldSpec, blocks: Sequence[Sequence["ExactMatrix"]],
              row_sizes: Sequence[int], col_sizes: Sequence[int]) -> "ExactMatrix":
        """Assemble a block matrix; ``blocks[i][j]`` has shape row_sizes[i] x col_sizes[j]."""
        arr = field.zeros(sum(row_sizes), sum(col_sizes))
        r0 = 0
        for i, rs in enumerate(row_sizes):
            c0 = 0
            for j, cs in enumerate(col_sizes):
                b = blocks[i][j]
                field.ensure_same(b.field)
                if b.shape != (rs, cs):
                    raise ValueError(f"Block ({i},{j}) has shape {b.shape}, expected {(rs, cs)}")
                arr[r0:r0 + rs, c0:c0 + cs] = b.data
                c0 += cs
            r0 += rs
        return cls(field, arr)

    # shape and access

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.data.T)

    def entry(self, i: int, j: int) -> Scalar:
        return self.field.element(self.data[i, j])

    def column(self, j: int) -> "ExactMatrix":
        return ExactMatrix(self.field, self.data[:, j:j + 1])

    def columns(self) -> List["ExactMatrix"]:
        return [self.column(j) for j in range(self.cols)]

    def select_columns(self, indices: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(self.field, self.data[:, list(indices)].reshape(self.rows, len(indices)))

    def submatrix(self, row_slice: slice, col_slice: slice) -> "ExactMatrix":
        return ExactMatrix(self.field, self.data[row_slice, col_slice])

    def flatten(self) -> "ExactMatrix":
        """Column vector of the entries in row-major order."""
        return ExactMatrix(self.field, self.data.reshape(self.rows * self.cols, 1))

    def is_zero(self) -> bool:
        return not bool(np.any(self.data != 0))

    def to_lists(self) -> List[List[str]]:
        return [[self.field.format(x) for x in row] for row in self.data]

    # arithmetic

    def _check(self, other: "ExactMatrix") -> None:
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"Expected ExactMatrix, got {type(other).__name__}")
        if self.field != other.field:
            raise FieldMismatchError(f"Mixed fields: {self.field.name} and {other.field.name}")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.shape} by {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return ExactMatrix.zeros(self.field, self.rows, other.cols)
        return ExactMatrix(self.field, self.data @ other.data)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"Cannot add {self.shape} and {other.shape}")
        return ExactMatrix(self.field, self.data + other.data)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"Cannot subtract {self.shape} and {other.shape}")
        return ExactMatrix(self.field, self.data - other.data)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.field, -self.data)

    def scale(self, c: object) -> "ExactMatrix":
        c = self.field.element(c)
        if self.data.size == 0:
            return self
        return ExactMatrix(self.field, self.data * c)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.data.size == 0 or other.data.size == 0:
            return ExactMatrix.zeros(self.field, self.rows * other.rows, self.cols * other.cols)
        return ExactMatrix(self.field, np.kron(self.data, other.data))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.all(self.data == other.data)))

    def __hash__(self) -> int:
        return hash((self.field, self.shape, tuple(str(x) for x in self.data.flat)))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.field.name}, {self.to_lists()})"

    @property
    def rank(self) -> int:
        return len(_echelon(self)[1])


def _echelon(m: ExactMatrix) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and pivot columns, leftmost pivot first."""
    field = m.field
    a = np.array(m.data, copy=True)
    nrows, ncols = a.shape
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        candidates = np.nonzero((a[row:, col] != 0).astype(bool))[0]
        if candidates.size == 0:
            continue
        pivot_row = row + int(candidates[0])
        if pivot_row != row:
            a[[row, pivot_row]] = a[[pivot_row, row]]
        inverse = field.inv(a[row, col])
        a[row] = field.normalize_array((a[row] * inverse).reshape(1, ncols))[0]
        factors = a[:, col].copy()
        factors[row] = 0
        targets = np.nonzero((factors != 0).astype(bool))[0]
        if targets.size:
            update = a[targets] - np.outer(factors[targets], a[row])
            a[targets] = field.normalize_array(update)
        pivots.append(col)
        row += 1
    return a, pivots


def row_reduce(m: ExactMatrix) -> ExactMatrix:
    """Reduced row-echelon form of ``m``; rank is the number of pivots."""
    reduced, _ = _echelon(m)
    return ExactMatrix(m.field, reduced)


def pivot_columns(m: ExactMatrix) -> List[int]:
    return _echelon(m)[1]


def rank(m: ExactMatrix) -> int:
    return m.rank


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """Columns spanning ker m, one per free column of the echelon form."""
    field = m.field
    reduced, pivots = _echelon(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = field.zeros(m.cols, len(free))
    for k, j in enumerate(free):
        basis[j, k] = field.one
        for i, pc in enumerate(pivots):
            basis[pc, k] = field.neg(reduced[i, j])
    return ExactMatrix(field, basis)


def image_basis(m: ExactMatrix) -> ExactMatrix:
    """The pivot columns of ``m``: a basis of its column space."""
    return m.select_columns(pivot_columns(m))


def solve(a: ExactMatrix, b: ExactMatrix) -> Optional[ExactMatrix]:
    """Some x with a·x = b, or None when the system is inconsistent."""
    a._check(b)
    if a.rows != b.rows:
        raise ValueError(f"solve: {a.shape} against right-hand side {b.shape}")
    field = a.field
    augmented = ExactMatrix.hstack(field, [a, b], a.rows)
    reduced, pivots = _echelon(augmented)
    if any(p >= a.cols for p in pivots):
        return None
    x = field.zeros(a.cols, b.cols)
    for i, pc in enumerate(pivots):
        x[pc, :] = reduced[i, a.cols:]
    return ExactMatrix(field, x)


def in_span(basis: ExactMatrix, vectors: ExactMatrix) -> bool:
    """True iff every column of ``vectors`` lies in the column span of ``basis``."""
    if vectors.cols == 0:
        return True
    combined = ExactMatrix.hstack(basis.field, [basis, vectors], basis.rows)
    return combined.rank == basis.rank


def span_equal(a: ExactMatrix, b: ExactMatrix) -> bool:
    return in_span(a, b) and in_span(b, a)


def intersect_spans(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Basis of span(a) ∩ span(b)."""
    field = a.field
    stacked = ExactMatrix.hstack(field, [a, -b], a.rows)
    kernel = kernel_basis(stacked)
    return image_basis(a @ kernel.submatrix(slice(0, a.cols), slice(None)))


def preimage(m: ExactMatrix, subspace: ExactMatrix) -> ExactMatrix:
    """Basis of {v : m·v ∈ span(subspace)}."""
    field = m.field
    stacked = ExactMatrix.hstack(field, [m, -subspace], m.rows)
    kernel = kernel_basis(stacked)
    return image_basis(kernel.submatrix(slice(0, m.cols), slice(None)))


def extend_basis(sub: ExactMatrix, space: ExactMatrix) -> ExactMatrix:
    """Columns of ``space`` completing an independent ``sub`` to a basis of span(sub, space)."""
    combined = ExactMatrix.hstack(sub.field, [sub, space], sub.rows)
    chosen = [p - sub.cols for p in pivot_columns(combined) if p >= sub.cols]
    return space.select_columns(chosen)


@dataclass(frozen=True)
class SubQuotient:
    """A space N/D with D ⊂ N ⊂ k^n.

    ``subspace`` holds a basis of D, ``representatives`` vectors of N whose
    classes form a basis of N/D.
    """

    ambient_dim: int
    subspace: ExactMatrix
    representatives: ExactMatrix

    @classmethod
    def from_spans(cls, numerator: ExactMatrix, denominator: ExactMatrix) -> "SubQuotient":
        if not in_span(numerator, denominator):
            raise NotAComplexError("Denominator is not contained in the numerator")
        sub = image_basis(denominator)
        reps = extend_basis(sub, numerator)
        return cls(numerator.rows, sub, reps)

    @property
    def field(self) -> FieldSpec:
        return self.subspace.field

    @property
    def dimension(self) -> int:
        return self.representatives.cols

    @property
    def is_zero(self) -> bool:
        return self.dimension == 0

    def numerator(self) -> ExactMatrix:
        return ExactMatrix.hstack(self.field, [self.subspace, self.representatives], self.ambient_dim)

    def contains(self, vectors: ExactMatrix) -> bool:
        return in_span(self.numerator(), vectors)

    def is_trivial_class(self, vectors: ExactMatrix) -> bool:
        return in_span(self.subspace, vectors)

    def coordinates(self, vectors: ExactMatrix) -> ExactMatrix:
        """Coordinates of the classes of ``vectors`` in the representative basis."""
        basis = ExactMatrix.hstack(self.field, [self.representatives, self.subspace], self.ambient_dim)
        x = solve(basis, vectors)
        if x is None:
            raise ValueError("Vector does not lie in the numerator of the subquotient")
        return x.submatrix(slice(0, self.dimension), slice(None))

    def same_space(self, other: "SubQuotient") -> bool:
        """Equal numerators and equal denominators inside the same ambient space."""
        return (self.ambient_dim == other.ambient_dim
                and span_equal(self.subspace, other.subspace)
                and span_equal(self.numerator(), other.numerator()))


def homology_mid(f: ExactMatrix, g: ExactMatrix) -> SubQuotient:
    """ker g / im f for a composable pair with g·f = 0."""
    f._check(g)
    if g.cols != f.rows:
        raise ValueError(f"homology_mid: {g.shape} does not follow {f.shape}")
    if not (g @ f).is_zero():
        raise NotAComplexError("not a complex: g·f ≠ 0")
    return SubQuotient.from_spans(kernel_basis(g), f)
