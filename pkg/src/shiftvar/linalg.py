"""Dense matrices over F_p and their right null spaces."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, FieldMismatch
from .field import PrimeField


@dataclass(frozen=True)
class MatrixFp:
    """Row-major matrix of canonical residues."""

    field: PrimeField
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    @classmethod
    def from_rows(cls, rows, fld: PrimeField, cols: int | None = None) -> "MatrixFp":
        data = tuple(tuple(int(x) % fld.p for x in r) for r in rows)
        if cols is None:
            if not data:
                raise DimensionMismatch("column count required for an empty matrix")
            cols = len(data[0])
        if any(len(r) != cols for r in data):
            raise DimensionMismatch("ragged matrix rows")
        return cls(fld, len(data), cols, data)

    @classmethod
    def identity(cls, size: int, fld: PrimeField) -> "MatrixFp":
        return cls.from_rows(
            [[int(i == j) for j in range(size)] for i in range(size)], fld, size
        )

    @classmethod
    def zeros(cls, rows: int, cols: int, fld: PrimeField) -> "MatrixFp":
        return cls.from_rows([[0] * cols for _ in range(rows)], fld, cols)

    def __matmul__(self, other):
        if isinstance(other, MatrixFp):
            if other.field != self.field:
                raise FieldMismatch("matrix fields differ")
            if self.cols != other.rows:
                raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            p = self.field.p
            cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
            return MatrixFp.from_rows(
                [[sum(a * b for a, b in zip(r, c)) % p for c in cols] for r in self.entries],
                self.field,
                other.cols,
            )
        return self.apply(other)

    def apply(self, vector) -> tuple:
        if len(vector) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vector)} for {self.cols} columns")
        p = self.field.p
        return tuple(sum(a * b for a, b in zip(r, vector)) % p for r in self.entries)

    def rank(self) -> int:
        return self.cols - len(kernel_basis(self))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.cols


def row_reduce(m: MatrixFp) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns, pivots scaled to 1."""
    p = m.field.p
    a = [list(r) for r in m.entries]
    pivots = []
    row = 0
    for col in range(m.cols):
        if row == len(a):
            break
        pivot = next((i for i in range(row, len(a)) if a[i][col]), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        inv = pow(a[row][col], -1, p)
        a[row] = [x * inv % p for x in a[row]]
        for i in range(len(a)):
            if i != row and a[i][col]:
                c = a[i][col]
                a[i] = [(x - c * y) % p for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
    return a[:row], pivots


def kernel_basis(m: MatrixFp) -> list[tuple[int, ...]]:
    """Basis of ``{v : M v = 0}``.

    One vector per free column, in increasing column order; each has a 1 in
    its free column, 0 in the other free columns, and the negated reduced
    entries in the pivot columns.
    """
    p = m.field.p
    reduced, pivots = row_reduce(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [0] * m.cols
        v[free] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][free] % p
        basis.append(tuple(v))
    return basis


def in_span(vector, basis, fld: PrimeField) -> bool:
    """Membership of ``vector`` in the span of ``basis``."""
    vector = tuple(int(x) % fld.p for x in vector)
    if not any(vector):
        return True
    if not basis:
        return False
    n = len(vector)
    base = MatrixFp.from_rows(basis, fld, n)
    extended = MatrixFp.from_rows(list(basis) + [vector], fld, n)
    return base.rank() == extended.rank()
