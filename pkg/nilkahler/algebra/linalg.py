"""Exact linear algebra over Scalars.

Sparse vectors are dicts mapping a coordinate to a nonzero Scalar. The
row reduction keeps every pivot row fully reduced, so a new row only has to
be cleared against the pivots it touches.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from nilkahler.algebra.scalars import ONE, ZERO, Scalar
from nilkahler.exceptions import SingularMatrixError

SparseVector = dict[int, Scalar]


def _axpy(target: SparseVector, factor: Scalar, source: SparseVector) -> None:
    """target -= factor * source, in place."""
    for key, value in source.items():
        updated = target.get(key, ZERO) - factor * value
        if updated.is_zero():
            target.pop(key, None)
        else:
            target[key] = updated


class Echelon:
    """A growing set of vectors kept in reduced row echelon form."""

    def __init__(self, rows: Iterable[SparseVector] = ()):
        self.pivot_rows: dict[int, SparseVector] = {}
        # column -> pivots of rows holding a nonzero entry in that column
        self._holders: dict[int, set[int]] = {}
        for row in rows:
            self.add(row)

    def __len__(self):
        return len(self.pivot_rows)

    def reduce(self, vector: SparseVector) -> SparseVector:
        """The remainder of a vector after clearing every pivot column."""
        row = {k: v for k, v in vector.items() if not v.is_zero()}
        for col in [c for c in row if c in self.pivot_rows]:
            if col in row:
                _axpy(row, row[col], self.pivot_rows[col])
        return row

    def add(self, vector: SparseVector) -> bool:
        """Insert a vector; False when it already lies in the span."""
        row = self.reduce(vector)
        if not row:
            return False
        holders, pivot_rows = self._holders, self.pivot_rows
        col = min(row)
        inverse = row[col].inverse()
        row = {k: v * inverse for k, v in row.items()}
        for other in list(holders.get(col, ())):
            prow = pivot_rows[other]
            if col in prow:
                before = set(prow)
                _axpy(prow, prow[col], row)
                for key in before - set(prow):
                    holders[key].discard(other)
                for key in set(prow) - before:
                    holders.setdefault(key, set()).add(other)
        holders.pop(col, None)
        pivot_rows[col] = row
        for key in row:
            if key != col:
                holders.setdefault(key, set()).add(col)
        return True


def rref(rows: Iterable[SparseVector]) -> dict[int, SparseVector]:
    """Reduced row echelon form as a map pivot column -> normalized row."""
    return dict(sorted(Echelon(rows).pivot_rows.items()))


def rank(vectors: Iterable[SparseVector]) -> int:
    return len(rref(vectors))


def nullspace(rows: Sequence[SparseVector], ncols: int) -> list[SparseVector]:
    """Basis of {x : row . x = 0 for every row}, x indexed by 0..ncols-1."""
    reduced = rref(rows)
    basis = []
    for free in range(ncols):
        if free in reduced:
            continue
        vector = {free: ONE}
        for pivot, row in reduced.items():
            if free in row:
                vector[pivot] = -row[free]
        basis.append(vector)
    return basis


def dot(a: SparseVector, b: SparseVector) -> Scalar:
    if len(a) > len(b):
        a, b = b, a
    total = ZERO
    for key, value in a.items():
        if key in b:
            total = total + value * b[key]
    return total


def solve(columns: Sequence[SparseVector], target: SparseVector) -> SparseVector | None:
    """Some x with sum_j x_j columns[j] = target, or None if target is not in the span."""
    m = len(columns)
    coordinates = sorted({k for col in columns for k in col} | set(target))
    rows = []
    for coordinate in coordinates:
        row = {j: col[coordinate] for j, col in enumerate(columns) if coordinate in col}
        if coordinate in target:
            row[m] = target[coordinate]
        if row:
            rows.append(row)
    reduced = rref(rows)
    if m in reduced:
        return None
    return {pivot: row[m] for pivot, row in reduced.items() if m in row}


def separating_functional(columns: Sequence[SparseVector], target: SparseVector) -> SparseVector | None:
    """A functional f with f(col) = 0 for all columns and f(target) != 0, or None."""
    if not target:
        return None
    coordinates = sorted({k for col in columns for k in col} | set(target))
    position = {k: i for i, k in enumerate(coordinates)}
    transposed = [{position[k]: v for k, v in col.items()} for col in columns]
    local_target = {position[k]: v for k, v in target.items()}
    for vector in nullspace(transposed, len(coordinates)):
        if not dot(vector, local_target).is_zero():
            return {coordinates[i]: v for i, v in vector.items()}
    return None


def dense_to_rows(matrix: Sequence[Sequence[Scalar]]) -> list[SparseVector]:
    return [{j: Scalar.coerce(v) for j, v in enumerate(row) if not Scalar.coerce(v).is_zero()} for row in matrix]


def determinant(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    size = len(matrix)
    work = [[Scalar.coerce(v) for v in row] for row in matrix]
    det = ONE
    for col in range(size):
        pivot = next((r for r in range(col, size) if not work[r][col].is_zero()), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det = det * work[col][col]
        inverse = work[col][col].inverse()
        for r in range(col + 1, size):
            factor = work[r][col] * inverse
            if not factor.is_zero():
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return det


def inverse(matrix: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Gauss-Jordan inverse; raises SingularMatrixError with the determinant 0."""
    size = len(matrix)
    work = [[Scalar.coerce(v) for v in row] + [ONE if i == j else ZERO for j in range(size)]
            for i, row in enumerate(matrix)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if not work[r][col].is_zero()), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular", determinant=ZERO)
        work[col], work[pivot] = work[pivot], work[col]
        inv = work[col][col].inverse()
        work[col] = [v * inv for v in work[col]]
        for r in range(size):
            if r != col and not work[r][col].is_zero():
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return [row[size:] for row in work]


def matmul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    inner = len(b)
    cols = len(b[0]) if b else 0
    result = []
    for row in a:
        out = []
        for j in range(cols):
            total = ZERO
            for k in range(inner):
                if not row[k].is_zero() and not b[k][j].is_zero():
                    total = total + row[k] * b[k][j]
            out.append(total)
        result.append(out)
    return result


def identity(size: int) -> list[list[Scalar]]:
    return [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]


def conjugate_transpose(matrix: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    return [[matrix[j][i].conj() for j in range(len(matrix))] for i in range(len(matrix[0]))]


def is_hermitian(matrix: Sequence[Sequence[Scalar]]) -> bool:
    return [list(row) for row in matrix] == conjugate_transpose(matrix)


def hermitian_decomposition(matrix: Sequence[Sequence[Scalar]]) -> tuple[list[Scalar], list[Scalar] | None]:
    """LDL* pivots of a Hermitian matrix, stopping at the first non-positive pivot.

    Returns (pivots, witness): witness is None when every pivot is positive,
    otherwise an exact vector x with x* A x equal to the failing pivot (<= 0).
    """
    size = len(matrix)
    work = [[Scalar.coerce(v) for v in row] for row in matrix]
    lower = identity(size)
    pivots: list[Scalar] = []
    for r in range(size):
        pivot = work[r][r]
        pivots.append(pivot)
        if pivot <= 0:
            # solve L* x = e_r on the leading block
            x = [ZERO] * size
            for k in range(r, -1, -1):
                value = ONE if k == r else ZERO
                for j in range(k + 1, r + 1):
                    value = value - lower[j][k].conj() * x[j]
                x[k] = value
            return pivots, x
        inv = pivot.inverse()
        for i in range(r + 1, size):
            factor = work[i][r] * inv
            lower[i][r] = factor
            if factor.is_zero():
                continue
            for j in range(r + 1, size):
                work[i][j] = work[i][j] - factor * work[r][j]
    return pivots, None


def hermitian_value(matrix: Sequence[Sequence[Scalar]], vector: Sequence[Scalar]) -> Scalar:
    """x* A x."""
    total = ZERO
    for i, xi in enumerate(vector):
        if xi.is_zero():
            continue
        row_sum = ZERO
        for j, xj in enumerate(vector):
            if not xj.is_zero() and not matrix[i][j].is_zero():
                row_sum = row_sum + matrix[i][j] * xj
        total = total + xi.conj() * row_sum
    return total
