from fractions import Fraction

import pytest

from nilkahler.algebra import linalg
from nilkahler.algebra.scalars import ONE, ZERO, I, Scalar
from nilkahler.exceptions import SingularMatrixError


def vec(*values):
    return {j: Scalar.coerce(v) for j, v in enumerate(values) if v}


def test_rank_and_rref():
    rows = [vec(1, 2, 0), vec(2, 4, 0), vec(0, 1, 1)]
    assert linalg.rank(rows) == 2
    reduced = linalg.rref(rows)
    assert set(reduced) == {0, 1}
    assert reduced[0] == vec(1, 0, -2)


def test_echelon_grows_incrementally():
    echelon = linalg.Echelon([vec(1, 2, 0), vec(0, 1, 1)])
    assert len(echelon) == 2
    assert not echelon.add(vec(1, 3, 1))
    assert echelon.reduce(vec(1, 3, 1)) == {}
    assert echelon.add(vec(0, 0, 1))
    assert len(echelon) == 3
    assert echelon.pivot_rows == linalg.rref([vec(1, 2, 0), vec(0, 1, 1), vec(0, 0, 1)])


def test_echelon_agrees_with_rank(rng):
    for _ in range(20):
        rows = [{j: Scalar(rng.randint(-2, 2), rng.randint(-1, 1)) for j in rng.sample(range(6), 3)}
                for _ in range(rng.randint(1, 7))]
        echelon = linalg.Echelon()
        added = sum(echelon.add(row) for row in rows)
        assert added == len(echelon) == linalg.rank(rows)


def test_nullspace():
    basis = linalg.nullspace([vec(1, 1, 0)], 3)
    assert len(basis) == 2
    for vector in basis:
        assert linalg.dot(vector, vec(1, 1, 0)).is_zero()


def test_solve_and_separating_functional():
    columns = [vec(1, 0, 1), vec(0, 1, 1)]
    solution = linalg.solve(columns, vec(2, 3, 5))
    assert solution == {0: Scalar(2), 1: Scalar(3)}
    assert linalg.solve(columns, vec(1, 0, 0)) is None
    functional = linalg.separating_functional(columns, vec(1, 0, 0))
    assert all(linalg.dot(functional, column).is_zero() for column in columns)
    assert not linalg.dot(functional, vec(1, 0, 0)).is_zero()
    assert linalg.separating_functional(columns, vec(1, 1, 2)) is None


def test_determinant_and_inverse():
    matrix = [[Scalar(1), Scalar(2)], [Scalar(3), Scalar(4)]]
    assert linalg.determinant(matrix) == Scalar(-2)
    inverse = linalg.inverse(matrix)
    assert linalg.matmul(matrix, inverse) == linalg.identity(2)
    with pytest.raises(SingularMatrixError) as info:
        linalg.inverse([[ONE, ONE], [ONE, ONE]])
    assert info.value.determinant == ZERO


def test_hermitian_decomposition():
    positive = [[Scalar(2), I], [-I, Scalar(2)]]
    pivots, witness = linalg.hermitian_decomposition(positive)
    assert witness is None
    assert pivots == [Scalar(2), Scalar(Fraction(3, 2))]

    degenerate = [[ONE, I], [-I, ONE]]
    pivots, witness = linalg.hermitian_decomposition(degenerate)
    assert witness is not None
    assert linalg.hermitian_value(degenerate, witness) == pivots[-1] == ZERO


def test_is_hermitian():
    assert linalg.is_hermitian([[ONE, I], [-I, ONE]])
    assert not linalg.is_hermitian([[ONE, I], [I, ONE]])
