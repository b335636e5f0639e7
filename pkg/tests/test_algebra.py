from fractions import Fraction

import numpy as np
import pytest

from chainmap.core.errors import InvalidInputError
from chainmap.services.algebra import (
    GF2, QQ, RR, Matrix, SparseVector, field_for, linear_combination, rank, row_reduce,
    solve_membership,
)

from tests.conftest import bareiss_rank


def test_rational_field_rejects_floats():
    assert QQ.convert("3/6") == Fraction(1, 2)
    assert QQ.convert(2) == Fraction(2)
    with pytest.raises(InvalidInputError):
        QQ.convert(0.5)


@pytest.mark.parametrize("value,expected", [(3, 1), (-1, 1), (4, 0), ("1/3", 1), (Fraction(2, 3), 0)])
def test_z2_residues(value, expected):
    assert GF2.convert(value) == expected


def test_z2_rejects_even_denominator():
    with pytest.raises(InvalidInputError):
        GF2.convert("1/2")


def test_real_field_parses_fractions():
    assert RR.convert("1/4") == 0.25
    assert RR.is_zero(1e-12)


def test_field_for_names():
    assert field_for("q") is QQ
    assert field_for("z2") is GF2
    assert field_for("real") is RR
    with pytest.raises(InvalidInputError):
        field_for("complex")


def test_from_entries_sums_duplicates():
    m = Matrix.from_entries(2, 2, [(0, 0, 1), (0, 0, 2), (1, 1, -1), (1, 1, 1)], QQ)
    assert m.entry(0, 0) == 3
    assert m.entry(1, 1) == 0
    assert m.nnz == 1


def test_z2_addition_cancels():
    m = Matrix.from_entries(1, 1, [(0, 0, 1), (0, 0, 1)], GF2)
    assert m.is_zero()


def test_matmul_and_transpose():
    a = Matrix.from_dense([[1, 2], [0, 1]], QQ)
    b = Matrix.from_dense([[1, 0], [3, 1]], QQ)
    assert (a @ b).to_dense() == [[7, 2], [3, 1]]
    assert a.T.to_dense() == [[1, 0], [2, 1]]
    assert (a @ Matrix.identity(2, QQ)).equals(a)


def test_mixed_fields_rejected():
    a = Matrix.identity(2, QQ)
    b = Matrix.identity(2, GF2)
    with pytest.raises(InvalidInputError):
        a @ b


def test_to_numpy_object_keeps_fractions():
    m = Matrix.from_entries(1, 2, [(0, 1, "1/3")], QQ)
    array = m.to_numpy(dtype=object)
    assert array[0, 1] == Fraction(1, 3)
    assert array[0, 0] == 0


def test_linear_combination():
    a = Matrix.identity(2, QQ)
    b = Matrix.from_entries(2, 2, [(0, 1, 1)], QQ)
    m = linear_combination([a, b], [2, "1/2"], 2, 2, QQ)
    assert m.to_dense() == [[2, Fraction(1, 2)], [0, 2]]


def test_row_reduce_kernel_vectors_are_in_kernel():
    m = Matrix.from_dense([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]], QQ)
    reduction = row_reduce(m)
    assert reduction.rank == 2
    assert reduction.pivots == (0, 1)
    assert len(reduction.kernel_basis) == 2
    for z in reduction.kernel_basis:
        assert (m @ z).is_zero()


@pytest.mark.parametrize("seed", range(8))
def test_rank_matches_bareiss(seed):
    rng = np.random.default_rng(seed)
    dense = rng.integers(-2, 3, size=(5, 6)).tolist()
    dense[4] = [a + b for a, b in zip(dense[0], dense[1])]
    m = Matrix.from_dense(dense, QQ)
    assert rank(m) == bareiss_rank(dense)


def test_solve_membership():
    basis = [SparseVector.from_dense([1, 0, 1], QQ), SparseVector.from_dense([0, 1, 1], QQ)]
    target = SparseVector.from_dense([2, 3, 5], QQ)
    assert solve_membership(basis, target) == [2, 3]
    assert solve_membership(basis, SparseVector.from_dense([1, 1, 0], QQ)) is None


def test_solve_membership_with_dependent_vectors():
    basis = [SparseVector.from_dense([1, 1], QQ), SparseVector.from_dense([2, 2], QQ)]
    coeffs = solve_membership(basis, SparseVector.from_dense([3, 3], QQ))
    assert coeffs == [3, 0]
