import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckduality.intmat import (
    IntMatrix,
    hnf_rows,
    in_column_lattice,
    inverse_unimodular,
    kernel_basis,
    snf,
    solve_in_column_lattice,
)

import oracles


def matrices(max_rows=6, max_cols=6, bound=9):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def check_smith(M):
    M = IntMatrix(M)
    sd = snf(M)
    m, n = M.shape
    assert sd.S @ M @ sd.T == sd.D
    assert abs(sd.S.det()) == 1 and abs(sd.T.det()) == 1
    assert sd.S @ sd.S_inv == IntMatrix.identity(m)
    for i in range(m):
        for j in range(n):
            if i != j:
                assert sd.D[i, j] == 0
    diag = sd.diagonal
    assert all(d >= 0 for d in diag)
    nonzero = [d for d in diag if d]
    assert diag[: len(nonzero)] == nonzero
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0


def check_hermite(M, U):
    M = IntMatrix(M)
    hf = hnf_rows(M)
    assert hf.transform @ M == hf.H
    assert abs(hf.transform.det()) == 1
    assert hnf_rows(hf.H).H == hf.H
    assert hnf_rows(IntMatrix(U) @ M).H == hf.H


# -- worked examples ---------------------------------------------------------


def test_snf_zero_matrix():
    sd = snf([[0, 0], [0, 0]])
    assert sd.D.is_zero()
    assert sd.S == IntMatrix.identity(2) and sd.T == IntMatrix.identity(2)


def test_snf_unimodular_input():
    assert snf([[0, -1], [-1, 1]]).D == IntMatrix.diag([1, 1])


def test_snf_rank_one():
    sd = snf([[0, -1], [0, 2]])
    assert sd.rank == 1
    assert sd.divisors == [1]


def test_snf_example_with_torsion():
    sd = snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert sd.divisors == [2, 6, 12]


def test_hnf_identity():
    assert hnf_rows(IntMatrix.identity(3)).H == IntMatrix.identity(3)


def test_hnf_small_lattice():
    assert hnf_rows([[2, 0], [0, 2], [1, 1]]).H == IntMatrix([[1, 1], [0, 2], [0, 0]])


def test_hnf_zero_row_is_redundant():
    with_zero = hnf_rows([[3, 1], [0, 0], [1, 2]]).H
    without = hnf_rows([[3, 1], [1, 2]]).H
    assert with_zero.submatrix(range(2), range(2)) == without
    assert not any(with_zero.row(2))


def test_kernel_rank_one():
    K = kernel_basis([[0, -1], [0, 2]])
    assert K.columns() == [(1, 0)]


def test_kernel_of_unimodular_matrix_is_empty():
    # I - [[1,1],[1,1]] has determinant -1
    assert kernel_basis([[0, -1], [-1, 0]]).ncols == 0


def test_kernel_full_rank_is_empty():
    assert kernel_basis([[2, 1], [1, 3]]).ncols == 0


def test_kernel_mixed_signs():
    K = kernel_basis([[1, 1, 1], [1, 1, 1], [0, 0, 0]])
    assert K.ncols == 2
    for col in K.columns():
        assert sum(col) == 0


def test_solve_example():
    M = IntMatrix.from_columns([(0, 0, 0), (-1, 0, -1), (-1, -1, 1)], 3)
    x = solve_in_column_lattice(M, (-1, 0, -1))
    assert x is not None
    assert M.apply(x) == (-1, 0, -1)


def test_solve_zero_rhs():
    assert solve_in_column_lattice([[2, 3], [4, 5]], (0, 0)) == (0, 0)


def test_solve_parity_obstruction():
    assert solve_in_column_lattice([[2]], (1,)) is None
    assert not in_column_lattice([[2]], (1,))


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_in_column_lattice([[1, 0], [0, 1]], (1, 2, 3))


def test_det_matches_cofactor_expansion():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 5)
        M = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        assert IntMatrix(M).det() == oracles.det(M)


def test_inverse_unimodular():
    U = IntMatrix([[2, 1], [1, 1]])
    assert U @ inverse_unimodular(U) == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        inverse_unimodular([[2, 0], [0, 1]])


def test_matrix_basics():
    M = IntMatrix([[1, 2], [3, 4]])
    assert M.T == IntMatrix([[1, 3], [2, 4]])
    assert M.apply((1, 1)) == (3, 7)
    assert (M - M).is_zero()
    assert M.hstack(IntMatrix.identity(2)).shape == (2, 4)
    assert M.block_diag(IntMatrix([[5]])).shape == (3, 3)
    with pytest.raises(ValueError):
        IntMatrix([[1, 2], [3]])


# -- properties --------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_smith_properties(M):
    check_smith(M)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.randoms(use_true_random=False))
def test_hermite_properties(M, rnd):
    U = oracles.random_unimodular(rnd, len(M), steps=8)
    check_hermite(M, U)


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=5, max_cols=6, bound=4))
def test_kernel_basis_is_complete(M):
    M = IntMatrix(M)
    K = kernel_basis(M)
    assert (M @ K).is_zero()
    assert K.ncols == M.ncols - snf(M).rank
    # saturation: the kernel lattice has no finite index superlattice in ker
    if K.ncols:
        assert snf(K).divisors == [1] * K.ncols


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=4, max_cols=4, bound=5), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_round_trip(M, x):
    M = IntMatrix(M)
    b = M.apply(x[: M.ncols])
    y = solve_in_column_lattice(M, b)
    assert y is not None and M.apply(y) == b
