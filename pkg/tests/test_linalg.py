import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from gerstenwerk.linalg import (
    Solver, ShapeError, coset_membership, image_basis, is_injective, is_prime, is_surjective,
    kernel_basis, largest_block, left_inverse, matmul, rank, rref, solve_linear,
)


def test_primes():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_frozen_rank_and_rref():
    # over Q this has rank 3, over F_2 the third row is the sum of the first two
    a = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert rank(a, 2) == 2
    assert rank(a, 3) == 3
    red, piv = rref(a, 2)
    assert piv == [0, 1]
    assert red.tolist() == [[1, 0, 1], [0, 1, 1], [0, 0, 0]]


def test_inverse_pivot_scaling_mod_5():
    red, piv = rref(np.array([[2, 1], [3, 1]]), 5)  # det = -1
    assert piv == [0, 1]
    assert red.tolist() == [[1, 0], [0, 1]]


matrices = st.tuples(st.sampled_from([2, 3, 5]), st.integers(1, 7), st.integers(1, 7), st.integers(0, 2**32 - 1))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_kernel_solve_rank_consistent(case):
    p, r, c, seed = case
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(r, c)) * (rng.random((r, c)) < 0.6)
    K = kernel_basis(a, p)
    assert K.shape[1] == c - rank(a, p)
    assert not np.any(matmul(a, K, p))
    x = rng.integers(0, p, size=c)
    b = matmul(a, x, p)
    y = solve_linear(a, b, p)
    assert np.array_equal(matmul(a, y, p), b)
    assert image_basis(a, p).shape[1] == rank(a, p)


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_split_path_agrees_with_dense(case):
    p, r, c, seed = case
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(3 * r, 3 * c)) * (rng.random((3 * r, 3 * c)) < 0.2)
    dense = Solver(a, p)
    split = Solver(sp.csr_matrix(a), p, threshold=0)
    assert dense.rank == split.rank
    b = matmul(a, rng.integers(0, p, size=3 * c), p)
    assert np.array_equal(matmul(a, split.solve(b), p), b)


def test_inconsistent_system():
    assert solve_linear(np.array([[1, 0], [1, 0]]), np.array([0, 1]), 2) is None


def test_shape_error():
    with pytest.raises(ShapeError):
        solve_linear(np.eye(2, dtype=int), np.zeros(3, dtype=int), 2)


def test_injective_surjective_left_inverse():
    a = np.array([[1, 0], [1, 1], [0, 1]])
    assert is_injective(a, 3) and not is_surjective(a, 3)
    li = left_inverse(a, 3)
    assert np.array_equal(matmul(li, a, 3), np.eye(2, dtype=np.int64))


def test_coset_membership():
    span = np.array([[1], [1], [0]])
    assert coset_membership(span, np.array([2, 2, 0]), 3) is not None
    assert coset_membership(span, np.array([1, 0, 0]), 3) is None


def test_largest_block():
    a = sp.block_diag([np.ones((2, 3)), np.ones((4, 1))]).tocsr()
    assert largest_block(a) == (4, 1)
