import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from gttm import gf2


def bit_matrices(max_rows=6, max_cols=6):
    return st.tuples(st.integers(0, max_rows), st.integers(0, max_cols)).flatmap(
        lambda s: arrays(np.uint8, s, elements=st.integers(0, 1))
    )


@given(bit_matrices())
def test_rank_matches_enumeration(M):
    assert gf2.rank(M) == oracles.rank(M)


@given(bit_matrices())
def test_kernel_basis_spans_the_kernel(M):
    K = gf2.kernel_basis(M)
    assert K.shape == (M.shape[1], M.shape[1] - gf2.rank(M))
    assert not gf2.mul(M, K).any() if K.size else True
    assert oracles.span(K.T, M.shape[1]) == oracles.kernel(M)


@given(bit_matrices())
def test_image_basis_is_independent_and_spans(M):
    B = gf2.image_basis(M)
    assert B.shape[1] == gf2.rank(M)
    assert oracles.span(B.T, M.shape[0]) == oracles.span(M.T, M.shape[0])


@given(bit_matrices())
def test_rref_is_reduced(M):
    R, piv = gf2.rref(M)
    for r, c in enumerate(piv):
        assert R[r, c] == 1
        assert R[:, c].sum() == 1
        assert not R[r, :c].any()
    assert not R[len(piv):].any()


@given(bit_matrices())
def test_left_kernel(M):
    N = gf2.left_kernel_basis(M)
    if N.size and M.size:
        assert not gf2.mul(N, M).any()
    assert N.shape[0] == M.shape[0] - gf2.rank(M)


@given(bit_matrices(5, 5), st.data())
def test_solve_agrees_with_enumeration(M, data):
    b = data.draw(arrays(np.uint8, (M.shape[0],), elements=st.integers(0, 1)))
    x = gf2.solve(M, b)
    reachable = {tuple(oracles.apply(M, v)) for v in oracles.all_vectors(M.shape[1])}
    if x is None:
        assert tuple(b) not in reachable
    else:
        assert np.array_equal(gf2.matvec(M, x), b)


@given(st.integers(1, 7), st.data())
def test_unitriangular_inverse(n, data):
    U = np.triu(data.draw(arrays(np.uint8, (n, n), elements=st.integers(0, 1))), 1)
    U[np.arange(n), np.arange(n)] = 1
    inv = gf2.invert_unitriangular(U)
    assert np.array_equal(gf2.mul(U, inv), gf2.identity(n))
    assert np.array_equal(inv, gf2.inverse(U))


def test_inverse_of_singular_matrix_fails():
    with pytest.raises(ValueError, match="singular"):
        gf2.inverse([[1, 1], [1, 1]])


def test_asmatrix_reduces_mod_two():
    assert gf2.asmatrix([[2, 3], [-1, 4]]).tolist() == [[0, 1], [1, 0]]


@given(bit_matrices(5, 5), st.data())
def test_affine_solution_set_is_exact(M, data):
    b = data.draw(arrays(np.uint8, (M.shape[0],), elements=st.integers(0, 1)))
    S = gf2.solve_affine(zip(M, b), dimension=M.shape[1])
    brute = {tuple(v) for v in oracles.all_vectors(M.shape[1]) if np.array_equal(oracles.apply(M, v), b)}
    assert {tuple(x) for x in S.members()} == brute
    assert S.size == len(brute)
    for v in oracles.all_vectors(M.shape[1]):
        assert (v in S) == (tuple(v) in brute)


def test_affine_solutions_without_constraints():
    S = gf2.solve_affine([], dimension=3)
    assert S.size == 8 and S.nullity == 3
    with pytest.raises(ValueError):
        gf2.solve_affine([])


def test_inconsistent_system_is_empty():
    S = gf2.solve_affine([([1, 1], 1), ([1, 1], 0)])
    assert S.empty and S.size == 0 and list(S.members()) == []
    with pytest.raises(ValueError):
        S.member([])


def test_small_frozen_values():
    assert gf2.kernel_basis([[1, 1]]).T.tolist() == [[1, 1]]
    assert gf2.solve([[1, 1]], [1]).tolist() == [1, 0]
    assert gf2.image_basis([[0, 1, 1], [0, 0, 0], [0, 0, 0]]).T.tolist() == [[1, 0, 0]]
