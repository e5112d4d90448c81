import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gttm import gf2, io
from gttm.braid import ConnectionMatrix, GradedBasis, homology, validate_connection_matrix
from gttm.morse import (
    BlockTransition,
    InterleavingError,
    MorseData,
    MorseError,
    assemble_block_gttm,
    build_morse_complex,
    is_block_diagonal,
    verify_unique_gttm,
)
from gttm.poset import FinitePoset
from gttm.synthetic import random_change_of_basis, random_connection_matrix
from gttm.transition import CoverData, IntervalCover, TransitionCandidate, verify_gttm


def betti(delta):
    h = homology(delta)
    return tuple(h.dim_in(k) for k in range(max(delta.basis.degrees.tolist()) + 1))


def test_double_well():
    delta = build_morse_complex(io.load("double_well").morse)
    assert delta.basis.labels == ["a", "b", "s"]
    assert betti(delta) == (1, 0)
    h = homology(delta)
    # the class of a, normalised against the boundary a + b
    assert h.reps[:, 0].tolist() == [0, 1, 0]


@pytest.mark.parametrize(
    "name, expected",
    [("circle", (1, 1)), ("torus", (1, 2, 1)), ("rp2", (1, 1, 1)), ("sphere", (1, 0, 1)), ("double_well", (1, 0))],
)
def test_bundled_surfaces(name, expected):
    delta = build_morse_complex(io.load(name).morse)
    assert validate_connection_matrix(delta.basis, delta.matrix).ok
    assert betti(delta) == expected


def test_single_point():
    delta = build_morse_complex(MorseData((("p", 0),), ("p",)))
    assert delta.matrix.shape == (1, 1) and homology(delta).dim == 1


def test_bad_incidence():
    with pytest.raises(MorseError, match="indices"):
        build_morse_complex(MorseData((("a", 0), ("b", 2)), ("a", "b"), {("b", "a"): 1}))
    with pytest.raises(MorseError, match="decrease"):
        build_morse_complex(MorseData((("a", 0), ("s", 1)), ("s", "a"), {("s", "a"): 1}))
    # one flow line from the maximum to one saddle only: Δ² ≠ 0
    data = MorseData(
        (("a", 0), ("s", 1), ("m", 2)),
        ("a", "s", "m"),
        {("s", "a"): 1, ("m", "s"): 1},
    )
    with pytest.raises(MorseError, match="inconsistent"):
        build_morse_complex(data)


def test_example_blocks(ex212):
    dom, cod = ex212.pair()
    T = assemble_block_gttm(ex212.blocks, dom, cod)
    assert T == ex212.transition()
    assert verify_gttm(T, dom, cod, ex212.cover).ok
    report = verify_unique_gttm(dom, cod, ex212.cover)
    assert report.unique and report.nullity == 0 and report.block_diagonal


def test_identity_blocks_fail_interleaving(ex212):
    dom, cod = ex212.pair()
    with pytest.raises(InterleavingError) as info:
        assemble_block_gttm(BlockTransition({0: [[1]], 1: np.eye(2)}), dom, cod)
    assert info.value.degree == 1 and (info.value.row, info.value.col) == ("1", "3")


def test_identity_blocks_on_equal_complexes(ex212):
    dom, _ = ex212.pair()
    T = assemble_block_gttm(BlockTransition({}), dom, dom)
    assert np.array_equal(T.matrix, gf2.identity(3))


def test_block_validation(ex212):
    with pytest.raises(ValueError, match="unit upper"):
        BlockTransition({1: [[1, 0], [1, 1]]})
    dom, cod = ex212.pair()
    with pytest.raises(ValueError, match="shape"):
        assemble_block_gttm(BlockTransition({1: [[1]]}), dom, cod)


def test_uniqueness_depends_on_cover():
    P = FinitePoset.chain("ab")
    B = GradedBasis([("x", "a", 1), ("y", "b", 1)], P)
    zero = ConnectionMatrix(B, gf2.zeros(2, 2))
    pinned = CoverData.identity(zero)
    assert verify_unique_gttm(zero, zero, pinned).nullity == 0
    loose = CoverData({("a",): IntervalCover.identity((1,)), ("b",): IntervalCover.identity((1,))})
    report = verify_unique_gttm(zero, zero, loose)
    assert report.nullity == 1 and not report.unique and "free dims: 1" in report.summary()


def test_single_generator_is_unique():
    P = FinitePoset.chain("a")
    B = GradedBasis([("x", "a", 0)], P)
    delta = ConnectionMatrix(B, gf2.zeros(1, 1))
    assert verify_unique_gttm(delta, delta, CoverData.identity(delta)).unique


def test_empty_set_is_reported(ex212):
    dom, _ = ex212.pair()
    theta = IntervalCover((1, 1), np.eye(2), np.eye(2), [[1, 0], [1, 1]])
    report = verify_unique_gttm(dom, dom, CoverData({("2", "3"): theta}))
    assert report.empty and "not met" in report.summary()


@given(st.integers(0, 2**32 - 1))
def test_interleaving_blocks_give_gttms(seed):
    """Blocks that interleave, with the cover they induce, always verify."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    labels = [f"c{i}" for i in range(n)]
    index = [int(x) for x in rng.integers(0, 3, size=n)]
    order = FinitePoset.chain(labels)
    B = GradedBasis([(c, c, k) for c, k in zip(labels, index)], order)
    dom = random_connection_matrix(rng, B)
    U = random_change_of_basis(rng, B)
    cod = ConnectionMatrix(B, gf2.mul(U, gf2.mul(dom.matrix, gf2.inverse(U))))
    blocks = BlockTransition({k: U[np.ix_(B.of_degree(k), B.of_degree(k))] for k in set(index)})
    T = assemble_block_gttm(blocks, dom, cod)
    assert is_block_diagonal(T) and T == TransitionCandidate.on(B, U)
    cover = CoverData.from_chain_equivalence(dom, cod, T, rng)
    assert verify_gttm(T, dom, cod, cover).ok
