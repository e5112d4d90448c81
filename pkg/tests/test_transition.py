import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import make_delta
from gttm import gf2
from gttm.braid import ConnectionMatrix, NotAdjacentError, homology
from gttm.poset import FinitePoset, adjacent_pairs
from gttm.synthetic import random_change_of_basis, random_instance
from gttm.transition import (
    CoverData,
    CoverError,
    HypothesisError,
    IntervalCover,
    TransitionCandidate,
    block_never_zero,
    certify_ucc,
    check_chain_map,
    check_shape,
    compose,
    enumerate_gttm,
    free_positions,
    induced_map,
    invert,
    pivot_relation_check,
    validate_cover,
    verify_gttm,
)

seeds = st.integers(0, 2**32 - 1)


def small_instance(seed, elements=3, size=4):
    return random_instance(np.random.default_rng(seed), elements, size)


def test_example_cover_is_natural(ex212):
    dom, cod = ex212.pair()
    assert validate_cover(ex212.cover, dom, cod) == []
    assert len(ex212.cover) == 6


def test_example_transition_is_gttm(ex212):
    dom, cod = ex212.pair()
    report = verify_gttm(ex212.transition(), dom, cod, ex212.cover)
    assert report.ok and len(report.intervals) == 7


def test_example_induced_map_on_two_three(ex212):
    dom, cod = ex212.pair()
    T = ex212.transition()
    I = {"2", "3"}
    assert induced_map(T, dom, cod, I).tolist() == [[1, 1], [0, 1]]
    assert ex212.cover[I].target().tolist() == [[1, 1], [0, 1]]


def test_example_enumeration_is_unique(ex212):
    dom, cod = ex212.pair()
    S = enumerate_gttm(dom, cod, ex212.cover)
    assert S.size == 1 and S.nullity == 0
    assert S.particular() == ex212.transition()
    assert S.particular().entry("2", "3") == 1


def test_identity_fails_on_example(ex212):
    dom, cod = ex212.pair()
    I = TransitionCandidate.identity(dom.basis)
    w = check_chain_map(I, dom, cod)
    assert not w and (w.row, w.col) == (0, 2)
    assert not verify_gttm(I, dom, cod, ex212.cover)


def test_unnatural_cover_is_rejected(ex212):
    dom, cod = ex212.pair()
    covers = dict(ex212.cover.items())
    covers[frozenset({"2", "3"})] = IntervalCover.identity((1, 1))
    problems = validate_cover(CoverData(covers), dom, cod)
    assert any("connecting" in p for p in problems)
    with pytest.raises(CoverError):
        enumerate_gttm(dom, cod, CoverData(covers))


def test_malformed_cover_is_rejected(ex212):
    dom, cod = ex212.pair()
    with pytest.raises(CoverError, match="dimension"):
        verify_gttm(ex212.transition(), dom, cod, CoverData({("1",): IntervalCover.identity((0, 0))}))
    singular = IntervalCover((1, 1), [[1, 1], [1, 1]], np.eye(2), np.eye(2))
    with pytest.raises(CoverError, match="isomorphism"):
        verify_gttm(ex212.transition(), dom, cod, CoverData({("2", "3"): singular}))


def test_shape_checks(chain3):
    T = gf2.identity(3)
    T[2, 1] = 1
    report = check_shape(TransitionCandidate.on(chain3, T))
    assert ("triangularity", 2, 1) in report.violations
    T = gf2.identity(3)
    T[0, 1] = 1
    assert ("degree", 0, 1) in check_shape(TransitionCandidate.on(chain3, T)).violations
    T = gf2.identity(3)
    T[1, 1] = 0
    assert not check_shape(TransitionCandidate.on(chain3, T))


def test_unrelated_entries_are_not_free():
    P = FinitePoset.antichain("ab")
    from gttm.braid import GradedBasis

    B = GradedBasis([("x", "a", 0), ("y", "b", 0)], P)
    assert free_positions(B, B) == []


def test_cover_pins_off_diagonal_entry(chain3):
    # two degree-1 generators over 2 < 3 with zero boundary
    B = chain3
    zero = ConnectionMatrix(B, gf2.zeros(3, 3))
    full = CoverData.identity(zero)
    assert enumerate_gttm(zero, zero, full).size == 1
    partial = CoverData({I: c for I, c in full.items() if I != frozenset({"2", "3"}) and len(I) < 3})
    S = enumerate_gttm(zero, zero, partial)
    assert S.nullity == 1
    assert {T.entry("2", "3") for T in S.members()} == {0, 1}


@pytest.mark.parametrize("coverage", [1.0, 0.3])
@given(seed=seeds)
def test_enumeration_matches_brute_force(seed, coverage):
    dom, cod, T0, cover = random_instance(np.random.default_rng(seed), 3, 5, max_degree=1, coverage=coverage)
    S = enumerate_gttm(dom, cod, cover)
    brute = []
    for M in oracles.all_transition_matrices(dom.basis):
        T = TransitionCandidate.on(dom.basis, M)
        if verify_gttm(T, dom, cod, cover).ok:
            brute.append(M.tobytes())
    ours = sorted(T.matrix.tobytes() for T in S.members())
    assert ours == sorted(brute)
    assert T0 in S


@given(seeds)
def test_every_enumerated_member_verifies(seed):
    dom, cod, T0, cover = random_instance(np.random.default_rng(seed), 4, 7)
    S = enumerate_gttm(dom, cod, cover)
    assert not S.empty
    rng = np.random.default_rng(seed)
    assert verify_gttm(S.random_member(rng), dom, cod, cover).ok
    for _ in range(3):
        assert verify_gttm(S.random_member(rng), dom, cod, cover, check_cover=False).ok


@given(seeds)
def test_affine_closure(seed):
    dom, cod, T0, cover = random_instance(np.random.default_rng(seed), 4, 7, max_degree=1, coverage=0.3)
    S = enumerate_gttm(dom, cod, cover)
    rng = np.random.default_rng(seed + 1)
    a, b, c = (S.random_member(rng).matrix for _ in range(3))
    assert TransitionCandidate.on(dom.basis, a ^ b ^ c) in S
    if S.nullity:
        # the sum of two members differs from the fixed diagonal and leaves the set
        assert TransitionCandidate.on(dom.basis, a ^ b) not in S


@given(seeds)
def test_pivot_relation_on_verified_gttms(seed):
    dom, cod, T0, cover = random_instance(np.random.default_rng(seed), 4, 7)
    S = enumerate_gttm(dom, cod, cover)
    rng = np.random.default_rng(seed)
    T = S.random_member(rng)
    P = dom.order
    for I, J in adjacent_pairs(P):
        if len(I) == 1 and len(J) == 1:
            (p,), (q,) = I, J
            assert pivot_relation_check(dom, cod, T, p, q)


def test_pivot_relation_needs_adjacency(ex212):
    dom, cod = ex212.pair()
    T = ex212.transition()
    assert pivot_relation_check(dom, cod, T, "1", "2")
    assert pivot_relation_check(dom, cod, T, "2", "3")
    with pytest.raises(NotAdjacentError):
        pivot_relation_check(dom, cod, T, "1", "3")


def test_pivot_relation_detects_mismatch(chain3):
    lam = make_delta(chain3, [("1", "2")])
    other = make_delta(chain3, [("1", "3")])
    T = TransitionCandidate.identity(chain3)
    assert not pivot_relation_check(lam, other, T, "1", "2")


@given(seeds)
def test_composition_and_inverse(seed):
    rng = np.random.default_rng(seed)
    dom, mid, T1, cover1 = random_instance(rng, 3, 6)
    T2m = random_change_of_basis(rng, dom.basis)
    cod = ConnectionMatrix(dom.basis, gf2.mul(T2m, gf2.mul(mid.matrix, gf2.inverse(T2m))))
    T2 = TransitionCandidate.on(dom.basis, T2m)
    cover2 = CoverData.from_chain_equivalence(mid, cod, T2, rng)
    both = compose(T1, T2)
    assert verify_gttm(both, dom, cod, cover1.compose(cover2)).ok
    back = invert(T1)
    assert np.array_equal(compose(T1, back).matrix, gf2.identity(len(dom.basis)))
    assert check_chain_map(back, mid, dom)


@given(seeds)
def test_certificates_match_brute_force(seed):
    dom, cod, T0, cover = small_instance(seed)
    S = enumerate_gttm(dom, cod, cover)
    members = list(S.members())
    P = dom.order
    total = FinitePoset.chain(P.linear_extension())
    for p in P.elements:
        for q in P.elements:
            if p == q:
                continue
            never_zero = all(T.block(p, q).any() for T in members)
            assert block_never_zero(S, p, q) == never_zero
            if never_zero:
                # nonzero blocks only sit on related pairs, so p < q in any extension
                assert P.less(p, q)
                cert = certify_ucc(S, total, p, q)
                assert cert.chain[0] == p and cert.chain[-1] == q
            else:
                assert certify_ucc(S, total, p, q) is None


def test_certificate_for_example(ex212):
    dom, cod = ex212.pair()
    S = enumerate_gttm(dom, cod, ex212.cover)
    cert = certify_ucc(S, ex212.minimal_order, "2", "3")
    assert cert.chain == ("2", "3") and cert.forced_entries == (("2", "3"),) and cert.nullity == 0
    assert cert.assumptions
    assert certify_ucc(S, ex212.minimal_order, "1", "2") is None
    assert certify_ucc(S, ex212.minimal_order, "1", "3") is None
    assert certify_ucc(S, ex212.minimal_order, "2", "2") is None


def test_certificate_hypotheses(ex212):
    dom, cod = ex212.pair()
    S = enumerate_gttm(dom, cod, ex212.cover)
    with pytest.raises(HypothesisError, match="minimal order"):
        certify_ucc(S, FinitePoset.antichain("123"), "2", "3")
    # θ on {2, 3} asks for a lower triangular map, which no transition matrix induces
    theta = IntervalCover((1, 1), np.eye(2), np.eye(2), [[1, 0], [1, 1]])
    S = enumerate_gttm(dom, dom, CoverData({("2", "3"): theta}))
    assert S.empty
    with pytest.raises(HypothesisError, match="GTTM"):
        certify_ucc(S, ex212.minimal_order, "2", "3")
