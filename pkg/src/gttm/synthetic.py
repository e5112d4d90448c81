"""Random valid instances for property tests, regression fixtures and benchmarks.

Connection matrices are built as ``U D U⁻¹`` where ``D`` pairs off
generators (so ``D² = 0`` trivially) and ``U`` is a random degree-0
unit ≤-upper triangular change of basis; conjugation keeps every
defining property.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .braid import ConnectionMatrix, GradedBasis
from .poset import FinitePoset, validate
from .transition import CoverData, TransitionCandidate


def random_poset(rng: np.random.Generator, n: int, density: float = 0.4, total: bool = False) -> FinitePoset:
    """Relations ``i < j`` (``i < j`` as integers) drawn independently, then closed."""
    elements = [str(i + 1) for i in range(n)]
    if total:
        return FinitePoset.chain(elements)
    pairs = [(elements[i], elements[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return validate(elements, pairs)


def random_basis(
    rng: np.random.Generator, order: FinitePoset, size: int, max_degree: int = 2, one_per_element: bool = False
) -> GradedBasis:
    elements = list(order.elements)
    if one_per_element:
        where = elements[:size]
    else:
        where = [elements[int(i)] for i in rng.integers(0, len(elements), size=size)]
    gens = [(f"h{i + 1}", e, int(rng.integers(0, max_degree + 1))) for i, e in enumerate(where)]
    return GradedBasis(gens, order)


def random_pairing(rng: np.random.Generator, basis: GradedBasis, density: float = 0.7) -> np.ndarray:
    """``D`` with entries on disjoint degree-compatible ``<``-related pairs, so ``D² = 0``."""
    n = len(basis)
    D = gf2.zeros(n, n)
    used: set[int] = set()
    cands = [(i, j) for i in range(n) for j in range(n) if basis.allowed_boundary(i, j)]
    rng.shuffle(cands)
    for i, j in cands:
        if i in used or j in used or rng.random() > density:
            continue
        D[i, j] = 1
        used.update((i, j))
    return D


def random_change_of_basis(rng: np.random.Generator, basis: GradedBasis, density: float = 0.5) -> np.ndarray:
    """Unit matrix with random degree-0 entries above the diagonal blocks (``<``-related pairs)."""
    n = len(basis)
    U = gf2.identity(n)
    order = basis.order
    for i, gi in enumerate(basis.generators):
        for j, gj in enumerate(basis.generators):
            if gi.degree == gj.degree and order.less(gi.element, gj.element) and rng.random() < density:
                U[i, j] = 1
    return U


def random_connection_matrix(rng: np.random.Generator, basis: GradedBasis, density: float = 0.7) -> ConnectionMatrix:
    D = random_pairing(rng, basis, density)
    U = random_change_of_basis(rng, basis)
    return ConnectionMatrix(basis, gf2.mul(U, gf2.mul(D, gf2.inverse(U))))


def random_filtered_complex(rng: np.random.Generator, size: int, max_degree: int = 2) -> ConnectionMatrix:
    """Total order with one generator per level."""
    order = random_poset(rng, size, total=True)
    return random_connection_matrix(rng, random_basis(rng, order, size, max_degree, one_per_element=True))


def random_instance(
    rng: np.random.Generator,
    elements: int,
    size: int,
    max_degree: int = 2,
    random_phi: bool = True,
    coverage: float = 1.0,
):
    """``(Δ_dom, Δ_cod, T0, cover)`` with ``Δ_cod = T0 Δ_dom T0⁻¹`` and cover induced by ``T0``.

    With ``coverage < 1`` each interval is kept independently with that
    probability, leaving the dropped ones unconstrained.
    """
    order = random_poset(rng, elements)
    basis = random_basis(rng, order, size, max_degree)
    dom = random_connection_matrix(rng, basis)
    T0 = random_change_of_basis(rng, basis)
    cod = ConnectionMatrix(basis, gf2.mul(T0, gf2.mul(dom.matrix, gf2.inverse(T0))))
    T = TransitionCandidate.on(basis, T0)
    cover = CoverData.from_chain_equivalence(dom, cod, T, rng if random_phi else None)
    if coverage < 1:
        cover = CoverData({I: c for I, c in cover.items() if rng.random() < coverage})
    return dom, cod, T, cover
