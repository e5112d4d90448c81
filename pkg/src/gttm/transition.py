"""Generalized topological transition matrices.

A transition candidate ``T`` compares two connection matrices on the same
ordered index set.  It is a GTTM when it is a degree-0, ≤-upper triangular
chain map with identity diagonal blocks whose induced map on the homology
of every interval covers a supplied continuation isomorphism ``θ``:

    Φ_cod(I) · T̂(I) = θ(I) · Φ_dom(I)

Everything here is exact over GF(2); the set of all GTTMs is computed as
an affine subspace, so statements quantified over all GTTMs are decided
without sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from . import gf2
from .braid import (
    ConnectionMatrix,
    GradedBasis,
    HomologyResult,
    NotAdjacentError,
    homology,
    les,
)
from .poset import FinitePoset, adjacent_pairs, intervals, is_adjacent, order_closure_paths

UCC_ASSUMPTIONS = (
    "the Morse decompositions are related by continuation along a path with the stated admissible order",
    "transition matrices exist for the minimal continuing order over every sub-path of the continuation",
)


class CoverError(ValueError):
    """Cover data is malformed or not natural with respect to the exact sequences."""


class NotAChainMapError(ValueError):
    pass


class HypothesisError(ValueError):
    """A hypothesis required for a connecting-orbit certificate fails."""


@dataclass(frozen=True)
class TransitionCandidate:
    dom: GradedBasis
    cod: GradedBasis
    matrix: np.ndarray

    def __post_init__(self):
        M = gf2.asmatrix(self.matrix, shape=(len(self.cod), len(self.dom))).copy()
        M.flags.writeable = False
        object.__setattr__(self, "matrix", M)

    @classmethod
    def on(cls, basis: GradedBasis, matrix) -> "TransitionCandidate":
        return cls(basis, basis, matrix)

    @classmethod
    def identity(cls, basis: GradedBasis) -> "TransitionCandidate":
        return cls(basis, basis, gf2.identity(len(basis)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TransitionCandidate)
            and self.dom == other.dom
            and self.cod == other.cod
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.dom, self.cod, self.matrix.tobytes()))

    def restricted(self, interval) -> np.ndarray:
        return self.matrix[np.ix_(self.cod.indices(interval), self.dom.indices(interval))]

    def entry(self, row_label: str, col_label: str) -> int:
        return int(self.matrix[self.cod.index(row_label), self.dom.index(col_label)])

    def block(self, p: str, q: str) -> np.ndarray:
        """The ``(p ← q)`` block: rows over element ``p``, columns over ``q``."""
        return self.matrix[np.ix_(self.cod.of_element(p), self.dom.of_element(q))]


# ---------------------------------------------------------------- checks


class Witness(NamedTuple):
    ok: bool
    row: int | None = None
    col: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_chain_map(T: TransitionCandidate, delta_dom: ConnectionMatrix, delta_cod: ConnectionMatrix) -> Witness:
    """``T · Δ_dom == Δ_cod · T``; on failure report the first differing entry (row-major)."""
    if T.dom != delta_dom.basis or T.cod != delta_cod.basis:
        raise ValueError("transition bases do not match the connection matrices")
    diff = gf2.mul(T.matrix, delta_dom.matrix) ^ gf2.mul(delta_cod.matrix, T.matrix)
    bad = np.argwhere(diff)
    if bad.size:
        i, j = (int(x) for x in bad[0])
        return Witness(False, i, j, f"chain map fails at ({T.cod.labels[i]}, {T.dom.labels[j]})")
    return Witness(True)


@dataclass
class ShapeReport:
    violations: list[tuple[str, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def check_shape(T: TransitionCandidate, order: FinitePoset | None = None) -> ShapeReport:
    """Degree 0, ≤-upper triangular, identity diagonal blocks.

    Blocks between order-unrelated elements must vanish.
    """
    order = order or T.dom.order
    report = ShapeReport()
    M = T.matrix
    for i in range(M.shape[0]):
        gi = T.cod.generators[i]
        for j in range(M.shape[1]):
            gj = T.dom.generators[j]
            v = M[i, j]
            if gi.element == gj.element:
                expected = 1 if T.cod.of_element(gi.element).index(i) == T.dom.of_element(gj.element).index(j) else 0
                if v != expected:
                    report.violations.append(("diagonal block not identity", i, j))
                if gi.degree != gj.degree and expected:
                    report.violations.append(("degree", i, j))
                continue
            if not v:
                continue
            if gi.degree != gj.degree:
                report.violations.append(("degree", i, j))
            if not order.less(gi.element, gj.element):
                report.violations.append(("triangularity", i, j))
    for p in order.elements:
        if len(T.cod.of_element(p)) != len(T.dom.of_element(p)):
            report.violations.append((f"diagonal block over {p} is not square", -1, -1))
    return report


def induced_map(T: TransitionCandidate, delta_dom, delta_cod, interval, h_dom=None, h_cod=None) -> np.ndarray:
    """Matrix of ``T̂(I)`` between the canonical homology bases of the interval."""
    I = frozenset(interval)
    h_dom = h_dom or homology(delta_dom, I)
    h_cod = h_cod or homology(delta_cod, I)
    TI = T.restricted(I)
    out = gf2.zeros(h_cod.dim, h_dom.dim)
    for c in range(h_dom.dim):
        try:
            out[:, c] = h_cod.coordinates(gf2.matvec(TI, h_dom.reps[:, c]))
        except ValueError:
            raise NotAChainMapError(f"T restricted to {sorted(I)} is not a chain map") from None
    return out


# ---------------------------------------------------------------- cover data


@dataclass(frozen=True)
class IntervalCover:
    """``Φ_dom: HΔ_dom(I) → G(I)``, ``Φ_cod: HΔ_cod(I) → G(I)``, ``θ: G_dom(I) → G_cod(I)``."""

    g_degrees: tuple
    phi_dom: np.ndarray
    phi_cod: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        n = len(self.g_degrees)
        object.__setattr__(self, "g_degrees", tuple(int(d) for d in self.g_degrees))
        for name in ("phi_dom", "phi_cod", "theta"):
            M = gf2.asmatrix(getattr(self, name), shape=(n, n)).copy()
            M.flags.writeable = False
            object.__setattr__(self, name, M)

    def target(self) -> np.ndarray:
        """``Φ_cod⁻¹ θ Φ_dom``: the map ``T̂(I)`` must equal."""
        if not self.g_degrees:
            return gf2.zeros(0, 0)
        return gf2.mul(gf2.inverse(self.phi_cod), gf2.mul(self.theta, self.phi_dom))

    @classmethod
    def identity(cls, degrees) -> "IntervalCover":
        n = len(degrees)
        return cls(tuple(degrees), gf2.identity(n), gf2.identity(n), gf2.identity(n))


class CoverData(Mapping):
    """Per-interval cover maps; intervals absent from the mapping are unconstrained."""

    def __init__(self, covers: Mapping[Iterable[str], IntervalCover]):
        self._covers = {frozenset(k): v for k, v in covers.items() if frozenset(k)}

    def __getitem__(self, key):
        return self._covers[frozenset(key)]

    def __iter__(self):
        return iter(self._covers)

    def __len__(self):
        return len(self._covers)

    def __repr__(self):
        return f"CoverData({sorted(sorted(k) for k in self._covers)})"

    def targets(self) -> dict[frozenset, np.ndarray]:
        return {I: c.target() for I, c in self._covers.items()}

    @classmethod
    def identity(cls, delta: ConnectionMatrix) -> "CoverData":
        """Identity Φ and θ on every nonempty interval of ``delta``'s order."""
        return cls(
            {I: IntervalCover.identity(homology(delta, I).rep_degrees) for I in intervals(delta.order) if I}
        )

    @classmethod
    def from_chain_equivalence(
        cls,
        delta_dom: ConnectionMatrix,
        delta_cod: ConnectionMatrix,
        reference: TransitionCandidate,
        rng: np.random.Generator | None = None,
    ) -> "CoverData":
        """Cover data whose ``θ`` is the map induced by a reference chain equivalence.

        With ``rng`` the ``Φ`` maps are random degree-preserving
        isomorphisms and ``θ = Φ_cod · Ŝ · Φ_dom⁻¹``; otherwise ``Φ = id``
        and ``θ = Ŝ``.
        """
        covers = {}
        for I in intervals(delta_dom.order):
            if not I:
                continue
            hd, hc = homology(delta_dom, I), homology(delta_cod, I)
            S = induced_map(reference, delta_dom, delta_cod, I, hd, hc)
            if rng is None:
                phi_d, phi_c = gf2.identity(hd.dim), gf2.identity(hc.dim)
            else:
                phi_d = random_graded_iso(hd.rep_degrees, rng)
                phi_c = random_graded_iso(hc.rep_degrees, rng)
            theta = gf2.mul(phi_c, gf2.mul(S, gf2.inverse(phi_d))) if hd.dim else gf2.zeros(0, 0)
            covers[I] = IntervalCover(tuple(hd.rep_degrees), phi_d, phi_c, theta)
        return cls(covers)

    def compose(self, then: "CoverData") -> "CoverData":
        """Cover for ``T2 ∘ T1`` when ``self`` covers ``T1`` and ``then`` covers ``T2``."""
        out = {}
        for I in self:
            if I not in then:
                continue
            a, b = self[I], then[I]
            if not a.g_degrees:
                out[I] = a
                continue
            # G_cod of the first and G_dom of the second are identified through HΔ_mid
            bridge = gf2.mul(b.phi_dom, gf2.inverse(a.phi_cod))
            theta = gf2.mul(b.theta, gf2.mul(bridge, a.theta))
            out[I] = IntervalCover(a.g_degrees, a.phi_dom, b.phi_cod, theta)
        return CoverData(out)


def random_graded_iso(degrees, rng: np.random.Generator) -> np.ndarray:
    """A random invertible matrix preserving the grading given by ``degrees``."""
    n = len(degrees)
    M = gf2.zeros(n, n)
    degrees = np.asarray(degrees)
    for k in set(degrees.tolist()):
        idx = np.flatnonzero(degrees == k)
        while True:
            block = rng.integers(0, 2, size=(idx.size, idx.size)).astype(gf2.DTYPE)
            if gf2.rank(block) == idx.size:
                break
        M[np.ix_(idx, idx)] = block
    return M


def _is_graded_iso(M, dom_degrees, cod_degrees) -> bool:
    n = len(dom_degrees)
    if M.shape != (len(cod_degrees), n):
        return False
    if n == 0:
        return True
    for i, j in np.argwhere(M):
        if cod_degrees[i] != dom_degrees[j]:
            return False
    return gf2.rank(M) == n


def validate_cover(cover: CoverData, delta_dom: ConnectionMatrix, delta_cod: ConnectionMatrix) -> list[str]:
    """Problems with ``cover``: malformed maps, or ``Φ_cod⁻¹θΦ_dom`` not commuting with the exact sequences."""
    problems = []
    P = delta_dom.order
    H_dom, H_cod, psi = {}, {}, {}
    for I, c in cover.items():
        if not P.is_interval(I):
            problems.append(f"{sorted(I)} is not an interval")
            continue
        hd, hc = homology(delta_dom, I), homology(delta_cod, I)
        H_dom[I], H_cod[I] = hd, hc
        g = list(c.g_degrees)
        if len(g) != hd.dim or len(g) != hc.dim:
            problems.append(f"{P.sorted(I)}: G has dimension {len(g)}, homology has {hd.dim} and {hc.dim}")
            continue
        if not _is_graded_iso(c.phi_dom, hd.rep_degrees, g):
            problems.append(f"{P.sorted(I)}: Φ_dom is not a degree-preserving isomorphism")
        if not _is_graded_iso(c.phi_cod, hc.rep_degrees, g):
            problems.append(f"{P.sorted(I)}: Φ_cod is not a degree-preserving isomorphism")
        if not _is_graded_iso(c.theta, g, g):
            problems.append(f"{P.sorted(I)}: θ is not a degree-preserving isomorphism")
        if not problems:
            psi[I] = c.target()
    if problems:
        return problems
    for pair in adjacent_pairs(P):
        I, J = pair
        if not (I in psi and J in psi and (I | J) in psi):
            continue
        ld, lc = les(delta_dom, pair, check=False), les(delta_cod, pair, check=False)
        checks = (
            ("inclusion", psi[I | J], ld.inclusion, lc.inclusion, psi[I]),
            ("projection", psi[J], ld.projection, lc.projection, psi[I | J]),
            ("connecting", psi[I], ld.connecting, lc.connecting, psi[J]),
        )
        for name, after, f_dom, f_cod, before in checks:
            lhs = gf2.mul(after, f_dom) if after.size and f_dom.size else None
            rhs = gf2.mul(f_cod, before) if f_cod.size and before.size else None
            if lhs is None and rhs is None:
                continue
            if lhs is None:
                lhs = np.zeros_like(rhs)
            if rhs is None:
                rhs = np.zeros_like(lhs)
            if not np.array_equal(lhs, rhs):
                problems.append(f"{name} map of ({P.sorted(I)}, {P.sorted(J)}) does not commute with the cover")
    return problems


# ---------------------------------------------------------------- verification


@dataclass
class GttmReport:
    chain_map: Witness
    shape: ShapeReport
    intervals: dict  # frozenset -> bool; the empty interval is always True

    @property
    def cover_ok(self) -> bool:
        return all(self.intervals.values())

    @property
    def ok(self) -> bool:
        return bool(self.chain_map) and bool(self.shape) and self.cover_ok

    def __bool__(self) -> bool:
        return self.ok


def verify_gttm(T: TransitionCandidate, delta_dom, delta_cod, cover: CoverData, check_cover: bool = True) -> GttmReport:
    """Chain map, shape and covering checks for ``T``.

    Raises :class:`CoverError` if the cover data itself is not natural;
    pass ``check_cover=False`` to skip that when it is already known.
    The covering condition is only examined when ``T`` is a chain map.
    """
    problems = validate_cover(cover, delta_dom, delta_cod) if check_cover else []
    if problems:
        raise CoverError("; ".join(problems))
    chain = check_chain_map(T, delta_dom, delta_cod)
    shape = check_shape(T)
    per_interval = {frozenset(): True}
    for I, c in cover.items():
        if not chain:
            per_interval[I] = False
            continue
        per_interval[I] = bool(np.array_equal(induced_map(T, delta_dom, delta_cod, I), c.target()))
    return GttmReport(chain, shape, per_interval)


# ---------------------------------------------------------------- enumeration


@dataclass(frozen=True)
class GttmSolutionSet:
    """All transition matrices satisfying the chain-map, shape and covering conditions.

    ``positions[e]`` is the matrix entry carried by unknown ``e``; every
    other entry is fixed (identity on diagonal blocks, zero elsewhere).
    """

    dom: GradedBasis
    cod: GradedBasis
    positions: tuple
    solutions: gf2.AffineSolutionSet

    @property
    def empty(self) -> bool:
        return self.solutions.empty

    @property
    def size(self) -> int:
        return self.solutions.size

    @property
    def nullity(self) -> int:
        return self.solutions.nullity

    def _fixed(self) -> np.ndarray:
        M = gf2.zeros(len(self.cod), len(self.dom))
        for p in self.dom.order.elements:
            for i, j in zip(self.cod.of_element(p), self.dom.of_element(p)):
                M[i, j] = 1
        return M

    def candidate(self, values) -> TransitionCandidate:
        M = self._fixed()
        for (i, j), v in zip(self.positions, gf2.asvector(values)):
            M[i, j] = v
        return TransitionCandidate(self.dom, self.cod, M)

    def particular(self) -> TransitionCandidate:
        if self.empty:
            raise ValueError("no transition matrix satisfies the constraints")
        return self.candidate(self.solutions.particular)

    def members(self):
        for x in self.solutions.members():
            yield self.candidate(x)

    def random_member(self, rng: np.random.Generator) -> TransitionCandidate:
        return self.candidate(self.solutions.random_member(rng))

    def __contains__(self, T: TransitionCandidate) -> bool:
        if self.empty or T.dom != self.dom or T.cod != self.cod:
            return False
        rest = T.matrix ^ self._fixed()
        values = np.array([rest[i, j] for i, j in self.positions], dtype=gf2.DTYPE)
        for i, j in self.positions:
            rest[i, j] = 0
        return not rest.any() and values in self.solutions


def free_positions(dom: GradedBasis, cod: GradedBasis) -> list[tuple[int, int]]:
    """Entries of a transition matrix not fixed by the shape conditions."""
    order = dom.order
    return [
        (i, j)
        for i, gi in enumerate(cod.generators)
        for j, gj in enumerate(dom.generators)
        if gi.degree == gj.degree and order.less(gi.element, gj.element)
    ]


def enumerate_gttm(delta_dom: ConnectionMatrix, delta_cod: ConnectionMatrix, cover: CoverData) -> GttmSolutionSet:
    """The full affine set of transition matrices covering ``cover``.

    Unknowns are the shape-allowed off-diagonal entries.  Constraints are
    the chain-map equations and, for every covered interval and every
    canonical class ``[z]`` of ``HΔ_dom(I)``, the condition that
    ``T(I)z`` minus a lift of ``Φ_cod⁻¹θΦ_dom[z]`` lies in ``im Δ_cod(I)``,
    imposed through the left annihilator of that image.
    """
    problems = validate_cover(cover, delta_dom, delta_cod)
    if problems:
        raise CoverError("; ".join(problems))
    dom, cod = delta_dom.basis, delta_cod.basis
    positions = free_positions(dom, cod)
    unknown = {pos: e for e, pos in enumerate(positions)}
    nu = len(positions)
    fixed = GttmSolutionSet(dom, cod, tuple(positions), gf2.AffineSolutionSet(nu, np.zeros(nu)))._fixed()
    Dd, Dc = delta_dom.matrix, delta_cod.matrix
    constraints = []

    # T Δ_dom + Δ_cod T = 0 with T = fixed + X
    const = gf2.mul(fixed, Dd) ^ gf2.mul(Dc, fixed)
    for r in range(len(cod)):
        for c in range(len(dom)):
            row = np.zeros(nu, dtype=gf2.DTYPE)
            for k in np.flatnonzero(Dd[:, c]):
                e = unknown.get((r, k))
                if e is not None:
                    row[e] ^= 1
            for k in np.flatnonzero(Dc[r, :]):
                e = unknown.get((k, c))
                if e is not None:
                    row[e] ^= 1
            if row.any() or const[r, c]:
                constraints.append((row, const[r, c]))

    for I in sorted(cover, key=dom.order.sort_key):
        hd, hc = homology(delta_dom, I), homology(delta_cod, I)
        target = cover[I].target()
        ridx, cidx = cod.indices(I), dom.indices(I)
        N = gf2.left_kernel_basis(hc.boundaries) if hc.boundaries.shape[1] else gf2.identity(len(ridx))
        F = fixed[np.ix_(ridx, cidx)]
        for c in range(hd.dim):
            z = hd.reps[:, c]
            w = gf2.matvec(hc.reps, target[:, c]) if hc.dim else np.zeros(len(ridx), dtype=gf2.DTYPE)
            rhs = gf2.matvec(N, w ^ gf2.matvec(F, z))
            for a_row, bit in zip(N, rhs):
                row = np.zeros(nu, dtype=gf2.DTYPE)
                for a in np.flatnonzero(a_row):
                    for b in np.flatnonzero(z):
                        e = unknown.get((ridx[a], cidx[b]))
                        if e is not None:
                            row[e] ^= 1
                if row.any() or bit:
                    constraints.append((row, bit))

    return GttmSolutionSet(dom, cod, tuple(positions), gf2.solve_affine(constraints, dimension=nu))


# ---------------------------------------------------------------- algebra


def compose(first: TransitionCandidate, then: TransitionCandidate) -> TransitionCandidate:
    """``then ∘ first``."""
    if first.cod != then.dom:
        raise ValueError("transition matrices are not composable")
    return TransitionCandidate(first.dom, then.cod, gf2.mul(then.matrix, first.matrix))


def invert(T: TransitionCandidate) -> TransitionCandidate:
    if not gf2.is_unit_upper_triangular(T.matrix):
        raise ValueError("transition matrix is not unit upper triangular")
    return TransitionCandidate(T.cod, T.dom, gf2.invert_unitriangular(T.matrix))


def pivot_relation_check(delta_dom, delta_cod, T: TransitionCandidate, p, q) -> bool:
    """Whether the ``(p, q)`` blocks of the two boundaries agree after conjugating by ``T``'s diagonal.

    Requires ``{p}, {q}`` to form an adjacent pair in one of the two orders
    (no element strictly between them).
    """
    P = delta_dom.order
    p, q = str(p), str(q)
    if p == q or not (is_adjacent(P, {p}, {q}) or is_adjacent(P, {q}, {p})):
        raise NotAdjacentError(f"({p}, {q}) is not an adjacent pair of singletons")
    lo, hi = (q, p) if P.less(q, p) else (p, q)
    dom_rows, dom_cols = delta_dom.basis.of_element(lo), delta_dom.basis.of_element(hi)
    cod_rows, cod_cols = delta_cod.basis.of_element(lo), delta_cod.basis.of_element(hi)
    block_dom = delta_dom.block(dom_rows, dom_cols)
    block_cod = delta_cod.block(cod_rows, cod_cols)
    T_lo, T_hi = T.block(lo, lo), T.block(hi, hi)
    if block_dom.size == 0:
        return True
    conjugated = gf2.mul(gf2.inverse(T_lo), gf2.mul(block_cod, T_hi))
    return bool(np.array_equal(block_dom, conjugated))


@dataclass(frozen=True)
class UccCertificate:
    """Order-level evidence of a chain of connecting orbits from ``q`` down to ``p``."""

    p: str
    q: str
    chain: tuple
    forced_entries: tuple
    nullity: int
    assumptions: tuple = UCC_ASSUMPTIONS

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "chain": list(self.chain),
            "forced_entries": [list(e) for e in self.forced_entries],
            "nullity": self.nullity,
            "assumptions": list(self.assumptions),
        }


def block_never_zero(solutions: GttmSolutionSet, p: str, q: str) -> bool:
    """Whether the ``(p ← q)`` block is nonzero for every member of the solution set."""
    dom, cod = solutions.dom, solutions.cod
    rows, cols = set(cod.of_element(p)), set(dom.of_element(q))
    entries = [e for e, (i, j) in enumerate(solutions.positions) if i in rows and j in cols]
    if not entries:
        return False
    S = solutions.solutions
    # a member with a zero block solves particular[e] + Σ c_k basis[k, e] = 0 for every block entry e
    A = S.basis[:, entries].T if S.nullity else gf2.zeros(len(entries), 0)
    b = S.particular[entries]
    if A.shape[1] == 0:
        return bool(b.any())
    return gf2.solve(A, b) is None


def certify_ucc(solutions: GttmSolutionSet, minimal_order: FinitePoset, p, q) -> UccCertificate | None:
    """Certificate for a chain of connections from ``q`` to ``p``, if every member has a nonzero ``(p, q)`` block."""
    p, q = str(p), str(q)
    if solutions.empty:
        raise HypothesisError("hypothesis GTTM(<_m) ≠ ∅ violated: no transition matrix satisfies the constraints")
    if p == q or not block_never_zero(solutions, p, q):
        return None
    chains = order_closure_paths(minimal_order, p, q)
    if not chains:
        raise HypothesisError(
            f"every transition matrix has a nonzero ({p}, {q}) block but {p} < {q} fails in the minimal order"
        )
    S = solutions.solutions
    forced = tuple(
        (solutions.cod.labels[i], solutions.dom.labels[j])
        for e, (i, j) in enumerate(solutions.positions)
        if solutions.cod.generators[i].element == p
        and solutions.dom.generators[j].element == q
        and S.particular[e]
        and not (S.nullity and S.basis[:, e].any())
    )
    return UccCertificate(p, q, chains[0], forced, S.nullity)
