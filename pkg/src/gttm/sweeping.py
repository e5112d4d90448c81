"""The sweeping method on a totally ordered connection matrix, and a spectral-sequence oracle.

Generators are indexed by their position in the filtration order, so
filtration index ``p`` and matrix index coincide (0-based).  Sweeping the
``r``-th diagonal marks primary and change-of-basis pivots; each
change-of-basis pivot ``(i, j)`` with primary ``(i, j')`` in its row clears
the entry by the column operation ``col_j += col_j'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import gf2
from .braid import ConnectionMatrix, validate_connection_matrix
from .transition import TransitionCandidate, check_shape

PRIMARY = "primary"
CHANGE_OF_BASIS = "change-of-basis"


class SweepError(ValueError):
    pass


@dataclass(frozen=True)
class SweepState:
    """Stage ``r``: the matrix ``Δ^r`` and the basis change ``T^r`` taking it to ``Δ^{r+1}``.

    ``pivots`` holds the entries of the ``r``-th diagonal marked at this
    stage.  The terminal state (``r = F + 1``) has ``T = I`` and no marks.
    """

    stage: int
    delta: ConnectionMatrix
    transition: TransitionCandidate
    pivots: dict = field(default_factory=dict)

    @property
    def primaries(self) -> list[tuple[int, int]]:
        return sorted(k for k, v in self.pivots.items() if v == PRIMARY)

    @property
    def changes(self) -> list[tuple[int, int]]:
        return sorted(k for k, v in self.pivots.items() if v == CHANGE_OF_BASIS)


def _check_filtration(delta: ConnectionMatrix) -> None:
    order = delta.order
    if not order.is_total():
        raise SweepError("sweeping needs a total filtration order")
    counts = [len(delta.basis.of_element(p)) for p in order.elements]
    if any(c != 1 for c in counts):
        raise SweepError("sweeping needs exactly one generator per filtration level")
    report = validate_connection_matrix(delta.basis, delta.matrix)
    if not report.ok:
        raise SweepError(f"invalid connection matrix: {report.summary()}")


def _mark(D: np.ndarray, r: int, primary_rows: dict, primary_cols: dict) -> dict:
    n = D.shape[0]
    marks = {}
    for j in range(r, n):
        i = j - r
        if not D[i, j]:
            continue
        below = primary_cols.get(j)
        if below is not None and below > i:
            continue
        left = primary_rows.get(i)
        if left is None:
            marks[(i, j)] = PRIMARY
            primary_rows[i] = j
            primary_cols[j] = i
        elif left < j:
            marks[(i, j)] = CHANGE_OF_BASIS
    return marks


def sweep(delta: ConnectionMatrix) -> list[SweepState]:
    """Stages ``1 … F`` of the sweep (``F = n − 1``) followed by the terminal state ``F + 1``."""
    _check_filtration(delta)
    basis = delta.basis
    n = len(basis)
    D = delta.matrix.copy()
    primary_rows: dict[int, int] = {}
    primary_cols: dict[int, int] = {}
    states = []
    for r in range(1, n):
        marks = _mark(D, r, primary_rows, primary_cols)
        T = gf2.identity(n)
        for (i, j), kind in marks.items():
            if kind == CHANGE_OF_BASIS:
                T[primary_rows[i], j] ^= 1
        states.append(SweepState(r, ConnectionMatrix(basis, D, check=False), TransitionCandidate.on(basis, T), marks))
        D = gf2.mul(gf2.invert_unitriangular(T), gf2.mul(D, T))
    states.append(SweepState(max(n, 1), ConnectionMatrix(basis, D, check=False), TransitionCandidate.identity(basis), {}))
    return states


def all_primaries(states: list[SweepState]) -> list[tuple[int, int]]:
    return sorted(k for s in states for k in s.primaries)


def cumulative_transition(states: list[SweepState]) -> TransitionCandidate:
    """``T¹ T² ⋯ T^F``, so that ``Δ^{F+1} = T⁻¹ Δ¹ T``."""
    basis = states[0].delta.basis
    M = gf2.identity(len(basis))
    for s in states:
        M = gf2.mul(M, s.transition.matrix)
    return TransitionCandidate.on(basis, M)


# ---------------------------------------------------------------- pages


@dataclass(frozen=True)
class SpectralPage:
    """``E^r`` dimensions and the ranks of ``d^r`` leaving each position ``(p, k)``."""

    stage: int
    dims: dict
    ranks: dict

    def nonzero(self) -> dict:
        return {key: v for key, v in self.dims.items() if v}

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "dims": [[p, k, v] for (p, k), v in sorted(self.dims.items())],
            "ranks": [[p, k, v] for (p, k), v in sorted(self.ranks.items())],
        }

    @classmethod
    def from_dict(cls, data) -> "SpectralPage":
        return cls(
            int(data["stage"]),
            {(int(p), int(k)): int(v) for p, k, v in data["dims"]},
            {(int(p), int(k)): int(v) for p, k, v in data["ranks"]},
        )


def _slots(delta: ConnectionMatrix) -> list[tuple[int, int]]:
    degrees = sorted(set(delta.basis.degrees.tolist()))
    return [(p, k) for p in range(len(delta.basis)) for k in degrees]


def ss_pages(states: list[SweepState]) -> list[SpectralPage]:
    """Pages ``E^1 … E^n`` read off the primary pivots, by the rank recurrence."""
    delta = states[0].delta
    n = len(delta.basis)
    if n == 0:
        return []
    degrees = delta.basis.degrees
    slots = _slots(delta)
    dims = {(p, k): int(degrees[p] == k) for p, k in slots}
    by_stage = {s.stage: s.primaries for s in states}
    pages = []
    for r in range(1, n + 1):
        ranks = dict.fromkeys(slots, 0)
        for i, j in by_stage.get(r, []):
            ranks[(j, int(degrees[j]))] = 1
        pages.append(SpectralPage(r, dict(dims), ranks))
        nxt = dict(dims)
        for (p, k), rk in ranks.items():
            if rk:
                nxt[(p, k)] -= rk
                nxt[(p - r, k - 1)] -= rk
        dims = nxt
    return pages


def ss_oracle(delta: ConnectionMatrix) -> list[SpectralPage]:
    """Pages of the filtered complex ``F_p C = span(h_0 … h_p)`` by direct subspace arithmetic.

    ``Z^r_p = F_p ∩ Δ⁻¹F_{p−r}``, ``B^r_p = Z^{r−1}_{p−1} + ΔZ^{r−1}_{p+r−1}``,
    ``E^r_p = Z^r_p / B^r_p`` and ``d^r`` is induced by ``Δ``, degree by degree.
    """
    n = len(delta.basis)
    if n == 0:
        return []
    D = delta.matrix
    degrees = delta.basis.degrees
    slots = _slots(delta)

    def filt(p, k):
        """Column basis of ``F_p C_k``."""
        idx = [i for i in range(min(p + 1, n)) if degrees[i] == k] if p >= 0 else []
        M = gf2.zeros(n, len(idx))
        for c, i in enumerate(idx):
            M[i, c] = 1
        return M

    cache = {}

    def Z(r, p, k):
        key = (r, p, k)
        if key not in cache:
            F = filt(p, k)
            if r <= 0 or F.shape[1] == 0:
                cache[key] = F
            else:
                # x = F c with Δx vanishing on rows beyond p − r
                outside = list(range(max(p - r + 1, 0), n))
                A = gf2.mul(D, F)[outside] if outside else gf2.zeros(0, F.shape[1])
                cache[key] = gf2.image_basis(gf2.mul(F, gf2.kernel_basis(A)))
        return cache[key]

    def B(r, p, k):
        key = ("B", r, p, k)
        if key not in cache:
            cache[key] = gf2.subspace_sum(Z(r - 1, p - 1, k), gf2.mul(D, Z(r - 1, p + r - 1, k + 1)), gf2.zeros(n, 0))
        return cache[key]

    pages = []
    for r in range(1, n + 1):
        dims, ranks = {}, {}
        for p, k in slots:
            dims[(p, k)] = Z(r, p, k).shape[1] - B(r, p, k).shape[1]
            Btarget = B(r, p - r, k - 1)
            image = gf2.mul(D, Z(r, p, k))
            ranks[(p, k)] = gf2.dim_span(image, Btarget) - Btarget.shape[1]
        pages.append(SpectralPage(r, dims, ranks))
    return pages


# ---------------------------------------------------------------- invariants


class StageViolation(NamedTuple):
    stage: int
    row: int
    col: int
    reason: str


@dataclass
class SweepCheck:
    violations: list[StageViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "ok"
        v = self.violations[0]
        return f"stage {v.stage}: {v.reason} at ({v.row}, {v.col})"


def verify_basis_changes(states: list[SweepState]) -> SweepCheck:
    """Each ``T^r`` is unit upper triangular, passes the shape check, and ``Δ^r T^r = T^r Δ^{r+1}``."""
    check = SweepCheck()
    for s, nxt in zip(states, states[1:]):
        T = s.transition.matrix
        if not gf2.is_unit_upper_triangular(T):
            bad = np.argwhere(np.tril(T, -1) | np.diag(np.diag(T) ^ 1))
            i, j = (int(x) for x in bad[0])
            check.violations.append(StageViolation(s.stage, i, j, "T is not unit upper triangular"))
            continue
        shape = check_shape(s.transition)
        if not shape.ok:
            reason, i, j = shape.violations[0]
            check.violations.append(StageViolation(s.stage, i, j, f"T fails the {reason} condition"))
            continue
        diff = gf2.mul(s.delta.matrix, T) ^ gf2.mul(T, nxt.delta.matrix)
        bad = np.argwhere(diff)
        if bad.size:
            i, j = (int(x) for x in bad[0])
            check.violations.append(StageViolation(s.stage, i, j, "ΔT ≠ TΔ′"))
    return check


verify_prop41 = verify_basis_changes


def preserved_pivots(states: list[SweepState]) -> list[tuple[int, int]]:
    """All primary pivots, after checking each stays 1 from its stage onwards."""
    out = []
    for s in states:
        for i, j in s.primaries:
            for later in states:
                if later.stage >= s.stage and later.delta.matrix[i, j] != 1:
                    raise SweepError(f"primary pivot ({i}, {j}) of stage {s.stage} changed at stage {later.stage}")
            out.append((i, j))
    return sorted(out)


def is_fixed_point(states: list[SweepState]) -> bool:
    """Sweeping the final matrix marks the same primaries and changes nothing."""
    again = sweep(states[-1].delta)
    n = len(states[-1].delta.basis)
    return (
        all_primaries(again) == all_primaries(states)
        and not any(s.changes for s in again)
        and all(np.array_equal(s.transition.matrix, gf2.identity(n)) for s in again)
    )
