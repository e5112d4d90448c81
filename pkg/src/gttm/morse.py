"""Morse complexes from critical-point data, and block-form transition matrices.

A gradient-like Morse–Smale flow without periodic orbits gives a Morse
decomposition by critical points, totally ordered by critical value, whose
connection matrix is the Morse differential: ``Δ[y, x] = n(x, y) mod 2``
for ``index(x) = index(y) + 1``.  Transition matrices between two such
complexes are block diagonal by Morse index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .braid import ConnectionMatrix, GradedBasis, validate_connection_matrix
from .poset import FinitePoset
from .transition import CoverData, TransitionCandidate, enumerate_gttm


class MorseError(ValueError):
    """Critical-point data does not define a Morse chain complex."""


class InterleavingError(ValueError):
    def __init__(self, degree: int, row: str, col: str):
        self.degree, self.row, self.col = degree, row, col
        super().__init__(f"interleaving fails at l = {degree}, entry ({row}, {col})")


@dataclass(frozen=True)
class MorseData:
    """Critical points ``(label, index)``, their order by critical value, and mod-2 orbit counts.

    ``incidence[(x, y)]`` counts flow lines from ``x`` down to ``y``.
    """

    critical_points: tuple
    value_order: tuple
    incidence: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "critical_points", tuple((str(c), int(k)) for c, k in self.critical_points))
        object.__setattr__(self, "value_order", tuple(str(c) for c in self.value_order))
        object.__setattr__(self, "incidence", {(str(x), str(y)): int(n) for (x, y), n in self.incidence.items()})

    @property
    def index(self) -> dict[str, int]:
        return dict(self.critical_points)


def build_morse_complex(data: MorseData) -> ConnectionMatrix:
    index = data.index
    if len(index) != len(data.critical_points):
        raise MorseError("duplicate critical point labels")
    if sorted(data.value_order) != sorted(index):
        raise MorseError("value order must list every critical point exactly once")
    order = FinitePoset.chain(data.value_order)
    basis = GradedBasis([(c, c, index[c]) for c in data.value_order], order)
    D = gf2.zeros(len(basis), len(basis))
    for (x, y), count in sorted(data.incidence.items()):
        if x not in index or y not in index:
            raise MorseError(f"incidence ({x}, {y}) mentions an unknown critical point")
        if index[x] != index[y] + 1:
            raise MorseError(f"incidence ({x}, {y}) joins indices {index[x]} and {index[y]}")
        if count % 2 and not order.less(y, x):
            raise MorseError(f"flow line from {x} to {y} must decrease the critical value")
        D[basis.index(y), basis.index(x)] = count % 2
    report = validate_connection_matrix(basis, D)
    if not report.ok:
        raise MorseError(f"inconsistent incidence data: {report.summary()}")
    return ConnectionMatrix(basis, D)


@dataclass(frozen=True)
class BlockTransition:
    """Square blocks ``T_top,k`` indexed by Morse index, in value order of the index-``k`` points."""

    blocks: dict

    def __post_init__(self):
        object.__setattr__(self, "blocks", {int(k): gf2.asmatrix(B) for k, B in self.blocks.items()})
        for k, B in self.blocks.items():
            if B.shape[0] and not gf2.is_unit_upper_triangular(B):
                raise ValueError(f"block for index {k} is not unit upper triangular")


def assemble_block_gttm(blocks: BlockTransition, delta_dom: ConnectionMatrix, delta_cod: ConnectionMatrix) -> TransitionCandidate:
    """Block-diagonal transition matrix; checks ``T_{l−1} Δ_dom = Δ_cod T_l`` between indices ``l`` and ``l − 1``."""
    if delta_dom.basis != delta_cod.basis:
        raise ValueError("domain and codomain complexes must share their critical points")
    basis = delta_dom.basis
    n = len(basis)
    degrees = sorted(set(basis.degrees.tolist()))
    T = gf2.zeros(n, n)
    for k in degrees:
        idx = basis.of_degree(k)
        B = blocks.blocks.get(k)
        if B is None:
            B = gf2.identity(len(idx))
        if B.shape != (len(idx), len(idx)):
            raise ValueError(f"block for index {k} has shape {B.shape}, expected {(len(idx), len(idx))}")
        T[np.ix_(idx, idx)] = B
    for l in degrees:
        rows, cols = basis.of_degree(l - 1), basis.of_degree(l)
        if not rows or not cols:
            continue
        lhs = gf2.mul(T[np.ix_(rows, rows)], delta_dom.block(rows, cols))
        rhs = gf2.mul(delta_cod.block(rows, cols), T[np.ix_(cols, cols)])
        bad = np.argwhere(lhs ^ rhs)
        if bad.size:
            i, j = bad[0]
            raise InterleavingError(l, basis.labels[rows[i]], basis.labels[cols[j]])
    return TransitionCandidate.on(basis, T)


@dataclass
class UniquenessReport:
    nullity: int
    empty: bool
    unique: bool
    block_diagonal: bool
    member: TransitionCandidate | None

    def summary(self) -> str:
        if self.empty:
            return "no transition matrix satisfies the constraints; the Morse-Smale hypotheses are not met by the data"
        return (
            f"solutions: {2 ** self.nullity}; free dims: {self.nullity}; "
            f"unique: {'yes' if self.unique else 'no'}; block-diagonal: {'yes' if self.block_diagonal else 'no'}"
        )


def is_block_diagonal(T: TransitionCandidate) -> bool:
    rows = T.cod.degrees[:, None]
    cols = T.dom.degrees[None, :]
    return not (T.matrix.astype(bool) & (rows != cols)).any()


def verify_unique_gttm(delta_dom: ConnectionMatrix, delta_cod: ConnectionMatrix, cover: CoverData) -> UniquenessReport:
    S = enumerate_gttm(delta_dom, delta_cod, cover)
    if S.empty:
        return UniquenessReport(0, True, False, False, None)
    members = list(S.members()) if S.nullity <= 12 else [S.particular()]
    return UniquenessReport(
        S.nullity, False, S.nullity == 0, all(is_block_diagonal(T) for T in members), S.particular()
    )

