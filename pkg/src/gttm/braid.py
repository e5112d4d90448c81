"""Chain complexes generated by Morse-set indices over a poset.

A :class:`GradedBasis` fixes matrix coordinates: generators sorted by a
linear extension of the order, then degree, then input order.  A
:class:`ConnectionMatrix` is a validated boundary map on that basis.
Interval homology and the long exact sequence of an adjacent pair are
computed in canonical coordinates so that induced maps can be compared
entry by entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import gf2
from .poset import AdjacentPair, FinitePoset, is_adjacent


class ConnectionMatrixError(ValueError):
    """A candidate boundary map failed one or more connection-matrix checks."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(report.summary())


class NotAnIntervalError(ValueError):
    pass


class NotAdjacentError(ValueError):
    pass


class ExactnessError(ArithmeticError):
    """The computed long exact sequence is not exact."""

    def __init__(self, result: "LesResult"):
        self.result = result
        bad = [name for name, ok in result.exactness.items() if not ok]
        super().__init__(f"sequence not exact at {', '.join(bad)} for pair {result.pair}")


@dataclass(frozen=True)
class Generator:
    label: str
    element: str
    degree: int


class GradedBasis:
    """Ordered generators of ``C = ⊕ C(p)``, each tagged by element and degree."""

    def __init__(self, generators: Iterable, order: FinitePoset, sort: bool = True):
        gens = [g if isinstance(g, Generator) else Generator(str(g[0]), str(g[1]), int(g[2])) for g in generators]
        labels = [g.label for g in gens]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate generator labels")
        for g in gens:
            if g.element not in order:
                raise ValueError(f"generator {g.label} sits on unknown element {g.element}")
            if g.degree < 0:
                raise ValueError(f"generator {g.label} has negative degree")
        if sort:
            ext = {e: i for i, e in enumerate(order.linear_extension())}
            # stable sort keeps input order as the local index within (element, degree)
            gens.sort(key=lambda g: (ext[g.element], g.degree))
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.order = order
        self._index = {g.label: i for i, g in enumerate(self.generators)}
        self.degrees = np.array([g.degree for g in self.generators], dtype=int)
        self.elements = [g.element for g in self.generators]

    def __len__(self) -> int:
        return len(self.generators)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedBasis) and self.generators == other.generators and self.order == other.order

    def __hash__(self) -> int:
        return hash((self.generators, self.order))

    def __repr__(self) -> str:
        body = ", ".join(f"{g.label}@{g.element}^{g.degree}" for g in self.generators)
        return f"GradedBasis([{body}])"

    @property
    def labels(self) -> list[str]:
        return [g.label for g in self.generators]

    def index(self, label: str) -> int:
        return self._index[label]

    def indices(self, subset: Iterable[str]) -> list[int]:
        """Positions of the generators lying over the elements in ``subset``."""
        S = set(subset)
        return [i for i, g in enumerate(self.generators) if g.element in S]

    def of_element(self, p: str) -> list[int]:
        return [i for i, g in enumerate(self.generators) if g.element == p]

    def of_degree(self, k: int) -> list[int]:
        return [i for i, g in enumerate(self.generators) if g.degree == k]

    def restrict(self, subset: Iterable[str]) -> "GradedBasis":
        S = set(subset)
        return GradedBasis([g for g in self.generators if g.element in S], self.order.restrict(S), sort=False)

    def allowed_boundary(self, i: int, j: int) -> bool:
        """Whether entry ``(i, j)`` may be nonzero in a connection matrix."""
        gi, gj = self.generators[i], self.generators[j]
        return gi.degree == gj.degree - 1 and self.order.less(gi.element, gj.element)


class Violation(NamedTuple):
    check: str
    row: int
    col: int
    row_label: str
    col_label: str

    def __str__(self) -> str:
        return f"{self.check} at ({self.row_label}, {self.col_label})"


@dataclass
class ValidationReport:
    degree: list[Violation] = field(default_factory=list)
    triangular: list[Violation] = field(default_factory=list)
    boundary: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.degree or self.triangular or self.boundary)

    @property
    def failures(self) -> list[Violation]:
        return self.degree + self.triangular + self.boundary

    def checks(self) -> dict[str, bool]:
        return {
            "degree -1": not self.degree,
            "strictly upper triangular": not self.triangular,
            "squares to zero": not self.boundary,
        }

    def summary(self) -> str:
        if self.ok:
            return "valid connection matrix"
        return "; ".join(str(v) for v in self.failures)


def validate_connection_matrix(basis: GradedBasis, matrix) -> ValidationReport:
    """Check degree −1, strict triangularity w.r.t. the order, and ``Δ² = 0``."""
    n = len(basis)
    D = gf2.asmatrix(matrix, shape=(n, n))
    report = ValidationReport()
    labels = basis.labels
    for i, j in zip(*np.nonzero(D)):
        gi, gj = basis.generators[i], basis.generators[j]
        if gi.degree != gj.degree - 1:
            report.degree.append(Violation("degree", i, j, labels[i], labels[j]))
        if not basis.order.less(gi.element, gj.element):
            report.triangular.append(Violation("triangularity", i, j, labels[i], labels[j]))
    for i, j in zip(*np.nonzero(gf2.mul(D, D))):
        report.boundary.append(Violation("boundary", i, j, labels[i], labels[j]))
    return report


class ConnectionMatrix:
    """A graded basis together with a validated boundary matrix on it."""

    def __init__(self, basis: GradedBasis, matrix, check: bool = True):
        n = len(basis)
        M = gf2.asmatrix(matrix, shape=(n, n)).copy()
        if check:
            report = validate_connection_matrix(basis, M)
            if not report.ok:
                raise ConnectionMatrixError(report)
        M.flags.writeable = False
        self.basis = basis
        self.matrix = M
        self._homology: dict = {}

    def __len__(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ConnectionMatrix)
            and self.basis == other.basis
            and np.array_equal(self.matrix, other.matrix)
        )

    def __repr__(self) -> str:
        return f"ConnectionMatrix({self.basis!r}, entries={[tuple(x) for x in np.argwhere(self.matrix)]})"

    @property
    def order(self) -> FinitePoset:
        return self.basis.order

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        return self.matrix[np.ix_(list(rows), list(cols))]


def restrict(delta: ConnectionMatrix, interval: Iterable[str]) -> ConnectionMatrix:
    """Principal submatrix on the generators over ``interval``."""
    I = frozenset(interval)
    if not delta.order.is_interval(I):
        raise NotAnIntervalError(f"{sorted(I)} is not an interval")
    idx = delta.basis.indices(I)
    return ConnectionMatrix(delta.basis.restrict(I), delta.block(idx, idx), check=False)


class HomologyResult:
    """Homology of ``C(I)`` with canonical cycle representatives.

    ``reps`` has one column per homology class, in chain coordinates of
    ``C(I)`` (the generators listed in ``indices``), sorted by degree.
    ``boundaries`` is a column basis of ``im Δ(I)``.
    """

    def __init__(self, interval, indices, degrees, reps, rep_degrees, boundaries):
        self.interval = frozenset(interval)
        self.indices = list(indices)
        self.degrees = np.asarray(degrees, dtype=int)
        self.reps = reps
        self.rep_degrees = list(rep_degrees)
        self.boundaries = boundaries
        self._quotient = np.hstack([reps, boundaries]) if len(self.indices) else gf2.zeros(0, 0)
        for a in (self.reps, self.boundaries, self._quotient):
            a.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    @property
    def dims(self) -> dict[int, int]:
        return {int(k): self.rep_degrees.count(k) for k in sorted(set(self.degrees.tolist()))}

    def dim_in(self, k: int) -> int:
        return self.rep_degrees.count(k)

    def coordinates(self, cycle) -> np.ndarray:
        """Coordinates of the class of ``cycle`` in the canonical basis.

        Raises ``ValueError`` if ``cycle`` is not a cycle of ``C(I)``.
        """
        z = gf2.asvector(cycle)
        if z.shape[0] != len(self.indices):
            raise ValueError("cycle has the wrong length")
        if not len(self.indices):
            return np.zeros(0, dtype=gf2.DTYPE)
        x = gf2.solve(self._quotient, z)
        if x is None:
            raise ValueError("vector is not a cycle of the interval complex")
        return x[: self.dim]

    def to_dict(self, basis: GradedBasis) -> dict:
        labels = [basis.labels[i] for i in self.indices]
        return {
            "interval": basis.order.sorted(self.interval),
            "dims": {str(k): v for k, v in sorted(self.dims.items())},
            "representatives": [
                {"degree": int(d), "chain": [labels[a] for a in np.flatnonzero(self.reps[:, c])]}
                for c, d in enumerate(self.rep_degrees)
            ],
        }


def homology(delta: ConnectionMatrix, interval: Iterable[str] | None = None) -> HomologyResult:
    """Homology of the interval subcomplex, degree by degree.

    Representatives: the reduced kernel basis, filtered to classes
    independent modulo the image, each then reduced against the image's
    echelon form.
    """
    I = frozenset(delta.order.elements if interval is None else interval)
    cached = delta._homology.get(I)
    if cached is None:
        cached = delta._homology[I] = _homology(delta, I)
    return cached


def _homology(delta: ConnectionMatrix, I: frozenset) -> HomologyResult:
    if not delta.order.is_interval(I):
        raise NotAnIntervalError(f"{sorted(I)} is not an interval")
    idx = delta.basis.indices(I)
    m = len(idx)
    D = delta.block(idx, idx)
    degs = delta.basis.degrees[idx]
    rep_cols, rep_degrees, bd_cols = [], [], []
    for k in sorted(set(degs.tolist())):
        ck = np.flatnonzero(degs == k)
        below = np.flatnonzero(degs == k - 1)
        above = np.flatnonzero(degs == k + 1)
        Dk = D[np.ix_(below, ck)] if below.size else gf2.zeros(0, ck.size)
        Z = gf2.kernel_basis(Dk)
        B = gf2.image_basis(D[np.ix_(ck, above)]) if above.size else gf2.zeros(ck.size, 0)
        # reduced echelon rows of the image, for normal forms
        Brows, Bpiv = gf2.rref(B.T) if B.shape[1] else (gf2.zeros(0, ck.size), [])
        chosen = B
        for c in range(Z.shape[1]):
            z = Z[:, c]
            if gf2.in_span(chosen, z):
                continue
            chosen = np.hstack([chosen, z.reshape(-1, 1)])
            z = z.copy()
            for r, p in enumerate(Bpiv):
                if z[p]:
                    z ^= Brows[r]
            full = np.zeros(m, dtype=gf2.DTYPE)
            full[ck] = z
            rep_cols.append(full)
            rep_degrees.append(int(k))
        for c in range(B.shape[1]):
            full = np.zeros(m, dtype=gf2.DTYPE)
            full[ck] = B[:, c]
            bd_cols.append(full)
    reps = np.array(rep_cols, dtype=gf2.DTYPE).T.reshape(m, len(rep_cols))
    bds = np.array(bd_cols, dtype=gf2.DTYPE).T.reshape(m, len(bd_cols))
    return HomologyResult(I, idx, degs, reps, rep_degrees, bds)


def embed(n: int, indices: Sequence[int], local) -> np.ndarray:
    v = np.zeros(n, dtype=gf2.DTYPE)
    v[list(indices)] = gf2.asvector(local)
    return v


def _transfer(source: HomologyResult, target: HomologyResult, image_of) -> np.ndarray:
    """Matrix of the map on homology sending each source rep ``z`` to the class of ``image_of(z)``."""
    M = gf2.zeros(target.dim, source.dim)
    for c in range(source.dim):
        M[:, c] = target.coordinates(image_of(source.reps[:, c]))
    return M


def exact_at(A, B, dim_middle: int) -> bool:
    """Exactness of ``X --A--> Y --B--> Z`` at ``Y``."""
    if dim_middle == 0:
        return True
    composite_zero = not (A.size and B.size and gf2.mul(B, A).any())
    rA = gf2.rank(A) if A.size else 0
    rB = gf2.rank(B) if B.size else 0
    return composite_zero and rA + rB == dim_middle


@dataclass
class LesResult:
    """Maps of ``… → H(I) → H(IJ) → H(J) → H(I) → …`` in canonical coordinates."""

    pair: AdjacentPair
    H_I: HomologyResult
    H_IJ: HomologyResult
    H_J: HomologyResult
    inclusion: np.ndarray  # H(I) -> H(IJ), degree 0
    projection: np.ndarray  # H(IJ) -> H(J), degree 0
    connecting: np.ndarray  # H(J) -> H(I), degree -1
    exactness: dict[str, bool]

    @property
    def exact(self) -> bool:
        return all(self.exactness.values())


def les(delta: ConnectionMatrix, pair, check: bool = True) -> LesResult:
    """Long exact sequence of the adjacent pair ``(I, J)``.

    The connecting map lifts a cycle of ``C(J)`` into ``C(IJ)``, applies
    ``Δ(IJ)`` and reads off the ``C(I)`` component.  With ``check`` set a
    non-exact result raises :class:`ExactnessError`.
    """
    I, J = frozenset(pair[0]), frozenset(pair[1])
    P = delta.order
    if not is_adjacent(P, I, J):
        raise NotAdjacentError(f"({P.sorted(I)}, {P.sorted(J)}) is not an adjacent pair")
    IJ = I | J
    hI, hIJ, hJ = homology(delta, I), homology(delta, IJ), homology(delta, J)
    pos_in_IJ = {g: a for a, g in enumerate(hIJ.indices)}
    I_in_IJ = [pos_in_IJ[g] for g in hI.indices]
    J_in_IJ = [pos_in_IJ[g] for g in hJ.indices]
    D_IJ = delta.block(hIJ.indices, hIJ.indices)

    def include(z):
        return embed(len(hIJ.indices), I_in_IJ, z)

    def project(z):
        return z[J_in_IJ]

    def connect(y):
        lifted = embed(len(hIJ.indices), J_in_IJ, y)
        return gf2.matvec(D_IJ, lifted)[I_in_IJ] if D_IJ.size else np.zeros(len(I_in_IJ), dtype=gf2.DTYPE)

    inc = _transfer(hI, hIJ, include)
    proj = _transfer(hIJ, hJ, project)
    conn = _transfer(hJ, hI, connect)
    exactness = {
        "H(I)": exact_at(conn, inc, hI.dim),
        "H(IJ)": exact_at(inc, proj, hIJ.dim),
        "H(J)": exact_at(proj, conn, hJ.dim),
    }
    result = LesResult(AdjacentPair(I, J), hI, hIJ, hJ, inc, proj, conn, exactness)
    if check and not result.exact:
        raise ExactnessError(result)
    return result
