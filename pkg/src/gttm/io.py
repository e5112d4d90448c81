"""JSON instance files.

Schema (version 1)::

    {
      "schema": 1,
      "name": "...",
      "poset": {"elements": [...], "relations": [[p, q], ...]},     # p < q, closed on load
      "generators": [[label, element, degree], ...],
      "matrices": {"delta" | "delta_dom" | "delta_cod" | "transition": [[row_label, col_label], ...]},
      "cover": [{"interval": [...], "g_degrees": [...],
                 "phi_dom": [[i, j], ...], "phi_cod": [...], "theta": [...]}, ...],
      "minimal_order": {"elements": [...], "relations": [...]},
      "assumptions": {...},
      "subinstances": {name: {..., "parameters": {name: [row_label, col_label]}}},
      "morse": {"critical_points": [[label, index]], "value_order": [...], "incidence": [[x, y, n]]},
      "blocks": {degree: [[i, j], ...]},
      "expected": {"pages": [...]}
    }

Matrices are sparse lists of the nonzero entries.  Loading checks labels,
degrees and triangularity of every boundary matrix and reports the first
offending entry; ``Δ² = 0`` is left to the commands that verify it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import gf2
from .braid import ConnectionMatrix, GradedBasis
from .morse import BlockTransition, MorseData
from .poset import FinitePoset, OrderError, validate
from .sweeping import SpectralPage
from .transition import CoverData, IntervalCover, TransitionCandidate

SCHEMA = 1
BOUNDARY_NAMES = ("delta", "delta_dom", "delta_cod")


class InstanceError(ValueError):
    """An instance file is malformed; the message names the offending field."""


@dataclass
class Instance:
    name: str
    order: FinitePoset
    basis: GradedBasis
    matrices: dict = field(default_factory=dict)  # name -> ConnectionMatrix | TransitionCandidate
    cover: CoverData | None = None
    minimal_order: FinitePoset | None = None
    assumptions: dict = field(default_factory=dict)
    subinstances: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)  # name -> (row_label, col_label)
    morse: MorseData | None = None
    blocks: BlockTransition | None = None
    expected: dict = field(default_factory=dict)

    def delta(self, name: str | None = None) -> ConnectionMatrix:
        if name is None:
            name = next((n for n in BOUNDARY_NAMES if n in self.matrices), None)
        if name is None or name not in self.matrices:
            raise InstanceError(f"instance {self.name!r} has no matrix {name or 'delta'!r}")
        return self.matrices[name]

    def pair(self) -> tuple[ConnectionMatrix, ConnectionMatrix]:
        return self.delta("delta_dom"), self.delta("delta_cod")

    def transition(self) -> TransitionCandidate:
        if "transition" not in self.matrices:
            raise InstanceError(f"instance {self.name!r} has no transition matrix")
        return self.matrices["transition"]

    def with_parameters(self, values: dict) -> "Instance":
        """Copy with each named parameter entry set to the given bit in every boundary matrix."""
        unknown = set(values) - set(self.parameters)
        if unknown:
            raise InstanceError(f"unknown parameter {sorted(unknown)[0]!r}")
        matrices = dict(self.matrices)
        for name in BOUNDARY_NAMES:
            if name not in matrices:
                continue
            M = matrices[name].matrix.copy()
            for key, bit in values.items():
                row, col = self.parameters[key]
                M[self.basis.index(row), self.basis.index(col)] = int(bit) % 2
            matrices[name] = ConnectionMatrix(self.basis, M, check=False)
        out = Instance(**{**self.__dict__, "matrices": matrices})
        out.parameters = {}
        return out


# ---------------------------------------------------------------- parsing


def _require(data: dict, key: str, where: str):
    if key not in data:
        raise InstanceError(f"{where}: missing field {key!r}")
    return data[key]


def _poset(data, where: str) -> FinitePoset:
    if not isinstance(data, dict):
        raise InstanceError(f"{where}: expected an object")
    try:
        return validate(_require(data, "elements", where), [tuple(r) for r in data.get("relations", [])])
    except (OrderError, TypeError, ValueError) as exc:
        raise InstanceError(f"{where}: {exc}") from None


def _sparse_labels(entries, rows: GradedBasis, cols: GradedBasis, where: str) -> np.ndarray:
    M = gf2.zeros(len(rows), len(cols))
    for k, entry in enumerate(entries):
        try:
            r, c = entry
            M[rows.index(str(r)), cols.index(str(c))] ^= 1
        except (KeyError, ValueError, TypeError):
            raise InstanceError(f"{where}[{k}]: unknown entry {entry!r}") from None
    return M


def _sparse_indices(entries, n: int, where: str) -> np.ndarray:
    M = gf2.zeros(n, n)
    for k, entry in enumerate(entries):
        try:
            i, j = (int(x) for x in entry)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError
            M[i, j] ^= 1
        except (ValueError, TypeError):
            raise InstanceError(f"{where}[{k}]: entry {entry!r} out of range for size {n}") from None
    return M


def _boundary(basis: GradedBasis, M: np.ndarray, where: str) -> ConnectionMatrix:
    for i, j in np.argwhere(M):
        gi, gj = basis.generators[i], basis.generators[j]
        if gi.degree != gj.degree - 1:
            raise InstanceError(f"{where}: entry ({gi.label}, {gj.label}) violates degree -1")
        if not basis.order.less(gi.element, gj.element):
            raise InstanceError(f"{where}: entry ({gi.label}, {gj.label}) is not strictly upper triangular")
    return ConnectionMatrix(basis, M, check=False)


def _cover(entries, order: FinitePoset, where: str) -> CoverData:
    covers = {}
    for k, item in enumerate(entries):
        here = f"{where}[{k}]"
        interval = frozenset(str(e) for e in _require(item, "interval", here))
        if not order.is_interval(interval):
            raise InstanceError(f"{here}: {sorted(interval)} is not an interval")
        degrees = [int(d) for d in _require(item, "g_degrees", here)]
        n = len(degrees)
        maps = {name: _sparse_indices(item.get(name, [[i, i] for i in range(n)]), n, f"{here}.{name}") for name in ("phi_dom", "phi_cod", "theta")}
        covers[interval] = IntervalCover(tuple(degrees), maps["phi_dom"], maps["phi_cod"], maps["theta"])
    return CoverData(covers)


def _morse(data, where: str) -> MorseData:
    try:
        return MorseData(
            tuple((c, k) for c, k in _require(data, "critical_points", where)),
            tuple(_require(data, "value_order", where)),
            {(x, y): n for x, y, n in data.get("incidence", [])},
        )
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"{where}: {exc}") from None


def from_dict(data: dict, where: str = "instance") -> Instance:
    if not isinstance(data, dict):
        raise InstanceError(f"{where}: expected a JSON object")
    schema = data.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise InstanceError(f"{where}: unsupported schema {schema!r}")
    name = str(data.get("name", ""))
    morse = _morse(data["morse"], f"{where}.morse") if "morse" in data else None
    if "poset" in data:
        order = _poset(data["poset"], f"{where}.poset")
    elif morse is not None:
        order = FinitePoset.chain(morse.value_order)
    else:
        raise InstanceError(f"{where}: missing field 'poset'")
    if "generators" in data:
        gens = data["generators"]
    elif morse is not None:
        index = morse.index
        gens = [[c, c, index.get(c, 0)] for c in morse.value_order]
    else:
        gens = []
    try:
        basis = GradedBasis([tuple(g) for g in gens], order)
    except (ValueError, TypeError) as exc:
        raise InstanceError(f"{where}.generators: {exc}") from None

    matrices = {}
    for key, entries in data.get("matrices", {}).items():
        here = f"{where}.matrices.{key}"
        M = _sparse_labels(entries, basis, basis, here)
        if key in BOUNDARY_NAMES:
            matrices[key] = _boundary(basis, M, here)
        elif key == "transition":
            matrices[key] = TransitionCandidate.on(basis, M)
        else:
            raise InstanceError(f"{here}: unknown matrix name")

    cover = _cover(data["cover"], order, f"{where}.cover") if "cover" in data else None
    minimal = _poset(data["minimal_order"], f"{where}.minimal_order") if "minimal_order" in data else None
    parameters = {}
    for key, entry in data.get("parameters", {}).items():
        if len(entry) != 2 or any(str(x) not in basis.labels for x in entry):
            raise InstanceError(f"{where}.parameters.{key}: unknown entry {entry!r}")
        parameters[key] = (str(entry[0]), str(entry[1]))
    blocks = None
    if "blocks" in data:
        sizes = {int(k): len(basis.of_degree(int(k))) for k in data["blocks"]}
        try:
            blocks = BlockTransition(
                {int(k): _sparse_indices(v, sizes[int(k)], f"{where}.blocks.{k}") for k, v in data["blocks"].items()}
            )
        except ValueError as exc:
            raise InstanceError(f"{where}.blocks: {exc}") from None
    subs = {key: from_dict(sub, f"{where}.subinstances.{key}") for key, sub in data.get("subinstances", {}).items()}
    return Instance(
        name=name,
        order=order,
        basis=basis,
        matrices=matrices,
        cover=cover,
        minimal_order=minimal,
        assumptions=dict(data.get("assumptions", {})),
        subinstances=subs,
        parameters=parameters,
        morse=morse,
        blocks=blocks,
        expected=dict(data.get("expected", {})),
    )


# ---------------------------------------------------------------- writing


def _poset_dict(P: FinitePoset) -> dict:
    return {"elements": list(P.elements), "relations": [list(pq) for pq in P.covers()]}


def _entries(M: np.ndarray, rows: GradedBasis, cols: GradedBasis) -> list:
    return [[rows.labels[i], cols.labels[j]] for i, j in np.argwhere(M)]


def _index_entries(M) -> list:
    return [[int(i), int(j)] for i, j in np.argwhere(M)]


def to_dict(inst: Instance) -> dict:
    out: dict = {"schema": SCHEMA, "name": inst.name}
    if inst.morse is not None:
        m = inst.morse
        out["morse"] = {
            "critical_points": [list(c) for c in m.critical_points],
            "value_order": list(m.value_order),
            "incidence": [[x, y, n] for (x, y), n in sorted(m.incidence.items())],
        }
    out["poset"] = _poset_dict(inst.order)
    out["generators"] = [[g.label, g.element, g.degree] for g in inst.basis.generators]
    if inst.matrices:
        out["matrices"] = {
            key: _entries(M.matrix, inst.basis, inst.basis) for key, M in inst.matrices.items()
        }
    if inst.parameters:
        out["parameters"] = {k: list(v) for k, v in inst.parameters.items()}
    if inst.cover is not None:
        out["cover"] = [
            {
                "interval": inst.order.sorted(I),
                "g_degrees": list(c.g_degrees),
                "phi_dom": _index_entries(c.phi_dom),
                "phi_cod": _index_entries(c.phi_cod),
                "theta": _index_entries(c.theta),
            }
            for I, c in sorted(inst.cover.items(), key=lambda kv: inst.order.sort_key(kv[0]))
        ]
    if inst.minimal_order is not None:
        out["minimal_order"] = _poset_dict(inst.minimal_order)
    if inst.blocks is not None:
        out["blocks"] = {str(k): _index_entries(B) for k, B in sorted(inst.blocks.blocks.items())}
    if inst.assumptions:
        out["assumptions"] = dict(inst.assumptions)
    if inst.subinstances:
        out["subinstances"] = {k: to_dict(v) for k, v in inst.subinstances.items()}
    if inst.expected:
        out["expected"] = inst.expected
    return out


def _flat(obj) -> bool:
    scalar = (str, int, float, bool, type(None))
    return isinstance(obj, list) and all(
        isinstance(x, scalar) or (isinstance(x, list) and all(isinstance(y, scalar) for y in x)) for x in obj
    )


def _format(obj, depth: int = 0) -> str:
    """JSON with objects spread over lines and short lists (entry lists, triples) kept on one line."""
    pad, inner = " " * depth, " " * (depth + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_format(v, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and obj and not _flat(obj):
        return "[\n" + ",\n".join(inner + _format(x, depth + 1) for x in obj) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(inst: Instance) -> str:
    return _format(to_dict(inst)) + "\n"


def loads(text: str, where: str = "instance") -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{where}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(data, where)


def bundled_names() -> list[str]:
    return sorted(p.name for p in resources.files("gttm.data").iterdir() if p.name.endswith(".json"))


def resolve(path) -> Path:
    """A filesystem path, or the name of a bundled fixture (with or without ``.json``)."""
    p = Path(path)
    if p.exists():
        return p
    name = p.name if p.suffix == ".json" else p.name + ".json"
    candidate = resources.files("gttm.data") / name
    if candidate.is_file():
        return Path(str(candidate))
    raise InstanceError(f"{path}: no such file or bundled instance")


def load(path) -> Instance:
    p = resolve(path)
    return loads(p.read_text(encoding="utf-8"), p.name)


def save(inst: Instance, path) -> None:
    Path(path).write_text(dumps(inst), encoding="utf-8")


def expected_pages(inst: Instance) -> list[SpectralPage] | None:
    pages = inst.expected.get("pages")
    return None if pages is None else [SpectralPage.from_dict(p) for p in pages]
