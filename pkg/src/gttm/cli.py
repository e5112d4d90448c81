"""Command-line interface: ``gttm <command> --file INSTANCE [options]``.

Exit status is 0 when the requested check passes, 1 when a mathematical
check fails and 2 on malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io
from .braid import ConnectionMatrix, ConnectionMatrixError, NotAdjacentError, NotAnIntervalError, homology, les, validate_connection_matrix
from .morse import InterleavingError, MorseError, assemble_block_gttm, build_morse_complex, verify_unique_gttm
from .poset import AdjacentPair, OrderError, intervals, is_adjacent
from .sweeping import SweepError, all_primaries, is_fixed_point, preserved_pivots, ss_oracle, ss_pages, sweep, verify_basis_changes
from .transition import CoverError, HypothesisError, NotAChainMapError, certify_ucc, enumerate_gttm, verify_gttm

OK, FAILED, BAD_INPUT = 0, 1, 2


class UsageError(ValueError):
    pass


class Outcome:
    def __init__(self, ok: bool, lines: list[str], data: dict):
        self.ok, self.lines, self.data = ok, lines, data


def _flag(ok: bool) -> str:
    return "ok" if ok else "FAILED"


def _instance(args) -> io.Instance:
    if not args.file:
        raise UsageError("--file is required")
    inst = io.load(args.file)
    if args.sub:
        if args.sub not in inst.subinstances:
            raise UsageError(f"no subinstance {args.sub!r}; available: {', '.join(sorted(inst.subinstances)) or 'none'}")
        inst = inst.subinstances[args.sub]
    if args.param:
        values = {}
        for item in args.param:
            key, sep, value = item.partition("=")
            if not sep or value not in ("0", "1"):
                raise UsageError(f"--param expects name=0 or name=1, got {item!r}")
            values[key] = int(value)
        inst = inst.with_parameters(values)
    return inst


def _split(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _checked(delta: ConnectionMatrix) -> ConnectionMatrix:
    report = validate_connection_matrix(delta.basis, delta.matrix)
    if not report.ok:
        raise ConnectionMatrixError(report)
    return delta


def _labels(delta: ConnectionMatrix, vector, indices) -> str:
    terms = [delta.basis.labels[indices[i]] for i in np.flatnonzero(vector)]
    return " + ".join(terms) if terms else "0"


def _matrix_text(M: np.ndarray) -> str:
    if M.size == 0:
        return f"[] ({M.shape[0]}x{M.shape[1]})"
    return "[" + "; ".join(" ".join(str(int(x)) for x in row) for row in M) + "]"


# ---------------------------------------------------------------- commands


def cmd_verify_delta(args) -> Outcome:
    inst = _instance(args)
    names = [args.matrix] if args.matrix else [n for n in io.BOUNDARY_NAMES if n in inst.matrices]
    if not names:
        raise UsageError("instance has no boundary matrix")
    lines, data, ok = [], {}, True
    for name in names:
        delta = inst.delta(name)
        report = validate_connection_matrix(inst.basis, delta.matrix)
        checks = report.checks()
        parts = []
        for (label, passed), failures in zip(checks.items(), (report.degree, report.triangular, report.boundary)):
            parts.append(f"{label}: {_flag(passed)}" + (f" at ({failures[0].row_label}, {failures[0].col_label})" if failures else ""))
        lines.append(f"{name}: " + "; ".join(parts))
        data[name] = {
            "ok": report.ok,
            "checks": checks,
            "failures": [[v.check, v.row_label, v.col_label] for v in report.failures],
        }
        ok &= report.ok
    return Outcome(ok, lines, {"matrices": data})


def cmd_homology(args) -> Outcome:
    inst = _instance(args)
    delta = _checked(inst.delta(args.matrix))
    I = _split(args.interval) if args.interval else list(inst.order.elements)
    h = homology(delta, I)
    dims = h.dims
    lines = [
        f"interval: {{{', '.join(inst.order.sorted(I))}}}",
        "dims: " + ", ".join(f"H{k}={v}" for k, v in dims.items()) if dims else "dims: none",
    ]
    reps = []
    for c in range(h.dim):
        text = _labels(delta, h.reps[:, c], h.indices)
        reps.append({"degree": h.rep_degrees[c], "cycle": text})
        lines.append(f"  [{text}] in degree {h.rep_degrees[c]}")
    return Outcome(True, lines, {"interval": inst.order.sorted(I), "dims": {str(k): v for k, v in dims.items()}, "representatives": reps})


def _parse_pair(inst: io.Instance, text: str) -> AdjacentPair:
    left, sep, right = text.partition("|")
    if not sep:
        raise UsageError("--pair expects I|J, for example 1|2,3")
    I, J = frozenset(_split(left)), frozenset(_split(right))
    unknown = (I | J) - set(inst.order.elements)
    if unknown:
        raise UsageError(f"unknown element {sorted(unknown)[0]!r}")
    if not is_adjacent(inst.order, I, J):
        raise NotAdjacentError(f"({sorted(I)}, {sorted(J)}) is not an adjacent pair")
    return AdjacentPair(I, J)


def cmd_les(args) -> Outcome:
    inst = _instance(args)
    delta = _checked(inst.delta(args.matrix))
    if not args.pair:
        raise UsageError("--pair is required")
    pair = _parse_pair(inst, args.pair)
    result = les(delta, pair, check=False)
    P = inst.order
    lines = [
        f"pair: I={{{', '.join(P.sorted(pair.I))}}} J={{{', '.join(P.sorted(pair.J))}}}",
        f"dims: H(I)={result.H_I.dim} H(IJ)={result.H_IJ.dim} H(J)={result.H_J.dim}",
        f"inclusion: {_matrix_text(result.inclusion)}",
        f"projection: {_matrix_text(result.projection)}",
        f"connecting: {_matrix_text(result.connecting)}",
        "exact: " + "; ".join(f"{k} {_flag(v)}" for k, v in result.exactness.items()),
    ]
    data = {
        "pair": [P.sorted(pair.I), P.sorted(pair.J)],
        "inclusion": result.inclusion.tolist(),
        "projection": result.projection.tolist(),
        "connecting": result.connecting.tolist(),
        "exactness": result.exactness,
    }
    return Outcome(result.exact, lines, data)


def _cover_and_pair(inst: io.Instance):
    dom, cod = inst.pair()
    _checked(dom)
    _checked(cod)
    if inst.cover is None:
        raise UsageError("instance has no cover data")
    return dom, cod, inst.cover


def cmd_verify_t(args) -> Outcome:
    inst = _instance(args)
    dom, cod, cover = _cover_and_pair(inst)
    report = verify_gttm(inst.transition(), dom, cod, cover)
    n = len(report.intervals)
    failed = [inst.order.sorted(I) for I, v in report.intervals.items() if not v]
    line = f"chain map: {_flag(report.chain_map.ok)}; shape: {_flag(report.shape.ok)}; cover: {_flag(report.cover_ok)} ({n} intervals)"
    lines = [line]
    if not report.chain_map:
        lines.append(report.chain_map.detail)
    for reason, i, j in report.shape.violations[:1]:
        lines.append(f"shape fails: {reason} at ({inst.basis.labels[i]}, {inst.basis.labels[j]})" if i >= 0 else f"shape fails: {reason}")
    for I in failed:
        lines.append(f"cover fails on {{{', '.join(I)}}}")
    data = {
        "chain_map": report.chain_map.ok,
        "shape": report.shape.ok,
        "cover": report.cover_ok,
        "intervals": n,
        "failed_intervals": failed,
    }
    return Outcome(report.ok, lines, data)


def cmd_enumerate_gttm(args) -> Outcome:
    inst = _instance(args)
    dom, cod, cover = _cover_and_pair(inst)
    S = enumerate_gttm(dom, cod, cover)
    if S.empty:
        return Outcome(False, ["solutions: 0"], {"solutions": 0, "free_dims": None, "entries": []})
    labels = inst.basis.labels
    entries = []
    for e, (i, j) in enumerate(S.positions):
        free = bool(S.nullity and S.solutions.basis[:, e].any())
        value = "*" if free else str(int(S.solutions.particular[e]))
        if value != "0":
            entries.append((labels[i], labels[j], value))
    parts = [f"solutions: {S.size}", f"free dims: {S.nullity}"] + [f"T({r},{c})={v}" for r, c, v in entries]
    data = {"solutions": S.size, "free_dims": S.nullity, "entries": [list(e) for e in entries]}
    return Outcome(True, ["; ".join(parts)], data)


def cmd_certify_ucc(args) -> Outcome:
    inst = _instance(args)
    if args.p is None or args.q is None:
        raise UsageError("--p and --q are required")
    p, q = str(args.p), str(args.q)
    for x in (p, q):
        if x not in inst.order:
            raise UsageError(f"unknown element {x!r}")
    dom, cod, cover = _cover_and_pair(inst)
    S = enumerate_gttm(dom, cod, cover)
    minimal = inst.minimal_order or inst.order
    cert = certify_ucc(S, minimal, p, q)
    if cert is None:
        return Outcome(True, [f"no certificate for ({p}, {q})"], {"certificate": None})
    lines = [
        f"certificate for ({p}, {q}): chain {' < '.join(cert.chain)}",
        f"nullspace dim: {cert.nullity}",
        "forced entries: " + (", ".join(f"T({r},{c})" for r, c in cert.forced_entries) or "none"),
    ] + [f"assumes: {a}" for a in cert.assumptions]
    return Outcome(True, lines, {"certificate": cert.to_dict()})


def _pages_text(pages) -> list[str]:
    lines = []
    for page in pages:
        dims = ", ".join(f"({p},{k}):{v}" for (p, k), v in sorted(page.nonzero().items())) or "0"
        ranks = ", ".join(f"({p},{k})" for (p, k), v in sorted(page.ranks.items()) if v) or "none"
        lines.append(f"E{page.stage}: {dims}; d{page.stage} nonzero at {ranks}")
    return lines


def cmd_sweep(args) -> Outcome:
    inst = _instance(args)
    delta = inst.delta(args.matrix)
    states = sweep(delta)
    labels = inst.basis.labels
    lines, stages = [], []
    for s in states[:-1]:
        prim = ", ".join(f"({labels[i]},{labels[j]})" for i, j in s.primaries) or "none"
        change = ", ".join(f"({labels[i]},{labels[j]})" for i, j in s.changes) or "none"
        lines.append(f"stage {s.stage}: primary {prim}; change of basis {change}")
        stages.append({"stage": s.stage, "primary": [[labels[i], labels[j]] for i, j in s.primaries], "change_of_basis": [[labels[i], labels[j]] for i, j in s.changes]})
    pages = ss_pages(states)
    lines += _pages_text(pages)
    data = {"stages": stages, "pages": [p.to_dict() for p in pages]}
    ok = True
    if args.check_oracle:
        agree = pages == ss_oracle(delta)
        lines.append(f"oracle: {'agrees' if agree else 'DISAGREES'}")
        data["oracle_agrees"] = agree
        ok &= agree
        frozen = io.expected_pages(inst)
        if frozen is not None:
            same = frozen == pages
            lines.append(f"frozen pages: {'match' if same else 'DIFFER'}")
            data["frozen_match"] = same
            ok &= same
    return Outcome(ok, lines, data)


def cmd_ss_oracle(args) -> Outcome:
    inst = _instance(args)
    delta = _checked(inst.delta(args.matrix))
    if not delta.order.is_total():
        raise SweepError("the oracle needs a total filtration order")
    pages = ss_oracle(delta)
    return Outcome(True, _pages_text(pages), {"pages": [p.to_dict() for p in pages]})


def cmd_verify_sweep(args) -> Outcome:
    inst = _instance(args)
    states = sweep(inst.delta(args.matrix))
    check = verify_basis_changes(states)
    try:
        kept = preserved_pivots(states)
        persist = True
    except SweepError:
        kept, persist = [], False
    fixed = is_fixed_point(states)
    labels = inst.basis.labels
    lines = [
        f"basis changes: {check.summary()}",
        f"primary pivots persist: {_flag(persist)} ({', '.join(f'({labels[i]},{labels[j]})' for i, j in kept) or 'none'})",
        f"fixed point: {_flag(fixed)}",
    ]
    data = {"basis_changes": check.ok, "persistence": persist, "pivots": [[labels[i], labels[j]] for i, j in all_primaries(states)], "fixed_point": fixed}
    return Outcome(check.ok and persist and fixed, lines, data)


def cmd_morse_build(args) -> Outcome:
    inst = _instance(args)
    if inst.morse is None:
        raise UsageError("instance has no morse section")
    delta = build_morse_complex(inst.morse)
    h = homology(delta)
    labels = delta.basis.labels
    entries = [[labels[i], labels[j]] for i, j in np.argwhere(delta.matrix)]
    betti = [h.dim_in(k) for k in range(max(delta.basis.degrees.tolist(), default=-1) + 1)]
    lines = [
        "order: " + " < ".join(delta.basis.labels),
        "delta: " + (", ".join(f"({r},{c})" for r, c in entries) or "0"),
        "betti: (" + ", ".join(str(b) for b in betti) + ")",
    ]
    return Outcome(True, lines, {"order": labels, "delta": entries, "betti": betti})


def cmd_blocks(args) -> Outcome:
    inst = _instance(args)
    if inst.blocks is None:
        raise UsageError("instance has no blocks section")
    dom, cod = inst.pair()
    _checked(dom)
    _checked(cod)
    T = assemble_block_gttm(inst.blocks, dom, cod)
    lines = ["interleaving: ok"]
    data: dict = {"interleaving": True}
    ok = True
    if inst.cover is not None:
        report = verify_gttm(T, dom, cod, inst.cover)
        lines.append(f"verify-t: {_flag(report.ok)} ({len(report.intervals)} intervals)")
        uniq = verify_unique_gttm(dom, cod, inst.cover)
        lines.append(uniq.summary())
        data.update(gttm=report.ok, nullity=uniq.nullity, unique=uniq.unique, block_diagonal=uniq.block_diagonal)
        ok = report.ok and not uniq.empty
    return Outcome(ok, lines, data)


def cmd_examples(args) -> Outcome:
    lines, data = [], []
    for name in io.bundled_names():
        inst = io.load(name)
        lines.append(f"{name}: {inst.name}")
        data.append({"file": name, "name": inst.name})
    return Outcome(True, lines, {"examples": data})


COMMANDS = {
    "verify-delta": (cmd_verify_delta, "check degree, triangularity and Δ² = 0"),
    "homology": (cmd_homology, "homology of an interval with canonical representatives"),
    "les": (cmd_les, "long exact sequence of an adjacent pair"),
    "verify-t": (cmd_verify_t, "check a transition matrix against the cover data"),
    "enumerate-gttm": (cmd_enumerate_gttm, "all transition matrices covering the cover data"),
    "certify-ucc": (cmd_certify_ucc, "connecting-orbit certificate for a pair of elements"),
    "sweep": (cmd_sweep, "run the sweeping method"),
    "ss-oracle": (cmd_ss_oracle, "spectral sequence of the filtered complex"),
    "verify-sweep": (cmd_verify_sweep, "check the invariants of a sweep"),
    "morse-build": (cmd_morse_build, "build a Morse complex from critical-point data"),
    "blocks": (cmd_blocks, "assemble and check a block-diagonal transition matrix"),
    "examples": (cmd_examples, "list bundled instances"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gttm", description="Exact GF(2) connection and transition matrices.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--file", help="instance file, or the name of a bundled instance")
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.add_argument("--matrix", help="which boundary matrix to use (delta, delta_dom, delta_cod)")
        p.add_argument("--sub", help="use a named subinstance")
        p.add_argument("--param", action="append", help="set a parameter entry, e.g. star=1")
        p.add_argument("--interval", help="comma-separated elements")
        p.add_argument("--pair", help="adjacent pair I|J, e.g. 1|2,3")
        p.add_argument("--p", help="lower element")
        p.add_argument("--q", help="upper element")
        p.add_argument("--check-oracle", action="store_true", help="compare sweep pages with the oracle")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    func = COMMANDS[args.command][0]
    try:
        outcome = func(args)
    except (io.InstanceError, UsageError, OrderError, NotAnIntervalError, NotAdjacentError, CoverError, SweepError, MorseError) as exc:
        return _fail(args, out, BAD_INPUT, exc)
    except (ConnectionMatrixError, HypothesisError, NotAChainMapError, InterleavingError) as exc:
        return _fail(args, out, FAILED, exc)
    code = OK if outcome.ok else FAILED
    if args.json:
        payload = {"schema": io.SCHEMA, "command": args.command, "ok": outcome.ok, **outcome.data}
        out.write(json.dumps(payload, ensure_ascii=False) + "\n")
    else:
        out.write("\n".join(outcome.lines) + "\n")
    return code


def _fail(args, out, code: int, exc: Exception) -> int:
    kind = "input error" if code == BAD_INPUT else "check failed"
    if args.json:
        out.write(json.dumps({"schema": io.SCHEMA, "command": args.command, "ok": False, "error": str(exc)}, ensure_ascii=False) + "\n")
    else:
        print(f"{kind}: {exc}", file=sys.stderr if code == BAD_INPUT else out)
    return code
