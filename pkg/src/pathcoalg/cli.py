"""Command line front end: JSON workspaces in, reports, JSON and DOT out.

Exit codes: 0 success, 1 input error, 2 internal consistency violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .classify import ClassificationReport, Verdict, analyze
from .gabriel import (ConsistencyError, LocalizationSpec, ValuedQuiver, cell_degree,
                      cells_unbounded, gabriel_quiver, localize_monomial, localize_quiver,
                      predecessor_degree)
from .linear import LinearError, Subspace, coassoc_check, truncate
from .monomial import (MonomialCoalgebra, MonomialError, PathAutomaton, admissible_core,
                       enumerate_paths, first_missing, restrict_to_vertices, string_check,
                       validate_monomial)
from .quiver import Path, Quiver, QuiverError, to_dot
from .wedge import coradical_filtration, wedge_xcheck

DEFAULT_TRUNCATION = 6
DEFAULT_CELL_BOUND = 12


class InputError(ValueError):
    """A malformed or inconsistent workspace document."""


# -- workspace ---------------------------------------------------------------------

@dataclass
class Workspace:
    quiver: Quiver
    presentations: dict               # name -> canonical presentation object
    coalgebras: dict = field(compare=False, repr=False, default_factory=dict)
    truncation: int = DEFAULT_TRUNCATION
    cell_bound: int = DEFAULT_CELL_BOUND

    @property
    def main(self) -> MonomialCoalgebra:
        return self.coalgebras["C"]

    def get(self, name: str) -> MonomialCoalgebra:
        try:
            return self.coalgebras[name]
        except KeyError:
            known = ", ".join(sorted(self.coalgebras))
            raise InputError(f"unknown subcoalgebra {name!r} (known: {known})") from None


def _need(obj, key, kind, where):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    if key not in obj:
        raise InputError(f"{where}: missing key {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise InputError(f"{where}.{key}: expected {kind.__name__ if isinstance(kind, type) else kind}")
    return val


def _strings(seq, where):
    if not isinstance(seq, list) or not all(isinstance(x, str) for x in seq):
        raise InputError(f"{where}: expected a list of strings")
    return seq


def _parse_quiver(obj) -> Quiver:
    verts = _strings(_need(obj, "vertices", list, "$.quiver"), "$.quiver.vertices")
    arrows = []
    for i, a in enumerate(_need(obj, "arrows", list, "$.quiver")):
        where = f"$.quiver.arrows[{i}]"
        arrows.append(tuple(_need(a, k, str, where) for k in ("id", "src", "tgt")))
    try:
        return Quiver.checked(verts, arrows)
    except QuiverError as e:
        raise InputError(f"$.quiver: {e}") from None


def _canonical_presentation(q: Quiver, obj, where) -> dict:
    kind = _need(obj, "kind", str, where)
    out = {"kind": kind}
    if kind == "full":
        pass
    elif kind == "monomial":
        paths = []
        for i, p in enumerate(_need(obj, "paths", list, where)):
            ids = _strings(p, f"{where}.paths[{i}]")
            if not ids:
                raise InputError(f"{where}.paths[{i}]: empty path (trivial paths are implicit)")
            if not q.is_path(ids[::-1]):
                raise InputError(f"{where}.paths[{i}]: {ids} is not a path of the quiver")
            paths.append(list(ids))
        uniq = {tuple(p) for p in paths}
        out["paths"] = [list(p) for p in sorted(uniq, key=lambda w: q.path_key(q.walk(w)))]
    elif kind == "pattern":
        aut = _need(obj, "automaton", dict, where)
        aw = f"{where}.automaton"
        states = _strings(_need(aut, "states", list, aw), f"{aw}.states")
        accepting = _strings(_need(aut, "accepting", list, aw), f"{aw}.accepting")
        trans = []
        for i, t in enumerate(_need(aut, "transitions", list, aw)):
            tw = f"{aw}.transitions[{i}]"
            trans.append([_need(t, k, str, tw) for k in ("from", "arrow", "to")])
        bad = sorted(({s for t in trans for s in (t[0], t[2])} | set(accepting)) - set(states))
        if bad:
            raise InputError(f"{aw}: undeclared states {bad}")
        a = {"states": list(states), "accepting": sorted(set(accepting), key=states.index),
             "transitions": [{"from": f, "arrow": x, "to": t} for f, x, t in sorted(
                 {tuple(t) for t in trans}, key=lambda t: (states.index(t[0]), t[1], states.index(t[2])))]}
        if "initial" in aut:
            init = _strings(aut["initial"], f"{aw}.initial")
            if set(init) - set(states):
                raise InputError(f"{aw}.initial: undeclared states {sorted(set(init) - set(states))}")
            a["initial"] = sorted(set(init), key=states.index)
        out["automaton"] = a
    else:
        raise InputError(f"{where}.kind: unknown presentation kind {kind!r}")
    if "vertices" in obj:
        vs = _strings(obj["vertices"], f"{where}.vertices")
        if set(vs) - set(q.vertices):
            raise InputError(f"{where}.vertices: unknown vertices {sorted(set(vs) - set(q.vertices))}")
        out["vertices"] = [v for v in q.vertices if v in set(vs)]
    return out


def build_presentation(q: Quiver, pres: dict) -> MonomialCoalgebra:
    verts = pres.get("vertices")
    if pres["kind"] == "full":
        m = MonomialCoalgebra.full(q)
        if verts is not None:
            m = restrict_to_vertices(m, verts)
        return m
    if pres["kind"] == "monomial":
        paths = [q.walk(p) for p in pres["paths"]]
        return MonomialCoalgebra.finite(q, paths, vertices=verts)
    a = pres["automaton"]
    aut = PathAutomaton(a["states"], [(t["from"], t["arrow"], t["to"]) for t in a["transitions"]],
                        a["accepting"], a.get("initial"))
    return MonomialCoalgebra.pattern(q, aut, vertices=verts)


def _load(q: Quiver, pres: dict, where: str) -> MonomialCoalgebra:
    try:
        m = build_presentation(q, pres)
        validate_monomial(m)
    except (MonomialError, QuiverError) as e:
        raise InputError(f"{where}: {e}") from None
    return m


def parse(document: str) -> Workspace:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise InputError("$: expected a JSON object")
    q = _parse_quiver(_need(doc, "quiver", dict, "$"))
    pres = {"C": _canonical_presentation(q, _need(doc, "coalgebra", dict, "$"), "$.coalgebra")}
    subs = doc.get("subcoalgebras", {})
    if not isinstance(subs, dict):
        raise InputError("$.subcoalgebras: expected an object")
    for name in sorted(subs):
        if name == "C":
            raise InputError("$.subcoalgebras: the name 'C' is reserved for the main coalgebra")
        pres[name] = _canonical_presentation(q, subs[name], f"$.subcoalgebras.{name}")
    truncation = doc.get("truncation", DEFAULT_TRUNCATION)
    cell_bound = doc.get("cell_bound", DEFAULT_CELL_BOUND)
    for key, val in (("truncation", truncation), ("cell_bound", cell_bound)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise InputError(f"$.{key}: expected a nonnegative integer")
    coalgebras = {}
    for name, p in pres.items():
        where = "$.coalgebra" if name == "C" else f"$.subcoalgebras.{name}"
        coalgebras[name] = _load(q, p, where)
    for name, m in coalgebras.items():
        if name == "C":
            continue
        miss = first_missing(m, coalgebras["C"])
        if miss is not None:
            raise InputError(f"$.subcoalgebras.{name}: member {miss} is not in C")
    return Workspace(q, pres, coalgebras, truncation, cell_bound)


def dump(ws: Workspace) -> str:
    doc = {
        "quiver": {"vertices": list(ws.quiver.vertices),
                   "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in ws.quiver.arrows]},
        "coalgebra": ws.presentations["C"],
        "truncation": ws.truncation,
        "cell_bound": ws.cell_bound,
    }
    subs = {k: v for k, v in ws.presentations.items() if k != "C"}
    if subs:
        doc["subcoalgebras"] = subs
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- serialization -----------------------------------------------------------------

def path_json(p: Path):
    """Source-to-target arrow list; a trivial path is ``{"vertex": v}``."""
    if p.is_trivial:
        return {"vertex": p.source}
    return list(p.walk)


def _value(x, q: Quiver, n: int):
    if isinstance(x, MonomialCoalgebra):
        return [path_json(p) for p in enumerate_paths(x, n)]
    if isinstance(x, Path):
        return path_json(x)
    if isinstance(x, Subspace):
        ps = x.paths()
        if ps is not None:
            return [path_json(p) for p in ps]
        return [_value(r, q, n) for r in x.rows]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        if x and all(isinstance(k, Path) for k in x):
            return [{"path": path_json(p), "coef": str(c)} for p, c in
                    sorted(x.items(), key=lambda kv: q.path_key(kv[0]))]
        return {str(k): _value(v, q, n) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_value(v, q, n) for v in x]
    if isinstance(x, (frozenset, set)):
        return sorted(_value(v, q, n) for v in x)
    return x


def verdict_json(v: Verdict, q: Quiver) -> dict:
    return {"verdict": v.verdict, "rule": v.rule,
            "witness": None if v.witness is None else _value(v.witness, q, v.truncation),
            "truncation": v.truncation, "evidence": list(v.evidence)}


def valued_json(vq: ValuedQuiver) -> dict:
    return {"vertices": list(vq.vertices),
            "arrows": [{"src": s, "tgt": t, "value": list(val)} for (s, t), val in vq.arrows]}


def report_dict(report: ClassificationReport, q: Quiver) -> dict:
    return {
        "truncation": report.truncation,
        "semiprime": verdict_json(report.semiprime, q),
        "prime": verdict_json(report.prime, q),
        "hereditary": verdict_json(report.hereditary, q),
        "serial": verdict_json(report.serial, q),
        "string": verdict_json(report.string, q),
        "obstructions": [{"tag": o.tag, "location": _value(o.location, q, 0)}
                         for o in report.obstructions],
        "components": [{"vertices": row["vertices"], "shape": row["shape"],
                        "strongly_connected": row["strongly_connected"],
                        "semiprime": verdict_json(row["semiprime"], q),
                        "prime": verdict_json(row["prime"], q)} for row in report.components],
        "gabriel": valued_json(report.gabriel),
    }


def emit_json(report, quiver: Quiver = None) -> str:
    """Deterministic JSON text for a report, verdict or plain mapping."""
    if isinstance(report, ClassificationReport):
        report = report_dict(report, quiver)
    elif isinstance(report, Verdict):
        report = verdict_json(report, quiver)
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- human-readable text -------------------------------------------------------------

def _fmt_verdict(name: str, v: Verdict, q: Quiver) -> str:
    head = {"yes": "Yes", "no": "No", "unknown": "Unknown"}[v.verdict]
    if v.verdict == "yes":
        s = f"{head}({v.rule})"
    elif v.verdict == "no":
        keys = ",".join(v.witness) if v.witness else "-"
        if v.witness and "A" in v.witness:
            s = f"{head}({v.rule}; witness {keys} verified at N={v.truncation})"
        else:
            s = f"{head}({v.rule}; witness {keys})"
    else:
        s = f"{head}"
    lines = [f"{name:<11}{s}"]
    if v.verdict == "no" and v.witness:
        for k, x in v.witness.items():
            lines.append(f"{'':13}{k} = {_short(x, v.truncation)}")
    for e in v.evidence:
        lines.append(f"{'':13}{e}")
    return "\n".join(lines)


def _short(x, n) -> str:
    if isinstance(x, MonomialCoalgebra):
        ps = enumerate_paths(x, n)
        body = ", ".join(str(p) for p in ps[:12])
        more = f", ... ({len(ps)} paths up to length {n})" if len(ps) > 12 else ""
        return "{" + body + more + "}"
    if isinstance(x, Subspace):
        return repr(x)
    return str(x)


def _fmt_valued(vq: ValuedQuiver) -> list:
    if not vq.arrows:
        return ["  (no arrows)"]
    return [f"  {s} -> {t}  ({d1},{d2})" for (s, t), (d1, d2) in vq.arrows]


def format_report(r: ClassificationReport, q: Quiver, full: bool = True) -> str:
    out = [f"truncation N={r.truncation}"]
    for name in ("semiprime", "prime", "hereditary", "serial", "string"):
        out.append(_fmt_verdict(name, getattr(r, name), q))
    if r.obstructions:
        out.append("wild obstructions:")
        for o in r.obstructions:
            loc = ", ".join(f"{k}={v}" for k, v in o.location.items())
            out.append(f"  {o.tag}: {loc}")
    else:
        out.append("wild obstructions: none detected")
    if full:
        out.append("components:")
        for i, row in enumerate(r.components):
            out.append(f"  [{i}] vertices {{{', '.join(row['vertices'])}}} shape {row['shape']}"
                       f" strongly connected: {'yes' if row['strongly_connected'] else 'no'}"
                       f" semiprime: {row['semiprime'].verdict} prime: {row['prime'].verdict}")
        out.append("Gabriel quiver:")
        out.extend(_fmt_valued(r.gabriel))
    return "\n".join(out)


# -- commands ------------------------------------------------------------------------

def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_analyze(ws, n, args, full=True):
    r = analyze(ws.main, n)
    print(format_report(r, ws.quiver, full=full))
    if args.json:
        _write(args.json, emit_json(r, ws.quiver))
    if args.dot:
        _write(args.dot, to_dot(r.gabriel, "Gabriel"))
    return 0


def cmd_classify(ws, n, args):
    return cmd_analyze(ws, n, args, full=False)


def cmd_wedge(ws, n, args):
    a, b, c = ws.get(args.left), ws.get(args.right), ws.main
    x = wedge_xcheck(a, b, c, n)
    if not x.ok:
        raise ConsistencyError(f"path-cut wedge and linear wedge differ: {x.discrepancy}")
    paths = x.combinatorial.paths()
    full = set(enumerate_paths(c, n))
    whole = set(paths) == full
    if whole:
        print(f"{args.left}∧{args.right} = C up to truncation {n}")
    else:
        print(f"{args.left}∧{args.right} has dimension {len(paths)} (C: {len(full)}) up to truncation {n}")
        print("  " + ", ".join(str(p) for p in paths))
    if args.json:
        _write(args.json, emit_json({"left": args.left, "right": args.right, "truncation": n,
                                     "equals_C": whole, "dimension": len(paths),
                                     "paths": [path_json(p) for p in paths]}))
    return 0


def cmd_gabriel(ws, n, args):
    core = admissible_core(ws.main)
    vq = gabriel_quiver(core)
    print("Gabriel quiver (computed from wedges of simples, checked against arrow counts):")
    print(f"  vertices: {', '.join(vq.vertices)}")
    for line in _fmt_valued(vq):
        print(line)
    if args.json:
        _write(args.json, emit_json(valued_json(vq)))
    if args.dot:
        _write(args.dot, to_dot(vq, "Gabriel"))
    return 0


def cmd_localize(ws, n, args):
    keep = [v.strip() for v in args.keep.split(",") if v.strip()]
    spec = LocalizationSpec(keep, ws.cell_bound)
    try:
        spec.check(ws.quiver)
    except QuiverError as e:
        raise InputError(str(e)) from None
    q = ws.quiver
    unbounded = cells_unbounded(q, spec)
    lq = localize_quiver(q, spec)
    print(f"localized quiver on {{{', '.join(lq.vertices)}}}"
          + (f" (cells truncated at length {spec.cell_bound})" if unbounded else "") + ":")
    for a in lq.arrows:
        print(f"  {a.src} -> {a.tgt}  cell {a.id}")
    loc = localize_monomial(ws.main, spec, n)
    basis = loc.space.paths()
    degrees = {}
    for p in basis:
        d = cell_degree(p, q, spec.keep)
        degrees[d] = degrees.get(d, 0) + 1
    print(f"eCe up to truncation {n}: dimension {len(basis)}; by cell degree "
          + ", ".join(f"{d}:{k}" for d, k in sorted(degrees.items())))
    if args.json:
        _write(args.json, emit_json({
            "keep": list(lq.vertices), "cells_unbounded": unbounded,
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in lq.arrows],
            "truncation": n, "dimension": len(basis),
            "by_cell_degree": {str(d): k for d, k in sorted(degrees.items())}}))
    if args.dot:
        _write(args.dot, to_dot(lq, "Localized"))
    return 0


def cmd_filtration(ws, n, args):
    top = args.max
    t = max(n, top)
    filt = coradical_filtration(truncate(ws.main, t), top)
    dims = [f.dim for f in filt]
    for k, d in enumerate(dims):
        print(f"C_{k}: dimension {d}")
    if args.json:
        _write(args.json, emit_json({"truncation": t, "dimensions": dims}))
    return 0


def run_checks(ws: Workspace, n: int) -> list:
    """Consistency checks on one workspace; returns (name, ok, detail) rows.
    Any failing row means an implementation error."""
    rows = []
    c = ws.main
    core = admissible_core(c)

    def record(name, fn):
        try:
            detail = fn()
            rows.append((name, True, detail or ""))
        except ConsistencyError as e:
            rows.append((name, False, str(e)))

    def wedges():
        for la in ws.coalgebras:
            for lb in ws.coalgebras:
                x = wedge_xcheck(ws.coalgebras[la], ws.coalgebras[lb], c, n)
                if not x.ok:
                    raise ConsistencyError(f"{la}∧{lb}: {x.discrepancy}")
        return f"{len(ws.coalgebras) ** 2} pairs"

    def gabriel():
        gabriel_quiver(core)

    def filtration():
        filt = coradical_filtration(truncate(core, n), n)
        for k, piece in enumerate(filt):
            want = Subspace.span_paths(core.quiver, n, enumerate_paths(core, k))
            if piece != want:
                raise ConsistencyError(f"C_{k} is not spanned by paths of length <= {k}")
        return f"C_0..C_{n}"

    def coassoc():
        if not coassoc_check(truncate(c, n)):
            raise ConsistencyError("coassociativity fails")

    def predecessors():
        t = min(n, 3)
        if t < 2:
            return "skipped: truncation below 2"
        for i in core.quiver.vertices:
            for j in core.quiver.vertices:
                for depth in range(1, t):
                    predecessor_degree(core, i, j, depth, t)
        return f"depths 1..{t - 1}"

    def classification():
        r = analyze(c, n)
        if r.semiprime.verdict == "yes" and not r.obstructions and string_check(core) is not True:
            raise ConsistencyError("semiprime with no obstruction but not a string coalgebra")
        return f"semiprime {r.semiprime.verdict}"

    record("wedge oracles agree", wedges)
    record("Gabriel quiver: wedges = arrow counts", gabriel)
    record("coradical filtration = length filtration", filtration)
    record("coassociativity", coassoc)
    record("predecessor degrees = path counts", predecessors)
    record("classification consistency", classification)
    return rows


def cmd_check(ws, n, args):
    rows = run_checks(ws, n)
    for name, ok, detail in rows:
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
    if args.json:
        _write(args.json, emit_json([{"check": k, "ok": ok, "detail": d} for k, ok, d in rows]))
    return 0 if all(ok for _, ok, _ in rows) else 2


COMMANDS = {
    "analyze": cmd_analyze, "classify": cmd_classify, "wedge": cmd_wedge,
    "gabriel": cmd_gabriel, "localize": cmd_localize, "filtration": cmd_filtration,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("workspace", help="JSON workspace file, or - for standard input")
    common.add_argument("--truncate", type=int, metavar="N", help="truncation level N")
    common.add_argument("--json", metavar="FILE", help="write machine-readable output (- for stdout)")
    common.add_argument("--dot", metavar="FILE", help="write a DOT graph where meaningful")
    p = argparse.ArgumentParser(prog="pathcoalg",
                                description="Pointed coalgebras inside path coalgebras.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="full classification report")
    sub.add_parser("classify", parents=[common], help="verdicts and obstructions only")
    w = sub.add_parser("wedge", parents=[common], help="wedge of two named subcoalgebras")
    w.add_argument("--left", required=True)
    w.add_argument("--right", required=True)
    sub.add_parser("gabriel", parents=[common], help="valued Gabriel quiver")
    loc = sub.add_parser("localize", parents=[common], help="localize at a vertex set")
    loc.add_argument("--keep", required=True, metavar="V1,V2,...")
    f = sub.add_parser("filtration", parents=[common], help="coradical filtration dimensions")
    f.add_argument("--max", type=int, required=True)
    sub.add_parser("check", parents=[common], help="run consistency checks")
    return p


def _truncation(args, ws: Workspace) -> int:
    if args.truncate is not None:
        n = args.truncate
    elif os.environ.get("COALG_TRUNCATE"):
        try:
            n = int(os.environ["COALG_TRUNCATE"])
        except ValueError:
            raise InputError("COALG_TRUNCATE must be an integer") from None
    else:
        n = ws.truncation
    if n < 0:
        raise InputError("truncation must be nonnegative")
    return n


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.workspace == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(args.workspace, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as e:
                raise InputError(f"cannot read {args.workspace}: {e.strerror}") from None
        ws = parse(text)
        n = _truncation(args, ws)
        return COMMANDS[args.command](ws, n, args)
    except ConsistencyError as e:
        print(f"consistency violation: {e}", file=sys.stderr)
        return 2
    except (InputError, QuiverError, MonomialError, LinearError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
