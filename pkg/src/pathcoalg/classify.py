"""Three-valued classification of monomial coalgebras.

Every negative verdict carries a witness that is re-checked with linear
wedges before it is returned; every positive verdict names the rule that
grants it.  ``unknown`` is a legitimate answer: semiprimeness quantifies over
all subcoalgebras and is not decided by these rules in general.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Optional

from .gabriel import (ConsistencyError, LocalizationSpec, ValuedQuiver, gabriel_quiver,
                      localize_monomial)
from .linear import Subspace, TruncatedCoalgebra, truncate
from .monomial import (MonomialCoalgebra, MonomialError, admissible_core,
                       avoid_factor, enumerate_paths, extension_report, is_admissible,
                       is_full, left_extensions, restrict_to_vertices, right_extensions,
                       string_check, wedge_monomial)
from .quiver import (Path, Quiver, find_all_forbidden, paths_up_to, scc, serial_shape,
                     shape_class, weak_components)
from .wedge import coradical_filtration, wedge_linear, wedge_xcheck

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class Verdict:
    verdict: str
    rule: str
    truncation: int
    witness: Optional[dict] = None
    evidence: tuple = ()

    def __bool__(self):
        return self.verdict == YES


@dataclass(frozen=True)
class Obstruction:
    tag: str
    location: dict


@dataclass
class ClassificationReport:
    truncation: int
    semiprime: Verdict
    prime: Verdict
    hereditary: Verdict
    serial: Verdict
    string: Verdict
    obstructions: list
    components: list
    gabriel: ValuedQuiver


def _span(m: MonomialCoalgebra, n: int) -> Subspace:
    return Subspace.span_paths(m.quiver, n, enumerate_paths(m, n))


def _proper_at(a: MonomialCoalgebra, c: MonomialCoalgebra, n: int) -> bool:
    return set(enumerate_paths(a, n)) != set(enumerate_paths(c, n))


def verify_wedge_cover(a: MonomialCoalgebra, b: MonomialCoalgebra, c: MonomialCoalgebra, n: int) -> bool:
    """``A ^ B`` contains ``C_{<=n}`` (linear computation) and ``A``, ``B`` are
    proper at truncation ``n``."""
    ct = truncate(c, n)
    w = wedge_linear(_span(a, n), _span(b, n), ct)
    return ct.space <= w and _proper_at(a, c, n) and _proper_at(b, c, n)


def _length_piece(c: MonomialCoalgebra, k: int) -> MonomialCoalgebra:
    return MonomialCoalgebra.finite(c.quiver, enumerate_paths(c, k), vertices=c.vertices)


# -- localized probe -----------------------------------------------------------

def _localized_length(c: MonomialCoalgebra, keep) -> Optional[int]:
    """Longest member path with both endpoints in ``keep``; None if unbounded."""
    q = c.quiver
    keep = set(keep)
    if c.kind == "finite":
        return max((len(p) for p in c.paths if p.source in keep and p.target in keep), default=0)
    aut = c.automaton
    succ = defaultdict(list)
    starts = []
    for x in keep:
        node = ("^", x)
        starts.append(node)
        for s in aut.starts:
            for a in q.out_arrows(x):
                for t in aut.delta.get((s, a.id), ()):
                    succ[node].append((t, a.tgt))
    for s, x, t in aut.transitions:
        tgt = q.arrow(x).tgt
        for v in q.vertices:
            if q.arrow(x).src == v:
                succ[(s, v)].append((t, tgt))
    # reachable part
    seen = set(starts)
    todo = list(starts)
    while todo:
        for w in succ[todo.pop()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    good = {n for n in seen if n[0] != "^" and n[0] in aut.accepting and n[1] in keep}
    pred = defaultdict(list)
    for u in seen:
        for w in succ[u]:
            pred[w].append(u)
    live = set(good)
    todo = list(good)
    while todo:
        for u in pred[todo.pop()]:
            if u not in live:
                live.add(u)
                todo.append(u)
    # longest path in the live part, or detect a cycle
    indeg = {u: 0 for u in live}
    for u in live:
        for w in succ[u]:
            if w in live:
                indeg[w] += 1
    queue = deque(u for u in live if indeg[u] == 0)
    dist = {u: 0 for u in live}
    done = 0
    while queue:
        u = queue.popleft()
        done += 1
        for w in succ[u]:
            if w in live:
                dist[w] = max(dist[w], dist[u] + 1)
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
    if done != len(live):
        return None
    return max((dist[u] for u in good), default=0)


def _localized_probe(c: MonomialCoalgebra, n: int) -> Optional[Verdict]:
    verts = [v for v in c.quiver.vertices if v in c.vertices]
    for pair in itertools.combinations(verts, 2):
        top = _localized_length(c, pair)
        if top is None or top == 0:
            continue
        loc = localize_monomial(c, LocalizationSpec(pair), top)
        filt = coradical_filtration(loc, top)
        k = next(i for i, piece in enumerate(filt) if piece == loc.space)
        if k == 0:
            continue
        a = filt[k - 1]
        if not loc.space <= wedge_linear(a, a, loc):
            raise ConsistencyError(f"localized witness at {pair} failed to re-verify")
        return Verdict(NO, "localized-pair", top,
                       {"localize": list(pair), "A": a.paths() or [r for r in a.rows]},
                       (f"eCe at {{{', '.join(pair)}}} is finite-dimensional and not cosemisimple",))
    return None


# -- semiprime ------------------------------------------------------------------

def semiprime(c: MonomialCoalgebra, n: int) -> Verdict:
    tried = []
    # R1: finite coradical filtration
    if c.is_finite_dimensional():
        top = c.max_length()
        if top == 0:
            return Verdict(YES, "finite-cosemisimple", 0, None, ("C equals its coradical",))
        a = _length_piece(c, top - 1)
        if not verify_wedge_cover(a, a, c, top):
            raise ConsistencyError("penultimate filtration piece failed to re-verify")
        return Verdict(NO, "finite-cosemisimple", top, {"A": a},
                       (f"C = A ^ A with A = C_{top - 1}",))
    tried.append("finite-cosemisimple")

    # R2: a path that cannot be extended on one side
    for p, (left, right) in extension_report(c, n).items():
        if p.is_trivial or (left and right):
            continue
        a = avoid_factor(c, p)
        x = wedge_xcheck(a, a, c, n)
        if not (x.ok and truncate(c, n).space <= x.linear and _proper_at(a, c, n)):
            raise ConsistencyError(f"extension-failure witness for {p} failed to re-verify")
        side = "left" if not left else "right"
        return Verdict(NO, "extension-failure", n, {"A": a, "path": p},
                       (f"{p} has no {side} extension in C",))
    tried.append("extension-failure")

    # R3: squares of short members stay in C
    if n >= 2:
        short = [p for p in enumerate_paths(c, n // 2) if not p.is_trivial]
        if all(p.source == p.target and Path(p.arrows + p.arrows, p.source, p.target) in c
               for p in short):
            return Verdict(YES, "square-rule", n, None,
                           (f"p*p in C for all {len(short)} members of length <= {n // 2}",))
    tried.append("square-rule")

    # R4: hereditary with strongly connected components
    if is_full(c) and scc(c.quiver).all_strongly_connected:
        return Verdict(YES, "hereditary-strongly-connected", n, None,
                       ("C = kQ and every component of Q is strongly connected",))
    tried.append("hereditary-strongly-connected")

    # R5: two-vertex localizations
    probe = _localized_probe(c, n)
    if probe is not None:
        return probe
    tried.append("localized-pair")
    return Verdict(UNKNOWN, "none", n, None, tuple(f"tried {r}" for r in tried))


# -- prime ------------------------------------------------------------------------

def _candidates(c: MonomialCoalgebra) -> list:
    q = c.quiver
    out = []
    for a in q.arrows:
        if q.path(a.id) in c:
            out.append((f"avoid {a.id}", avoid_factor(c, a.id)))
    verts = [v for v in q.vertices if v in c.vertices]
    if len(verts) <= 6:
        subsets = [s for r in range(1, len(verts)) for s in itertools.combinations(verts, r)]
    else:
        subsets = [tuple(v for v in verts if v != x) for x in verts]
    for s in subsets:
        out.append((f"support {{{','.join(s)}}}", restrict_to_vertices(c, s)))
    return out


def prime(c: MonomialCoalgebra, n: int) -> Verdict:
    q = c.quiver
    res = scc(q)
    if is_full(c) and len(res.weak_components) == 1 and res.all_strongly_connected:
        return Verdict(YES, "hereditary-strongly-connected", n, None,
                       ("C = kQ with Q strongly connected",))
    target = set(enumerate_paths(c, n))
    cands = [(name, m) for name, m in _candidates(c) if _proper_at(m, c, n)]
    for (na, a), (nb, b) in itertools.product(cands, repeat=2):
        if set(wedge_monomial(a, b, c, n)) == target:
            if not verify_wedge_cover(a, b, c, n):
                raise ConsistencyError(f"prime witness ({na}, {nb}) failed to re-verify")
            return Verdict(NO, "wedge-decomposition", n, {"A": a, "B": b},
                           (f"C = A ^ B with A = {na}, B = {nb}",))
    sp = semiprime(c, n)
    if sp.verdict == NO and "A" in sp.witness and isinstance(sp.witness["A"], MonomialCoalgebra):
        a = sp.witness["A"]
        return Verdict(NO, "wedge-decomposition", sp.truncation, {"A": a, "B": a},
                       (f"not semiprime ({sp.rule})",))
    return Verdict(UNKNOWN, "none", n, None,
                   ("no factor-avoidance or vertex-support pair decomposes C",))


# -- hereditary, serial, string -------------------------------------------------

def _require_admissible(c):
    if not is_admissible(c):
        raise MonomialError("non-admissible input")


def hereditary(c: MonomialCoalgebra) -> Verdict:
    _require_admissible(c)
    if is_full(c):
        return Verdict(YES, "full-path-coalgebra", 0, None, ("C = kQ",))
    q = c.quiver
    length = 1
    while True:
        missing = [p for p in paths_up_to(q, length) if p not in c]
        if missing:
            return Verdict(NO, "full-path-coalgebra", length, {"path": missing[0]},
                           (f"{missing[0]} is a path of Q but not in C",))
        length += 1


def hereditary_closure(c: MonomialCoalgebra, n: int) -> TruncatedCoalgebra:
    _require_admissible(c)
    gq = gabriel_quiver(c)
    # admissible: the Gabriel quiver is Q itself
    counts = {(s, t): d for (s, t), (d, _) in gq.arrows}
    q = c.quiver
    mine = defaultdict(int)
    for a in q.arrows:
        mine[(a.src, a.tgt)] += 1
    assert counts == dict(mine)
    return truncate(MonomialCoalgebra.full(q), n)


def serial(c: MonomialCoalgebra) -> Verdict:
    _require_admissible(c)
    gq = gabriel_quiver(c)
    heavy = [(k, v) for k, v in gq.arrows if v[0] > 1]
    if heavy:
        (s, t), val = heavy[0]
        return Verdict(NO, "serial-shape", 2, {"arrow": [s, t], "value": list(val)},
                       (f"valued arrow {s}->{t} has value {val}",))
    ok = serial_shape(gq.underlying())
    if ok:
        return Verdict(YES, "serial-shape", 2, None, ("Gabriel quiver has in/out degrees <= 1",))
    und = gq.underlying()
    deg_out = defaultdict(int)
    deg_in = defaultdict(int)
    for a in und.arrows:
        deg_out[a.src] += 1
        deg_in[a.tgt] += 1
    bad = next(v for v in und.vertices if deg_out[v] > 1 or deg_in[v] > 1)
    return Verdict(NO, "serial-shape", 2, {"vertex": bad},
                   (f"vertex {bad} has in/out degree {deg_in[bad]}/{deg_out[bad]}",))


def string(c: MonomialCoalgebra) -> Verdict:
    res = string_check(c)
    if res is True:
        return Verdict(YES, "string-conditions", 2, None, ("conditions a)-c) hold",))
    return Verdict(NO, "string-conditions", 2, {"condition": res.condition, **res.witness},
                   (f"condition {res.condition}) fails",))


# -- wildness obstructions --------------------------------------------------------

def _composition_case(q: Quiver, a: str, b: str, c: str) -> str:
    """Case letter for arrows ``c: u->v`` and ``a, b`` leaving ``v`` with
    ``a*c`` and ``b*c`` both in the coalgebra."""
    A, B, Cc = q.arrow(a), q.arrow(b), q.arrow(c)
    u = Cc.src
    if c in (a, b):
        return "d"
    if A.tgt == B.tgt:
        return "c" if A.tgt == u else "b"
    loops = [x for x in (A, B) if x.src == x.tgt]
    if loops:
        other = B if loops[0] is A else A
        return "e" if other.tgt == u else "f"
    return "g" if u in (A.tgt, B.tgt) else "h"


def wild_obstructions(c: MonomialCoalgebra, n: int = 2) -> list:
    """Detected wildness patterns; an empty list certifies nothing."""
    _require_admissible(c)
    q = c.quiver
    out = []
    for emb in find_all_forbidden(q):
        out.append(Obstruction(f"forbidden:{emb.pattern}" + ("^op" if emb.opposite else ""),
                               {"vertices": dict(emb.vertex_map), "arrows": dict(emb.arrow_map)}))
    for v in q.vertices:
        outs = [a.id for a in q.out_arrows(v)]
        ins = [a.id for a in q.in_arrows(v)]
        if len(outs) >= 3:
            out.append(Obstruction("three-out", {"vertex": v, "arrows": outs}))
        if len(ins) >= 3:
            out.append(Obstruction("three-in", {"vertex": v, "arrows": ins}))
    qop = q.opposite()
    for cc in q.arrows:
        pc = q.path(cc.id)
        after = left_extensions(c, pc)
        for a, b in itertools.combinations(after, 2):
            out.append(Obstruction(_composition_case(q, a, b, cc.id),
                                   {"vertex": cc.tgt, "c": cc.id, "a": a, "b": b, "dual": False}))
        before = right_extensions(c, pc)
        for a, b in itertools.combinations(before, 2):
            out.append(Obstruction(_composition_case(qop, a, b, cc.id),
                                   {"vertex": cc.src, "c": cc.id, "a": a, "b": b, "dual": True}))
    if is_full(c):
        for comp, shape in zip(weak_components(q), shape_class(q)):
            if shape.family != "Other":
                continue
            arrows = [a for a in q.arrows if a.src in comp]
            if len(comp) == 1 and len(arrows) == 1:
                continue    # one loop: the polynomial coalgebra
            out.append(Obstruction("hereditary-non-euclidean", {"vertices": list(comp)}))
    return out


# -- whole report ------------------------------------------------------------------

def _components(core: MonomialCoalgebra, gq: ValuedQuiver) -> list:
    return weak_components(gq.underlying())


def analyze(c: MonomialCoalgebra, n: int) -> ClassificationReport:
    core = admissible_core(c)
    gq = gabriel_quiver(core)
    comps = _components(core, gq)
    pieces = [admissible_core(restrict_to_vertices(core, vs)) for vs in comps]
    comp_rows = []
    sp_verdicts = []
    for vs, piece in zip(comps, pieces):
        sp = semiprime(piece, n)
        sub = gq.restrict(vs).underlying()
        strongly = scc(sub).all_strongly_connected
        if sp.verdict == YES and not strongly:
            raise ConsistencyError(
                f"component {list(vs)} classified semiprime but its Gabriel quiver is not strongly connected")
        sp_verdicts.append(sp)
        comp_rows.append({"vertices": list(vs), "semiprime": sp,
                          "strongly_connected": strongly,
                          "shape": str(shape_class(sub)[0]) if vs else "empty"})

    if not pieces:
        total_sp = Verdict(YES, "finite-cosemisimple", 0, None, ("zero coalgebra",))
    elif len(pieces) == 1:
        total_sp = sp_verdicts[0]
    elif all(v.verdict == YES for v in sp_verdicts):
        total_sp = Verdict(YES, "direct-sum", n, None,
                           tuple(f"component {i}: {v.rule}" for i, v in enumerate(sp_verdicts)))
    else:
        bad = next((i for i, v in enumerate(sp_verdicts) if v.verdict == NO), None)
        if bad is None:
            total_sp = Verdict(UNKNOWN, "direct-sum", n, None,
                               ("some component is unknown",))
        else:
            total_sp = _lift_semiprime(core, pieces, bad, sp_verdicts[bad])

    if len(pieces) > 1:
        a = restrict_to_vertices(core, comps[0])
        b = restrict_to_vertices(core, [v for vs in comps[1:] for v in vs])
        if not verify_wedge_cover(a, b, core, n):
            raise ConsistencyError("direct-sum prime witness failed to re-verify")
        total_prime = Verdict(NO, "direct-sum", n, {"A": a, "B": b},
                              (f"{len(pieces)} components: C = A ^ B",))
    elif pieces:
        total_prime = prime(pieces[0], n)
    else:
        total_prime = Verdict(NO, "direct-sum", n, None, ("zero coalgebra",))
    for row, piece in zip(comp_rows, pieces):
        row["prime"] = prime(piece, n) if len(pieces) > 1 else total_prime

    return ClassificationReport(
        truncation=n,
        semiprime=total_sp,
        prime=total_prime,
        hereditary=hereditary(core),
        serial=serial(core),
        string=string(core),
        obstructions=wild_obstructions(core, n),
        components=comp_rows,
        gabriel=gq,
    )


def _lift_semiprime(core, pieces, bad: int, v: Verdict) -> Verdict:
    """Turn a component's negative verdict into one for the direct sum."""
    if v.witness is None or not isinstance(v.witness.get("A"), MonomialCoalgebra):
        return Verdict(NO, v.rule, v.truncation, {"component": bad, **(v.witness or {})}, v.evidence)
    t = v.truncation
    paths = set(enumerate_paths(v.witness["A"], t))
    for i, piece in enumerate(pieces):
        if i != bad:
            paths |= set(enumerate_paths(piece, t))
    a = MonomialCoalgebra.finite(core.quiver, paths, vertices=core.vertices)
    if not verify_wedge_cover(a, a, core, t):
        raise ConsistencyError("lifted semiprime witness failed to re-verify")
    return Verdict(NO, v.rule, t, {"A": a, "component": bad}, v.evidence)
