"""Monomial subcoalgebras of path coalgebras.

A monomial coalgebra is the span of a subpath-closed set of paths.  Finite
ones are stored as explicit path sets; infinite families are stored as a
:class:`PathAutomaton` whose accepted words (read source-to-target) are the
nontrivial member paths.

The automaton semantics: a nonempty word belongs to the language when some
run starting in an initial state reads it and stops in an accepting state.
By default every state is initial, which makes suffix closure automatic for
automata whose states are all accepting.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .quiver import Path, Quiver, QuiverError, factorizations, paths_up_to, scc


class MonomialError(ValueError):
    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(dict.fromkeys(problems))
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class PathAutomaton:
    states: tuple
    transitions: tuple             # (from_state, arrow_id, to_state), source-to-target reading
    accepting: frozenset
    initial: Optional[frozenset] = None   # None means every state

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(str(s) for s in self.states))
        object.__setattr__(self, "transitions",
                           tuple(sorted({(str(a), str(x), str(b)) for a, x, b in self.transitions})))
        object.__setattr__(self, "accepting", frozenset(str(s) for s in self.accepting))
        if self.initial is not None:
            object.__setattr__(self, "initial", frozenset(str(s) for s in self.initial))

    @property
    def starts(self) -> frozenset:
        return frozenset(self.states) if self.initial is None else self.initial

    @property
    def delta(self) -> dict:
        d = self.__dict__.get("_delta")
        if d is None:
            d = defaultdict(set)
            for a, x, b in self.transitions:
                d[a, x].add(b)
            d = {k: frozenset(v) for k, v in d.items()}
            object.__setattr__(self, "_delta", d)
        return d

    def step(self, current: frozenset, symbol: str) -> frozenset:
        delta = self.delta
        out = set()
        for s in current:
            out |= delta.get((s, symbol), frozenset())
        return frozenset(out)

    def run(self, word) -> frozenset:
        cur = self.starts
        for x in word:
            cur = self.step(cur, x)
            if not cur:
                break
        return cur

    def accepts(self, word) -> bool:
        """Membership of a nonempty word."""
        return bool(word) and bool(self.run(word) & self.accepting)

    def reversed(self) -> "PathAutomaton":
        return PathAutomaton(self.states, [(b, x, a) for a, x, b in self.transitions],
                             self.starts, self.accepting)

    def trimmed(self) -> "PathAutomaton":
        keep = _reachable(self.starts, self.transitions) & _reachable(
            self.accepting, [(b, x, a) for a, x, b in self.transitions])
        init = None if self.initial is None else self.initial & keep
        return PathAutomaton([s for s in self.states if s in keep],
                             [t for t in self.transitions if t[0] in keep and t[2] in keep],
                             self.accepting & keep, init)

    def is_trim(self) -> bool:
        keep = _reachable(self.starts, self.transitions) & _reachable(
            self.accepting, [(b, x, a) for a, x, b in self.transitions])
        return keep == set(self.states)

    def has_cycle(self) -> bool:
        succ = defaultdict(list)
        for a, _, b in self.transitions:
            succ[a].append(b)
        color = {}
        for root in self.states:
            if root in color:
                continue
            stack = [(root, iter(succ[root]))]
            color[root] = 1
            while stack:
                v, it = stack[-1]
                for w in it:
                    c = color.get(w)
                    if c == 1:
                        return True
                    if c is None:
                        color[w] = 1
                        stack.append((w, iter(succ[w])))
                        break
                else:
                    color[v] = 2
                    stack.pop()
        return False


def _reachable(starts, transitions) -> set:
    succ = defaultdict(list)
    for a, _, b in transitions:
        succ[a].append(b)
    seen = set(starts)
    todo = list(starts)
    while todo:
        for w in succ[todo.pop()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def _first_unclosed_prefix(aut: PathAutomaton):
    """A nonempty word that is a proper prefix of an accepted word but is not
    itself accepted, or None.  Assumes ``aut`` is trim."""
    start = aut.starts
    symbols = sorted({x for _, x, _ in aut.transitions})
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        cur, word = queue.popleft()
        for x in symbols:
            nxt = aut.step(cur, x)
            if not nxt:
                continue
            w = word + (x,)
            # trim means nxt can still reach acceptance
            if not (nxt & aut.accepting):
                return w
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, w))
    return None


class MonomialCoalgebra:
    """Span of a subpath-closed path set inside ``kQ``.

    ``vertices`` is the support: the trivial paths that belong to the
    coalgebra.  It defaults to every vertex of the quiver.
    """

    __slots__ = ("quiver", "kind", "paths", "complete", "automaton", "vertices", "_memo")

    def __init__(self, quiver: Quiver, *, paths=None, automaton=None, vertices=None,
                 complete: bool = True):
        if (paths is None) == (automaton is None):
            raise ValueError("give exactly one of paths= or automaton=")
        self.quiver = quiver
        self.vertices = frozenset(quiver.vertices if vertices is None else vertices)
        self.complete = complete
        self._memo = {}
        if paths is not None:
            self.kind = "finite"
            nontriv = frozenset(p for p in paths if not p.is_trivial)
            extra = {p.source for p in paths if p.is_trivial}
            if vertices is None:
                self.vertices = self.vertices | extra
            self.paths = nontriv | {Path((), v, v) for v in self.vertices}
            self.automaton = None
        else:
            self.kind = "pattern"
            self.paths = None
            self.automaton = automaton

    # -- constructors -------------------------------------------------------

    @classmethod
    def finite(cls, quiver, paths, vertices=None, complete=True):
        return cls(quiver, paths=frozenset(paths), vertices=vertices, complete=complete)

    @classmethod
    def pattern(cls, quiver, automaton, vertices=None):
        return cls(quiver, automaton=automaton, vertices=vertices)

    @classmethod
    def full(cls, quiver):
        """The whole path coalgebra ``kQ``, as a pattern."""
        aut = PathAutomaton(quiver.vertices, [(a.src, a.id, a.tgt) for a in quiver.arrows],
                            quiver.vertices)
        return cls(quiver, automaton=aut)

    @classmethod
    def generated_by(cls, quiver, generators, vertices=None):
        """Smallest finite monomial coalgebra containing ``generators``."""
        out = set()
        for g in generators:
            for i in range(len(g.arrows)):
                for j in range(i + 1, len(g.arrows) + 1):
                    out.add(quiver.path(*g.arrows[i:j]))
            for v in quiver.path_vertices(g):
                out.add(Path((), v, v))
        if vertices is not None:
            out |= {Path((), v, v) for v in vertices}
        verts = None if vertices is None else set(vertices) | {p.source for p in out if p.is_trivial}
        return cls.finite(quiver, out, vertices=verts)

    def __repr__(self):
        if self.kind == "finite":
            return f"MonomialCoalgebra(finite, {len(self.paths)} paths)"
        return f"MonomialCoalgebra(pattern, {len(self.automaton.states)} states)"

    def __eq__(self, other):
        if not isinstance(other, MonomialCoalgebra):
            return NotImplemented
        return (self.quiver == other.quiver and self.kind == other.kind
                and self.vertices == other.vertices and self.paths == other.paths
                and self.automaton == other.automaton and self.complete == other.complete)

    def __hash__(self):
        return hash((self.kind, self.vertices, self.paths, self.automaton))

    # -- queries ------------------------------------------------------------

    def __contains__(self, p: Path) -> bool:
        if p.is_trivial:
            return p.source in self.vertices
        if self.kind == "finite":
            return p in self.paths
        hit = self._memo.get(p)
        if hit is None:
            hit = self._memo[p] = self.automaton.accepts(p.walk)
        return hit

    def is_finite_dimensional(self) -> bool:
        if self.kind == "finite":
            return True
        return not self.automaton.trimmed().has_cycle()

    def max_length(self) -> Optional[int]:
        """Length of the longest member path; None when unbounded."""
        if self.kind == "finite":
            return max((len(p) for p in self.paths), default=0)
        if not self.is_finite_dimensional():
            return None
        aut = self.automaton.trimmed()
        # longest accepted run in a DAG
        best = {s: 0 for s in aut.starts}
        order = _topo(aut)
        longest = 0
        for s in order:
            if s not in best:
                continue
            if s in aut.accepting:
                longest = max(longest, best[s])
            for a, _, b in aut.transitions:
                if a == s:
                    best[b] = max(best.get(b, 0), best[s] + 1)
        return longest


def _topo(aut: PathAutomaton) -> list:
    indeg = {s: 0 for s in aut.states}
    for _, _, b in aut.transitions:
        indeg[b] += 1
    queue = deque(s for s in aut.states if indeg[s] == 0)
    out = []
    while queue:
        s = queue.popleft()
        out.append(s)
        for a, _, b in aut.transitions:
            if a == s:
                indeg[b] -= 1
                if indeg[b] == 0:
                    queue.append(b)
    return out


# -- validation ---------------------------------------------------------------

def validate_monomial(m: MonomialCoalgebra) -> None:
    """Raise :class:`MonomialError` listing every violated invariant."""
    q = m.quiver
    problems = []
    for v in m.vertices:
        if v not in set(q.vertices):
            problems.append(f"support vertex {v!r} is not in the quiver")
    if m.kind == "finite":
        for p in q.sorted_paths(p for p in m.paths if not p.is_trivial):
            try:
                if q.path(*p.arrows) != p:
                    problems.append(f"invalid path word {p}: endpoints disagree with the quiver")
                    continue
            except QuiverError as exc:
                problems.append(f"invalid path word {p}: {exc}")
                continue
            for sub in (Path(p.arrows[1:], p.source, q.arrow(p.arrows[1]).tgt) if len(p) > 1 else None,
                        Path(p.arrows[:-1], q.arrow(p.arrows[-2]).src, p.target) if len(p) > 1 else None):
                if sub is not None and sub not in m:
                    problems.append(f"non-closed set: missing subpath {sub} of {p}")
            for v in (p.source, p.target):
                if v not in m.vertices:
                    problems.append(f"non-closed set: missing vertex e[{v}] of {p}")
        if problems:
            raise MonomialError(problems)
        return

    aut = m.automaton
    names = set(aut.states)
    for a, x, b in aut.transitions:
        if a not in names or b not in names:
            problems.append(f"transition ({a}, {x}, {b}) uses an undeclared state")
        if not q.has_arrow(x):
            problems.append(f"invalid path word: transition label {x!r} is not an arrow")
    if not aut.accepting <= names or not aut.starts <= names:
        problems.append("initial/accepting states must be declared states")
    if problems:
        raise MonomialError(problems)
    if not aut.is_trim():
        dead = sorted(set(aut.states) - set(aut.trimmed().states))
        raise MonomialError(f"non-trimmed automaton: states {dead} are unreachable or dead")
    incoming = defaultdict(list)
    for a, x, b in aut.transitions:
        incoming[b].append(x)
    for a, y, b in aut.transitions:
        ay = q.arrow(y)
        for v in (ay.src, ay.tgt):
            if v not in m.vertices:
                problems.append(f"non-closed set: arrow {y} touches vertex {v!r} outside the support")
        for x in incoming[a]:
            if q.arrow(x).tgt != ay.src:
                problems.append(f"invalid path word: {x} then {y} does not compose")
    if problems:
        raise MonomialError(sorted(set(problems)))
    w = _first_unclosed_prefix(aut)
    if w is not None:
        raise MonomialError(f"non-closed language: prefix {'.'.join(w)} (source-to-target) of a member is missing")
    w = _first_unclosed_prefix(aut.reversed())
    if w is not None:
        raise MonomialError(
            f"non-closed language: suffix {'.'.join(reversed(w))} (source-to-target) of a member is missing")


def enumerate_paths(m: MonomialCoalgebra, n: int) -> list:
    """Member paths of length <= n in deterministic order."""
    q = m.quiver
    key = ("enum", n)
    if key in m._memo:
        return m._memo[key]
    if m.kind == "finite":
        out = [p for p in m.paths if len(p) <= n]
    else:
        aut = m.automaton
        out = [Path((), v, v) for v in m.vertices]
        layer = []
        if n >= 1:
            for a in q.arrows:
                cur = aut.step(aut.starts, a.id)
                if cur:
                    layer.append((Path((a.id,), a.src, a.tgt), cur))
        for length in range(1, n + 1):
            nxt = []
            for p, cur in layer:
                if cur & aut.accepting:
                    out.append(p)
                if length == n:
                    continue
                for a in q.out_arrows(p.target):
                    s = aut.step(cur, a.id)
                    if s:
                        nxt.append((Path((a.id,) + p.arrows, p.source, a.tgt), s))
            layer = nxt
    out = q.sorted_paths(out)
    m._memo[key] = out
    return out


def is_admissible(m: MonomialCoalgebra) -> bool:
    q = m.quiver
    if m.vertices != frozenset(q.vertices):
        return False
    return all(q.path(a.id) in m for a in q.arrows)


def is_full(m: MonomialCoalgebra) -> bool:
    """Does ``m`` contain every path of its quiver (i.e. is it ``kQ``)?"""
    q = m.quiver
    if m.vertices != frozenset(q.vertices):
        return False
    if m.kind == "finite":
        res = scc(q)
        if len(res.components) != len(q.vertices) or any(a.src == a.tgt for a in q.arrows):
            return False
        return set(paths_up_to(q, len(q.vertices))) <= set(m.paths)
    aut = m.automaton
    seen = set()
    queue = deque()
    for a in q.arrows:
        cur = aut.step(aut.starts, a.id)
        if not (cur & aut.accepting):
            return False
        if (a.tgt, cur) not in seen:
            seen.add((a.tgt, cur))
            queue.append((a.tgt, cur))
    while queue:
        v, cur = queue.popleft()
        for a in q.out_arrows(v):
            nxt = aut.step(cur, a.id)
            if not (nxt & aut.accepting):
                return False
            if (a.tgt, nxt) not in seen:
                seen.add((a.tgt, nxt))
                queue.append((a.tgt, nxt))
    return True


def left_extensions(m: MonomialCoalgebra, p: Path) -> list:
    """Arrows ``b`` with ``b*p`` in ``m``."""
    q = m.quiver
    return [a.id for a in q.out_arrows(p.target)
            if Path((a.id,) + p.arrows, p.source, a.tgt) in m]


def right_extensions(m: MonomialCoalgebra, p: Path) -> list:
    """Arrows ``g`` with ``p*g`` in ``m``."""
    q = m.quiver
    return [a.id for a in q.in_arrows(p.source)
            if Path(p.arrows + (a.id,), a.src, p.target) in m]


def extension_report(m: MonomialCoalgebra, n: int) -> dict:
    """``{p: (left_extendable, right_extendable)}`` for members of length <= n."""
    return {p: (bool(left_extensions(m, p)), bool(right_extensions(m, p)))
            for p in enumerate_paths(m, n)}


@dataclass(frozen=True)
class StringViolation:
    condition: str      # "a" or "c"
    witness: dict

    def __bool__(self):
        return False


def string_check(m: MonomialCoalgebra):
    """``True`` when ``m`` is a string coalgebra, else a falsy
    :class:`StringViolation` naming the first offending vertex or arrow."""
    if not is_admissible(m):
        raise MonomialError("string_check needs an admissible coalgebra")
    q = m.quiver
    for v in q.vertices:
        outs = [a.id for a in q.out_arrows(v)]
        ins = [a.id for a in q.in_arrows(v)]
        if len(outs) > 2:
            return StringViolation("a", {"vertex": v, "direction": "out", "arrows": outs})
        if len(ins) > 2:
            return StringViolation("a", {"vertex": v, "direction": "in", "arrows": ins})
    for beta in q.arrows:
        pb = q.path(beta.id)
        after = left_extensions(m, pb)
        if len(after) > 1:
            return StringViolation("c", {"arrow": beta.id, "side": "after", "arrows": after})
        before = right_extensions(m, pb)
        if len(before) > 1:
            return StringViolation("c", {"arrow": beta.id, "side": "before", "arrows": before})
    return True


def _assert_contained(sub: MonomialCoalgebra, sup: MonomialCoalgebra, n: int, name: str):
    for p in enumerate_paths(sub, n):
        if p not in sup:
            raise MonomialError(f"{name} is not contained in C: {p} missing")


def first_missing(sub: MonomialCoalgebra, sup: MonomialCoalgebra) -> Optional[Path]:
    """A shortest member of ``sub`` that is not in ``sup``, or None when ``sub``
    is contained in ``sup`` (decided exactly on the presentations)."""
    q = sub.quiver
    for v in q.vertices:
        if v in sub.vertices and v not in sup.vertices:
            return q.trivial(v)
    if sub.kind == "finite":
        return next((p for p in q.sorted_paths(sub.paths) if p not in sup), None)
    if sup.kind == "finite":
        # a validated pattern is prefix closed, so one step past sup's longest
        # member suffices
        top = sup.max_length()
        return next((p for p in enumerate_paths(sub, top + 1) if p not in sup), None)
    aut, other = sub.automaton, sup.automaton
    start = (aut.starts, other.starts)
    seen = {start}
    queue = deque([(start, ())])
    symbols = [a.id for a in q.arrows]
    while queue:
        (cur, cur2), word = queue.popleft()
        for x in symbols:
            nxt = aut.step(cur, x)
            if not nxt:
                continue
            nxt2 = other.step(cur2, x)
            w = word + (x,)
            if nxt & aut.accepting and not nxt2 & other.accepting:
                return q.walk(w)
            if (nxt, nxt2) not in seen:
                seen.add((nxt, nxt2))
                queue.append(((nxt, nxt2), w))
    return None


def wedge_monomial(a: MonomialCoalgebra, b: MonomialCoalgebra, c: MonomialCoalgebra,
                   n: int) -> frozenset:
    """Paths ``p`` of ``c`` with length <= n such that every cut
    ``p = eta * tau`` has ``eta`` in ``a`` or ``tau`` in ``b``."""
    _assert_contained(a, c, n, "A")
    _assert_contained(b, c, n, "B")
    q = c.quiver
    out = set()
    for p in enumerate_paths(c, n):
        if all(eta in a or tau in b for eta, tau in factorizations(q, p)):
            out.add(p)
    out = frozenset(out)
    closed = MonomialCoalgebra.finite(q, out, vertices={p.source for p in out if p.is_trivial})
    validate_monomial(closed)
    return out


def _contains_factor(p: Path, factor: tuple) -> bool:
    k = len(factor)
    return any(p.arrows[i:i + k] == factor for i in range(len(p.arrows) - k + 1))


def avoid_factor(m: MonomialCoalgebra, factor) -> MonomialCoalgebra:
    """Members of ``m`` that do not contain ``factor`` (a nontrivial path or an
    arrow id) as a subpath."""
    q = m.quiver
    if isinstance(factor, str):
        if not q.has_arrow(factor):
            return m
        factor = q.path(factor)
    if factor.is_trivial:
        raise MonomialError("cannot avoid a trivial path")
    if m.kind == "finite":
        out = MonomialCoalgebra.finite(
            q, [p for p in m.paths if not _contains_factor(p, factor.arrows)],
            vertices=m.vertices, complete=m.complete)
        validate_monomial(out)
        return out
    word = factor.walk
    k = len(word)
    # KMP-style automaton tracking the longest suffix read that is a prefix of word
    fail = [0] * (k + 1)
    j = 0
    for i in range(1, k):
        while j and word[i] != word[j]:
            j = fail[j]
        if word[i] == word[j]:
            j += 1
        fail[i + 1] = j

    def advance(state, x):
        while state and (state == k or word[state] != x):
            state = fail[state]
        if word[state] == x:
            state += 1
        return state

    aut = m.automaton
    states, trans = [], []
    start = [(s, 0) for s in aut.starts]
    seen = set(start)
    todo = list(start)
    delta = defaultdict(list)
    for a, x, b in aut.transitions:
        delta[a].append((x, b))
    while todo:
        s, j = todo.pop()
        states.append((s, j))
        for x, b in delta[s]:
            j2 = advance(j, x)
            if j2 == k:
                continue
            trans.append(((s, j), x, (b, j2)))
            if (b, j2) not in seen:
                seen.add((b, j2))
                todo.append((b, j2))
    name = {st: f"{st[0]}#{st[1]}" for st in states}
    prod = PathAutomaton(sorted(name.values()),
                         [(name[a], x, name[b]) for a, x, b in trans],
                         [name[st] for st in states if st[0] in aut.accepting],
                         [name[st] for st in start])
    out = MonomialCoalgebra.pattern(q, prod.trimmed(), vertices=m.vertices)
    validate_monomial(out)
    return out


def restrict_to_vertices(m: MonomialCoalgebra, keep: Iterable[str]) -> MonomialCoalgebra:
    """Members all of whose vertices lie in ``keep`` (a full-subquiver restriction)."""
    q = m.quiver
    keep = set(keep)
    verts = m.vertices & keep
    if m.kind == "finite":
        out = MonomialCoalgebra.finite(
            q, [p for p in m.paths if set(q.path_vertices(p)) <= keep],
            vertices=verts, complete=m.complete)
    else:
        aut = m.automaton
        ok = [t for t in aut.transitions if q.arrow(t[1]).src in keep and q.arrow(t[1]).tgt in keep]
        out = MonomialCoalgebra.pattern(
            q, PathAutomaton(aut.states, ok, aut.accepting, aut.starts).trimmed(), vertices=verts)
    validate_monomial(out)
    return out


def admissible_core(m: MonomialCoalgebra) -> MonomialCoalgebra:
    """The same coalgebra re-presented over the subquiver of its own vertices
    and arrows, where it is admissible."""
    q = m.quiver
    arrows = [a for a in q.arrows if a.src in m.vertices and a.tgt in m.vertices
              and q.path(a.id) in m]
    sub = Quiver([v for v in q.vertices if v in m.vertices], arrows)
    if m.kind == "finite":
        return MonomialCoalgebra.finite(sub, m.paths, vertices=m.vertices, complete=m.complete)
    ids = {a.id for a in arrows}
    aut = m.automaton
    t = [x for x in aut.transitions if x[1] in ids]
    return MonomialCoalgebra.pattern(sub, PathAutomaton(aut.states, t, aut.accepting, aut.starts).trimmed(),
                                     vertices=m.vertices)
