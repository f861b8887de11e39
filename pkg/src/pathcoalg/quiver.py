"""Quivers, paths, reachability and shape recognition.

Paths are written the way they compose: ``p = a_n ... a_1`` with ``a_1``
traversed first.  A :class:`Path` therefore stores its arrow ids in written
order, so ``Path(("beta", "alpha"))`` means *alpha then beta*.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence


class QuiverError(ValueError):
    """Raised when a quiver or path violates its structural invariants."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class Arrow(NamedTuple):
    id: str
    src: str
    tgt: str


@dataclass(frozen=True, order=False)
class Path:
    """A path in written (right-to-left) order.

    ``arrows`` holds ids as written, ``source``/``target`` are the endpoints.
    A trivial path has no arrows and ``source == target``.
    """

    arrows: tuple
    source: str
    target: str

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @property
    def walk(self) -> tuple:
        """Arrow ids in traversal (source-to-target) order."""
        return self.arrows[::-1]

    def __str__(self) -> str:
        if self.is_trivial:
            return f"e[{self.source}]"
        return "*".join(self.arrows)

    __repr__ = __str__


class Quiver:
    """A finite directed multigraph with loops.

    Vertices and arrows keep their declaration order, which fixes every
    deterministic ordering in the package.  Construction does not validate;
    call :func:`validate` (or :meth:`checked`) before relying on invariants.
    """

    __slots__ = ("vertices", "arrows", "_by_id", "_out", "_in", "_vindex", "_aindex")

    def __init__(self, vertices: Iterable, arrows: Iterable = ()):
        self.vertices = tuple(str(v) for v in vertices)
        self.arrows = tuple(Arrow(str(a[0]), str(a[1]), str(a[2])) for a in arrows)
        self._by_id = {}
        for a in self.arrows:
            self._by_id.setdefault(a.id, a)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._aindex = {}
        for i, a in enumerate(self.arrows):
            self._aindex.setdefault(a.id, i)
        self._out = defaultdict(list)
        self._in = defaultdict(list)
        for a in self.arrows:
            self._out[a.src].append(a)
            self._in[a.tgt].append(a)

    @classmethod
    def checked(cls, vertices, arrows=()) -> "Quiver":
        q = cls(vertices, arrows)
        validate(q)
        return q

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        arrows = ", ".join(f"{a.id}:{a.src}->{a.tgt}" for a in self.arrows)
        return f"Quiver({list(self.vertices)}, [{arrows}])"

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self._by_id[arrow_id]
        except KeyError:
            raise QuiverError(f"unknown arrow {arrow_id!r}") from None

    def has_arrow(self, arrow_id: str) -> bool:
        return arrow_id in self._by_id

    def out_arrows(self, v: str) -> list:
        return self._out.get(v, [])

    def in_arrows(self, v: str) -> list:
        return self._in.get(v, [])

    def vertex_index(self, v: str) -> int:
        return self._vindex[v]

    def arrow_index(self, arrow_id: str) -> int:
        return self._aindex[arrow_id]

    # -- path construction -------------------------------------------------

    def trivial(self, v: str) -> Path:
        if v not in self._vindex:
            raise QuiverError(f"unknown vertex {v!r}")
        return Path((), v, v)

    def path(self, *arrows: str) -> Path:
        """Build a path from arrow ids in written order (last-traversed first)."""
        if len(arrows) == 1 and not isinstance(arrows[0], str):
            arrows = tuple(arrows[0])
        if not arrows:
            raise QuiverError("use trivial(v) for trivial paths")
        objs = [self.arrow(a) for a in arrows]
        for left, right in zip(objs, objs[1:]):
            # right is traversed before left
            if right.tgt != left.src:
                raise QuiverError(
                    f"arrows {left.id} and {right.id} do not compose "
                    f"({right.id} ends at {right.tgt}, {left.id} starts at {left.src})")
        return Path(tuple(arrows), objs[-1].src, objs[0].tgt)

    def walk(self, arrows: Sequence[str]) -> Path:
        """Build a path from arrow ids listed source-to-target."""
        return self.path(*reversed(tuple(arrows)))

    def is_path(self, arrows: Sequence[str]) -> bool:
        try:
            self.path(*arrows)
        except QuiverError:
            return False
        return True

    def path_vertices(self, p: Path) -> tuple:
        """Vertices visited by ``p`` in traversal order."""
        if p.is_trivial:
            return (p.source,)
        out = [p.source]
        for a in p.walk:
            out.append(self._by_id[a].tgt)
        return tuple(out)

    def path_key(self, p: Path) -> tuple:
        """Sort key: length, then arrow declaration indices, then vertex index."""
        if p.is_trivial:
            return (0, (), self._vindex.get(p.source, -1))
        return (len(p.arrows), tuple(self._aindex[a] for a in p.arrows), 0)

    def sorted_paths(self, paths: Iterable[Path]) -> list:
        return sorted(paths, key=self.path_key)

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [(a.id, a.tgt, a.src) for a in self.arrows])

    def full_subquiver(self, keep: Iterable[str]) -> "Quiver":
        keep = set(keep)
        return Quiver([v for v in self.vertices if v in keep],
                      [a for a in self.arrows if a.src in keep and a.tgt in keep])


def compose(q: Quiver, left: Path, right: Path) -> Path:
    """The concatenation ``left * right`` (``right`` traversed first)."""
    if right.target != left.source:
        raise QuiverError(f"{left} and {right} do not compose")
    if right.is_trivial:
        return left
    if left.is_trivial:
        return right
    return Path(left.arrows + right.arrows, right.source, left.target)


def factorizations(q: Quiver, p: Path) -> Iterator:
    """All ``(eta, tau)`` with ``eta * tau == p``, trivial end cuts included.

    Order runs from ``(e_t, p)`` to ``(p, e_s)``, matching the terms of the
    path comultiplication.
    """
    if p.is_trivial:
        yield p, p
        return
    n = len(p.arrows)
    verts = q.path_vertices(p)  # traversal order; verts[k] sits after k arrows
    for k in range(n, -1, -1):
        # tau covers the first k traversed arrows
        tau_arrows = p.arrows[n - k:]
        eta_arrows = p.arrows[:n - k]
        cut = verts[k]
        tau = Path(tau_arrows, p.source, cut) if tau_arrows else Path((), cut, cut)
        eta = Path(eta_arrows, cut, p.target) if eta_arrows else Path((), cut, cut)
        yield eta, tau


def validate(q: Quiver) -> None:
    """Raise :class:`QuiverError` listing every violated invariant."""
    problems = []
    seen_v = set()
    for v in q.vertices:
        if v in seen_v:
            problems.append(f"duplicate vertex {v!r}")
        seen_v.add(v)
    seen = set()
    for a in q.arrows:
        if a.id in seen:
            problems.append(f"duplicate arrow-id {a.id!r}")
        seen.add(a.id)
        for end, v in (("source", a.src), ("target", a.tgt)):
            if v not in seen_v:
                problems.append(f"dangling endpoint: arrow {a.id!r} {end} {v!r} is not a vertex")
    if problems:
        raise QuiverError(problems)


def paths_up_to(q: Quiver, n: int) -> list:
    """Every path of length <= n, ordered by :meth:`Quiver.path_key`."""
    if n < 0:
        raise ValueError("length bound must be non-negative")
    layer = [q.trivial(v) for v in q.vertices]
    out = list(layer)
    for _ in range(n):
        nxt = []
        for p in layer:
            for a in q.out_arrows(p.target):
                nxt.append(Path((a.id,) + p.arrows, p.source, a.tgt))
        layer = nxt
        out.extend(layer)
    return q.sorted_paths(out)


def count_paths(q: Quiver, n: int) -> list:
    """Number of paths of each length 0..n, by dynamic programming."""
    ending = {v: 1 for v in q.vertices}
    counts = [len(q.vertices)]
    for _ in range(n):
        nxt = Counter()
        for a in q.arrows:
            nxt[a.tgt] += ending.get(a.src, 0)
        ending = nxt
        counts.append(sum(nxt.values()))
    return counts


# -- reachability ------------------------------------------------------------

def strongly_connected_components(vertices: Sequence, successors) -> list:
    """Tarjan's algorithm, iterative.  Returns components in reverse
    topological order of the condensation (sinks first)."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    result = []
    counter = itertools.count()

    for root in vertices:
        if root in index:
            continue
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                result.append(comp)
    return result


@dataclass(frozen=True)
class SCCResult:
    components: tuple          # tuple of frozensets, ordered by first vertex
    condensation: frozenset    # edges (i, j) between component indices
    weak_components: tuple     # tuple of frozensets
    strongly_connected: tuple  # one flag per weak component

    def component_of(self, v) -> int:
        for i, c in enumerate(self.components):
            if v in c:
                return i
        raise KeyError(v)

    @property
    def all_strongly_connected(self) -> bool:
        return all(self.strongly_connected)


def weak_components(q: Quiver) -> list:
    """Connected components of the underlying undirected graph, each a sorted
    tuple of vertices in declaration order; components ordered by first vertex."""
    parent = {v: v for v in q.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in q.arrows:
        ra, rb = find(a.src), find(a.tgt)
        if ra != rb:
            parent[ra] = rb
    groups = defaultdict(list)
    for v in q.vertices:
        groups[find(v)].append(v)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: q.vertex_index(g[0]))


def scc(q: Quiver) -> SCCResult:
    succ = {v: [a.tgt for a in q.out_arrows(v)] for v in q.vertices}
    raw = strongly_connected_components(q.vertices, succ.__getitem__)
    comps = sorted((frozenset(c) for c in raw), key=lambda c: min(q.vertex_index(v) for v in c))
    where = {v: i for i, c in enumerate(comps) for v in c}
    dag = frozenset((where[a.src], where[a.tgt]) for a in q.arrows if where[a.src] != where[a.tgt])
    weak = tuple(frozenset(w) for w in weak_components(q))
    flags = tuple(len({where[v] for v in w}) == 1 for w in weak)
    return SCCResult(tuple(comps), dag, weak, flags)


def is_strongly_connected(q: Quiver) -> tuple:
    """One flag per connected component: is that component a single SCC?"""
    return scc(q).strongly_connected


# -- shapes ------------------------------------------------------------------

@dataclass(frozen=True)
class ShapeClass:
    family: str        # "Dynkin", "Euclidean" or "Other"
    kind: str = ""     # "A", "D", "E"
    n: int = 0

    def __str__(self):
        if self.family == "Other":
            return "Other"
        tilde = "~" if self.family == "Euclidean" else ""
        return f"{self.kind}{tilde}{self.n}"


OTHER = ShapeClass("Other")


def _classify_component(vertices: Sequence, edges: list) -> ShapeClass:
    """Classify one connected undirected multigraph given as (u, v) pairs."""
    n = len(vertices)
    if any(u == v for u, v in edges):
        return OTHER
    mult = Counter(frozenset(e) for e in edges)
    if any(m > 1 for m in mult.values()):
        if n == 2 and len(edges) == 2:
            return ShapeClass("Euclidean", "A", 1)
        return OTHER
    m = len(edges)
    deg = Counter()
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    if n == 1:
        return ShapeClass("Dynkin", "A", 1)
    if m == n:
        if all(deg[v] == 2 for v in vertices):
            return ShapeClass("Euclidean", "A", n - 1)
        return OTHER
    if m != n - 1:
        return OTHER
    # a tree from here on
    adj = defaultdict(list)
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    branch = [v for v in vertices if deg[v] >= 3]
    if not branch:
        return ShapeClass("Dynkin", "A", n)
    if any(deg[v] > 4 for v in branch):
        return OTHER
    if len(branch) == 1 and deg[branch[0]] == 4:
        return ShapeClass("Euclidean", "D", 4) if n == 5 else OTHER
    if len(branch) == 1:
        arms = sorted(_arm_length(adj, branch[0], w) for w in adj[branch[0]])
        if arms[0] == 1 and arms[1] == 1:
            return ShapeClass("Dynkin", "D", n)
        known = {(1, 2, 2): ("Dynkin", 6), (1, 2, 3): ("Dynkin", 7),
                 (1, 2, 4): ("Dynkin", 8), (2, 2, 2): ("Euclidean", 6),
                 (1, 3, 3): ("Euclidean", 7), (1, 2, 5): ("Euclidean", 8)}
        hit = known.get(tuple(arms))
        return ShapeClass(hit[0], "E", hit[1]) if hit else OTHER
    if len(branch) == 2 and all(deg[b] == 3 for b in branch):
        for b in branch:
            leaves = [w for w in adj[b] if deg[w] == 1]
            if len(leaves) < 2:
                return OTHER
        return ShapeClass("Euclidean", "D", n - 1)
    return OTHER


def _arm_length(adj, center, start) -> int:
    length, prev, cur = 1, center, start
    while True:
        nxt = [w for w in adj[cur] if w != prev]
        if not nxt:
            return length
        prev, cur = cur, nxt[0]
        length += 1


def shape_class(q: Quiver) -> list:
    """Shape of each connected component (order of :func:`weak_components`)."""
    out = []
    for comp in weak_components(q):
        cs = set(comp)
        edges = [(a.src, a.tgt) for a in q.arrows if a.src in cs]
        out.append(_classify_component(comp, edges))
    return out


# -- forbidden wild patterns -------------------------------------------------

def _pattern(vertices, arrows) -> Quiver:
    return Quiver(vertices, arrows)


FORBIDDEN_PATTERNS = {
    "K3": _pattern("uv", [("a", "u", "v"), ("b", "u", "v"), ("c", "u", "v")]),
    "K5": _pattern("s12345", [(f"a{i}", str(i), "s") for i in range(1, 6)]),
    "L3": _pattern("u", [("a", "u", "u"), ("b", "u", "u"), ("c", "u", "u")]),
    "B2~": _pattern("uvw", [("a", "u", "v"), ("b", "u", "v"), ("c", "u", "w")]),
    "P1": _pattern("uv", [("a", "u", "u"), ("b", "u", "u"), ("c", "u", "v")]),
    "P2": _pattern("uv", [("a", "u", "u"), ("b", "u", "v"), ("c", "u", "v")]),
}


@dataclass(frozen=True)
class Embedding:
    pattern: str
    opposite: bool          # True when the opposite pattern embeds
    vertex_map: tuple       # ((pattern vertex, quiver vertex), ...)
    arrow_map: tuple        # ((pattern arrow, quiver arrow), ...)

    def verify(self, q: Quiver) -> bool:
        pat = FORBIDDEN_PATTERNS[self.pattern]
        if self.opposite:
            pat = pat.opposite()
        vmap = dict(self.vertex_map)
        amap = dict(self.arrow_map)
        if len(set(vmap.values())) != len(vmap) or len(set(amap.values())) != len(amap):
            return False
        for a in pat.arrows:
            if not q.has_arrow(amap.get(a.id, "")):
                return False
            img = q.arrow(amap[a.id])
            if (img.src, img.tgt) != (vmap[a.src], vmap[a.tgt]):
                return False
        return True


def find_embedding(pattern: Quiver, q: Quiver):
    """First injective embedding of ``pattern`` into ``q`` as a subquiver
    (vertex map, arrow map), or None.  Plain backtracking."""
    parr = list(pattern.arrows)

    def extend(i, vmap, used_v, amap, used_a):
        if i == len(parr):
            rest = [v for v in pattern.vertices if v not in vmap]
            if not rest:
                return dict(vmap), dict(amap)
            free = [v for v in q.vertices if v not in used_v]
            choice = next(itertools.permutations(free, len(rest)), None)
            if choice is None:
                return None
            return {**vmap, **dict(zip(rest, choice))}, dict(amap)
        pa = parr[i]
        for qa in q.arrows:
            if qa.id in used_a:
                continue
            new = {}
            ok = True
            for pv, qv in ((pa.src, qa.src), (pa.tgt, qa.tgt)):
                have = vmap.get(pv, new.get(pv))
                if have is None:
                    if qv in used_v or qv in new.values():
                        ok = False
                        break
                    new[pv] = qv
                elif have != qv:
                    ok = False
                    break
            if not ok:
                continue
            vmap.update(new)
            used_v.update(new.values())
            amap[pa.id] = qa.id
            used_a.add(qa.id)
            found = extend(i + 1, vmap, used_v, amap, used_a)
            if found:
                return found
            del amap[pa.id]
            used_a.discard(qa.id)
            for pv, qv in new.items():
                del vmap[pv]
                used_v.discard(qv)
        return None

    return extend(0, {}, set(), {}, set())


def find_all_forbidden(q: Quiver) -> list:
    """Every pattern (and opposite pattern) that embeds, one witness each."""
    out = []
    for tag, pat in FORBIDDEN_PATTERNS.items():
        variants = [(False, pat)]
        if tag not in ("K3", "L3"):
            variants.append((True, pat.opposite()))
        for opp, p in variants:
            hit = find_embedding(p, q)
            if hit:
                vmap, amap = hit
                out.append(Embedding(tag, opp, tuple(sorted(vmap.items())), tuple(sorted(amap.items()))))
    return out


def find_forbidden(q: Quiver):
    """The first forbidden wild pattern found in ``q`` (checked in the order
    K3, K5, L3, B2~, P1, P2, each before its opposite), or None."""
    found = find_all_forbidden(q)
    return found[0] if found else None


def serial_shape(q: Quiver, multiplicities=None) -> bool:
    """True iff every vertex has in- and out-degree at most one.

    ``multiplicities`` maps arrow ids to valued-arrow labels; any label above
    one makes the question ill-posed.
    """
    if multiplicities:
        bad = [k for k, m in multiplicities.items() if m != 1]
        if bad:
            raise QuiverError(f"not a shape-checkable quiver: multiplicity > 1 on {bad}")
    outdeg = Counter(a.src for a in q.arrows)
    indeg = Counter(a.tgt for a in q.arrows)
    return all(outdeg[v] <= 1 and indeg[v] <= 1 for v in q.vertices)


def to_dot(q, name: str = "Q") -> str:
    """DOT digraph text.  Accepts a :class:`Quiver` or a valued quiver
    (anything with ``vertices`` and ``valued_arrows()``)."""
    lines = [f"digraph {name} {{"]
    for v in q.vertices:
        lines.append(f"  \"{v}\";")
    if isinstance(q, Quiver):
        for a in q.arrows:
            lines.append(f"  \"{a.src}\" -> \"{a.tgt}\" [label=\"{a.id}\"];")
    else:
        for (src, tgt), (d1, d2) in q.valued_arrows():
            lines.append(f"  \"{src}\" -> \"{tgt}\" [label=\"({d1},{d2})\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
