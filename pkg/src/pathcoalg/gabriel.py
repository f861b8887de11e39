"""Gabriel quivers via wedges of simples, predecessors and localization.

For a pointed coalgebra inside ``kQ`` the simple comodules are the trivial
paths it contains.  An arrow ``S_j -> S_i`` of the Gabriel quiver has value
``dim (S_i ^ S_j) / (S_i + S_j)``; in the pointed case both components of
the value pair coincide.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Union

from .linear import Subspace, TruncatedCoalgebra, socle, truncate
from .monomial import MonomialCoalgebra, enumerate_paths
from .quiver import Path, Quiver, QuiverError, scc
from .wedge import comodule_wedge, wedge_linear


class ConsistencyError(AssertionError):
    """Two independent computations that must agree did not."""


@dataclass(frozen=True)
class ValuedQuiver:
    vertices: tuple
    arrows: tuple    # sorted ((src, tgt), (d1, d2)) pairs, at most one per ordered pair

    @classmethod
    def build(cls, vertices, labels: dict) -> "ValuedQuiver":
        idx = {v: i for i, v in enumerate(vertices)}
        items = sorted(((k, v) for k, v in labels.items() if v[0] > 0),
                       key=lambda kv: (idx[kv[0][0]], idx[kv[0][1]]))
        return cls(tuple(vertices), tuple(items))

    def valued_arrows(self):
        return self.arrows

    def label(self, src, tgt):
        return dict(self.arrows).get((src, tgt))

    def underlying(self) -> Quiver:
        """Plain quiver with ``d`` parallel arrows for a value ``(d, d)``."""
        arrows = []
        for (s, t), (d, _) in self.arrows:
            for k in range(d):
                arrows.append((f"{s}>{t}#{k}", s, t))
        return Quiver(self.vertices, arrows)

    def multiplicities(self) -> dict:
        return {f"{s}>{t}": d for (s, t), (d, _) in self.arrows}

    def restrict(self, keep) -> "ValuedQuiver":
        keep = set(keep)
        return ValuedQuiver(tuple(v for v in self.vertices if v in keep),
                            tuple(a for a in self.arrows if a[0][0] in keep and a[0][1] in keep))


def _as_truncated(c, n: int) -> TruncatedCoalgebra:
    if isinstance(c, MonomialCoalgebra):
        return truncate(c, n)
    return c


def _support(c: TruncatedCoalgebra) -> list:
    q = c.quiver
    return [v for v in q.vertices if c.space.contains(q.trivial(v))]


def gabriel_by_wedges(c: TruncatedCoalgebra) -> ValuedQuiver:
    verts = _support(c)
    simples = {v: c.simple(v) for v in verts}
    labels = {}
    for j in verts:
        for i in verts:
            w = wedge_linear(simples[i], simples[j], c, check=False)
            d = w.quotient_dim(simples[i] + simples[j])
            if d:
                labels[(j, i)] = (d, d)
    return ValuedQuiver.build(verts, labels)


def gabriel_by_arrows(m: MonomialCoalgebra) -> ValuedQuiver:
    """Count member arrows between support vertices."""
    q = m.quiver
    verts = [v for v in q.vertices if v in m.vertices]
    cnt = Counter((a.src, a.tgt) for a in q.arrows if q.path(a.id) in m)
    return ValuedQuiver.build(verts, {k: (d, d) for k, d in cnt.items()})


def gabriel_quiver(c: Union[MonomialCoalgebra, TruncatedCoalgebra], n: int = 2) -> ValuedQuiver:
    """Valued Gabriel quiver from wedges of simples; for monomial input the
    arrow count is computed as well and must agree."""
    vq = gabriel_by_wedges(_as_truncated(c, max(n, 1)))
    if isinstance(c, MonomialCoalgebra):
        fast = gabriel_by_arrows(c)
        if fast != vq:
            raise ConsistencyError(f"Gabriel quiver mismatch: wedges {vq} vs arrows {fast}")
    return vq


def wedge_gabriel(qa: ValuedQuiver, qb: ValuedQuiver, qc: ValuedQuiver,
                  in_a: Callable, in_b: Callable) -> ValuedQuiver:
    """Gabriel quiver of ``A ^C B`` from those of ``A``, ``B`` and ``C``.

    For simples ``T -> S``: if ``S`` is not in ``A`` and ``T`` not in ``B``
    there is no arrow; if ``S`` in ``A`` and ``T`` in ``B`` the arrow comes
    from ``Q_C``; otherwise from ``Q_A`` (``S`` in ``A``) or ``Q_B``.
    """
    order = {v: i for i, v in enumerate(qc.vertices)}
    verts = sorted(set(qa.vertices) | set(qb.vertices), key=lambda v: order.get(v, len(order)))
    for v in verts:
        if not (in_a(v) or in_b(v)):
            raise ValueError(f"vertex {v!r} lies in neither A nor B")
    labels = {}
    for t in verts:
        for s in verts:
            sa, tb = in_a(s), in_b(t)
            if not sa and not tb:
                continue
            source = qc if (sa and tb) else (qa if sa else qb)
            lab = source.label(t, s)
            if lab:
                labels[(t, s)] = lab
    return ValuedQuiver.build(verts, labels)


def injective_part(c: TruncatedCoalgebra, i: str) -> Subspace:
    """``E_i``: the part of ``C`` spanned by paths ending at ``i``.

    This is the image of the idempotent of the dual algebra attached to
    ``i``, acting by ``x -> sum e_i(x_1) x_2``.
    """
    out = []
    for v in c.basis():
        r = {p: x for p, x in v.items() if p.target == i}
        if r:
            out.append(r)
    return Subspace(c.quiver, c.truncation, out)


def socle_layers(c: TruncatedCoalgebra, i: str, n: int) -> list:
    """``[Soc^1 E_i, ..., Soc^n E_i]`` computed by iterated wedges with the
    coradical, cut down to ``E_i`` after each step."""
    c0 = socle(c)
    e = injective_part(c, i)
    layers = [c.simple(i)]
    while len(layers) < n:
        layers.append(comodule_wedge(layers[-1], c0, c) & e)
    return layers


def predecessor_degree(c: Union[MonomialCoalgebra, TruncatedCoalgebra], i: str, j: str,
                       n: int, truncation: int) -> int:
    """Multiplicity of ``S_j`` in the (n+1)-st socle layer of ``E_i``.

    With ``W = Soc^n E_i`` this is ``dim (W ^ S_j) / (W + S_j)``.  For a
    monomial coalgebra the answer is also the number of member paths of
    length ``n`` from ``j`` to ``i``, and the two are compared.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if truncation < n + 1:
        raise ValueError(f"truncation too small: need N >= {n + 1} for depth {n}")
    ct = _as_truncated(c, truncation)
    w = socle_layers(ct, i, n)[-1]
    sj = ct.simple(j)
    d = comodule_wedge(w, sj, ct).quotient_dim(w + sj)
    if isinstance(c, MonomialCoalgebra):
        count = sum(1 for p in enumerate_paths(c, n)
                    if len(p) == n and p.source == j and p.target == i)
        if count != d:
            raise ConsistencyError(f"predecessor count {d} disagrees with path count {count}")
    return d


# -- localization ----------------------------------------------------------------

@dataclass(frozen=True)
class LocalizationSpec:
    keep: frozenset
    cell_bound: int = 12

    def __post_init__(self):
        object.__setattr__(self, "keep", frozenset(str(v) for v in self.keep))
        if not self.keep:
            raise ValueError("localization needs a nonempty vertex set")

    def check(self, q: Quiver):
        missing = self.keep - set(q.vertices)
        if missing:
            raise QuiverError(f"localization vertices {sorted(missing)} are not in the quiver")


def cells(q: Quiver, spec: LocalizationSpec) -> list:
    """Paths from ``X`` to ``X`` with every intermediate vertex outside ``X``,
    of length at most ``spec.cell_bound``, in path order."""
    spec.check(q)
    x = spec.keep
    out = []
    frontier = [Path((a.id,), a.src, a.tgt) for a in q.arrows if a.src in x]
    for _ in range(spec.cell_bound):
        nxt = []
        for p in frontier:
            if p.target in x:
                out.append(p)
                continue
            for a in q.out_arrows(p.target):
                nxt.append(Path((a.id,) + p.arrows, p.source, a.tgt))
        frontier = nxt
    return q.sorted_paths(out)


def cells_unbounded(q: Quiver, spec: LocalizationSpec) -> bool:
    """True when infinitely many cells exist: a cycle outside ``X`` that is
    entered from ``X`` and can leave back into ``X``."""
    x = spec.keep
    outside = q.full_subquiver([v for v in q.vertices if v not in x])
    res = scc(outside)
    cyclic = set()
    for comp in res.components:
        if len(comp) > 1 or any(a.src == a.tgt for a in outside.arrows if a.src in comp):
            cyclic |= comp
    if not cyclic:
        return False
    # entered from X through outside vertices
    fwd = {a.tgt for a in q.arrows if a.src in x and a.tgt not in x}
    fwd = _closure(fwd, lambda v: [a.tgt for a in outside.out_arrows(v)])
    back = {a.src for a in q.arrows if a.tgt in x and a.src not in x}
    back = _closure(back, lambda v: [a.src for a in outside.in_arrows(v)])
    return bool(cyclic & fwd & back)


def _closure(start, succ) -> set:
    seen = set(start)
    todo = list(start)
    while todo:
        for w in succ(todo.pop()):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def cell_arrow_id(p: Path) -> str:
    return p.arrows[0] if len(p) == 1 else ".".join(p.arrows)


def localize_quiver(q: Quiver, spec: LocalizationSpec) -> Quiver:
    """Vertices ``X``, one arrow per cell (arrow id = the cell's arrows in
    written order joined by dots)."""
    cs = cells(q, spec)
    return Quiver([v for v in q.vertices if v in spec.keep],
                  [(cell_arrow_id(p), p.source, p.target) for p in cs])


def cell_degree(p: Path, q: Quiver, keep) -> int:
    """Number of cells a path between ``X``-vertices splits into."""
    if p.is_trivial:
        return 0
    verts = q.path_vertices(p)
    return 1 + sum(1 for v in verts[1:-1] if v in keep)


def cell_factorization(p: Path, q: Quiver, keep) -> list:
    """Split a path between ``X``-vertices into its cells, first-traversed
    cell first."""
    keep = set(keep)
    if p.source not in keep or p.target not in keep:
        raise ValueError(f"{p} does not start and end in the kept vertices")
    out, cur = [], []
    src = p.source
    for x in p.walk:
        cur.append(x)
        a = q.arrow(x)
        if a.tgt in keep:
            out.append(Path(tuple(reversed(cur)), src, a.tgt))
            cur, src = [], a.tgt
    return out


def to_localized(p: Path, q: Quiver, keep) -> Path:
    """The path of the localized quiver corresponding to ``p``."""
    if p.is_trivial:
        return Path((), p.source, p.target)
    ids = tuple(cell_arrow_id(c) for c in reversed(cell_factorization(p, q, keep)))
    return Path(ids, p.source, p.target)


def localize_monomial(c: MonomialCoalgebra, spec: LocalizationSpec, n: int) -> TruncatedCoalgebra:
    """``eCe`` at truncation n: member paths with both endpoints in ``X`` and
    the comultiplication keeping only cuts at ``X``-vertices."""
    q = c.quiver
    spec.check(q)
    x = spec.keep
    basis = [p for p in enumerate_paths(c, n) if p.source in x and p.target in x]
    space = Subspace.span_paths(q, n, basis)
    return TruncatedCoalgebra(q, n, space, cut_vertices=x)
