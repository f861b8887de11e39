"""Exact sparse linear algebra over the rationals, and truncated coalgebras.

Vectors are dicts mapping basis keys (paths, or pairs of paths for the
tensor square) to :class:`fractions.Fraction` coefficients; zero entries are
never stored.  A :class:`Subspace` keeps a reduced row-echelon basis, so
equality of subspaces is equality of their bases.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .monomial import MonomialCoalgebra, enumerate_paths
from .quiver import Path, Quiver, factorizations, paths_up_to

ONE = Fraction(1)


class LinearError(ValueError):
    pass


def _axpy(y: dict, a, x: dict) -> None:
    """y += a*x in place, dropping zeros."""
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


class Echelon:
    """Incrementally maintained reduced row-echelon form.

    ``order`` is a sort key on basis keys; the pivot of a row is its smallest
    key.  Each row optionally tracks the combination of inserted vectors it
    came from, which is how kernels are read off.
    """

    def __init__(self, order: Callable = lambda k: k, track: bool = False):
        self.order = order
        self.rows = {}        # pivot -> row (pivot coefficient 1)
        self.combos = {}      # pivot -> combination of inserted vectors
        self.track = track
        self.kernel = []      # combinations that reduced to zero
        self._count = 0

    def reduce(self, v: dict, combo: Optional[dict] = None) -> dict:
        v = dict(v)
        for k in [k for k in v if k in self.rows]:
            c = v.get(k)
            if c:
                _axpy(v, -c, self.rows[k])
                if combo is not None:
                    _axpy(combo, -c, self.combos[k])
        return v

    def insert(self, v: dict) -> bool:
        """Add ``v``; returns True when it raised the rank."""
        combo = {self._count: ONE} if self.track else None
        self._count += 1
        r = self.reduce(v, combo)
        if not r:
            if self.track:
                self.kernel.append(combo)
            return False
        piv = min(r, key=self.order)
        inv = 1 / r[piv]
        r = {k: c * inv for k, c in r.items()}
        if self.track:
            combo = {k: c * inv for k, c in combo.items()}
        for p, row in self.rows.items():
            c = row.get(piv)
            if c:
                _axpy(row, -c, r)
                if self.track:
                    _axpy(self.combos[p], -c, combo)
        self.rows[piv] = r
        if self.track:
            self.combos[piv] = combo
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def sorted_rows(self) -> list:
        return [self.rows[p] for p in sorted(self.rows, key=self.order)]


def kernel_of_columns(columns: Sequence[dict], order: Callable = lambda k: k) -> list:
    """Basis of ``{c : sum_k c_k columns[k] = 0}`` as dicts index -> coefficient."""
    ech = Echelon(order, track=True)
    for col in columns:
        ech.insert(col)
    return ech.kernel


# -- dense toolkit -------------------------------------------------------------

def _as_fraction_rows(matrix) -> list:
    return [[Fraction(x) for x in row] for row in matrix]


def rref(matrix) -> tuple:
    """Reduced row-echelon form of a dense matrix and its pivot columns."""
    rows = _as_fraction_rows(matrix)
    ncols = len(rows[0]) if rows else 0
    ech = Echelon()
    for r in rows:
        ech.insert({j: x for j, x in enumerate(r) if x})
    out = [[row.get(j, Fraction(0)) for j in range(ncols)] for row in ech.sorted_rows()]
    return out, sorted(ech.rows)


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def kernel(matrix) -> list:
    """Basis of the null space of a dense matrix, one list per vector."""
    rows = _as_fraction_rows(matrix)
    ncols = len(rows[0]) if rows else 0
    cols = [{i: rows[i][j] for i in range(len(rows)) if rows[i][j]} for j in range(ncols)]
    basis = kernel_of_columns(cols)
    return [[b.get(j, Fraction(0)) for j in range(ncols)] for b in basis]


# -- subspaces of kQ_{<=N} -------------------------------------------------------

class Subspace:
    """A subspace of ``kQ_{<=N}`` in canonical reduced row-echelon form."""

    __slots__ = ("quiver", "truncation", "rows", "_ech")

    def __init__(self, quiver: Quiver, truncation: int, vectors: Iterable[dict] = ()):
        self.quiver = quiver
        self.truncation = truncation
        ech = Echelon(quiver.path_key)
        for v in vectors:
            if any(len(p) > truncation for p in v):
                raise LinearError(f"vector leaves kQ_<={truncation}")
            ech.insert(v)
        self._ech = ech
        self.rows = tuple(ech.sorted_rows())

    @classmethod
    def span_paths(cls, quiver, truncation, paths) -> "Subspace":
        return cls(quiver, truncation, ({p: ONE} for p in paths))

    @classmethod
    def ambient(cls, quiver, truncation) -> "Subspace":
        return cls.span_paths(quiver, truncation, paths_up_to(quiver, truncation))

    def _check(self, other: "Subspace"):
        if self.quiver != other.quiver or self.truncation != other.truncation:
            raise LinearError("dimension mismatch: subspaces live in different ambients")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return self.dim

    def residue(self, v: dict) -> dict:
        """Canonical representative of ``v`` modulo this subspace."""
        return self._ech.reduce(v)

    def contains(self, v) -> bool:
        if isinstance(v, Path):
            v = {v: ONE}
        return not self.residue(v)

    __contains__ = contains

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.quiver == other.quiver and self.truncation == other.truncation
                and self.rows == other.rows)

    def __hash__(self):
        return hash(tuple(tuple(sorted(r.items(), key=lambda kv: self.quiver.path_key(kv[0])))
                          for r in self.rows))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.quiver, self.truncation, self.rows + other.rows)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        cols = list(self.rows) + list(other.rows)
        combos = kernel_of_columns(cols, self.quiver.path_key)
        out = []
        for c in combos:
            v = {}
            for i, coef in c.items():
                if i < len(self.rows):
                    _axpy(v, coef, self.rows[i])
            out.append(v)
        return Subspace(self.quiver, self.truncation, out)

    intersect = __and__

    def quotient_dim(self, other: "Subspace") -> int:
        """``dim V - dim(V & W)`` for ``V = self``."""
        return self.dim - (self & other).dim

    def paths(self) -> Optional[list]:
        """The spanning paths when the subspace is spanned by paths, else None."""
        out = []
        for r in self.rows:
            if len(r) != 1:
                return None
            (p, c), = r.items()
            out.append(p)
        return out

    def witness_outside(self, other: "Subspace") -> Optional[dict]:
        """A basis row of ``self`` not in ``other``, or None."""
        for r in self.rows:
            if not other.contains(r):
                return r
        return None

    def __repr__(self):
        return f"Subspace(dim={self.dim}, N={self.truncation})"


def format_vector(v: dict, quiver: Quiver) -> str:
    parts = []
    for p in sorted(v, key=quiver.path_key):
        c = v[p]
        parts.append(str(p) if c == 1 else f"{c}*{p}")
    return " + ".join(parts) if parts else "0"


def tensor_key(quiver):
    return lambda pq: (quiver.path_key(pq[0]), quiver.path_key(pq[1]))


# -- truncated coalgebras ---------------------------------------------------------

class TruncatedCoalgebra:
    """A subcoalgebra ``V`` of ``kQ_{<=N}``.

    ``cut_vertices`` restricts the comultiplication to cuts at the given
    vertices, which realises the localized coalgebra ``eCe`` on paths with
    both endpoints in that set.  ``None`` gives the ordinary path
    comultiplication.
    """

    def __init__(self, quiver: Quiver, truncation: int, space: Subspace,
                 cut_vertices: Optional[Iterable[str]] = None, check: bool = True):
        self.quiver = quiver
        self.truncation = truncation
        self.space = space
        self.cut_vertices = None if cut_vertices is None else frozenset(cut_vertices)
        self._dcache = {}
        if check:
            ok, bad = is_subcoalgebra(space, quiver, truncation, coalgebra=self)
            if not ok:
                raise LinearError(f"not closed under comultiplication: {format_vector(bad, quiver)}")

    def delta_path(self, p: Path) -> list:
        hit = self._dcache.get(p)
        if hit is None:
            cuts = factorizations(self.quiver, p)
            if self.cut_vertices is not None:
                cuts = [(e, t) for e, t in cuts if e.source in self.cut_vertices]
            hit = self._dcache[p] = list(cuts)
        return hit

    def delta(self, v: dict) -> dict:
        out = {}
        for p, c in v.items():
            for eta, tau in self.delta_path(p):
                k = (eta, tau)
                nv = out.get(k, 0) + c
                if nv:
                    out[k] = nv
                else:
                    out.pop(k)
        return out

    def counit(self, v: dict) -> Fraction:
        return sum((c for p, c in v.items() if p.is_trivial), Fraction(0))

    @property
    def dim(self) -> int:
        return self.space.dim

    def basis(self) -> tuple:
        return self.space.rows

    def simple(self, v: str) -> Subspace:
        return Subspace.span_paths(self.quiver, self.truncation, [self.quiver.trivial(v)])

    def __repr__(self):
        return f"TruncatedCoalgebra(dim={self.dim}, N={self.truncation})"


def is_subcoalgebra(space: Subspace, quiver: Quiver, truncation: int, coalgebra=None) -> tuple:
    """``(True, None)`` when ``Delta(V)`` lies in ``V (x) V``, else
    ``(False, v)`` with ``v`` a basis vector whose coproduct escapes.

    Membership of ``x`` in ``V (x) V`` is tested as ``(pr (x) id)x = 0`` and
    ``(id (x) pr)x = 0``, with ``pr`` the canonical residue map modulo ``V``.
    """
    if coalgebra is None:
        coalgebra = TruncatedCoalgebra(quiver, truncation, space, check=False)
    res = {}

    def residue(p):
        r = res.get(p)
        if r is None:
            r = res[p] = space.residue({p: ONE})
        return r

    for v in space.rows:
        x = coalgebra.delta(v)
        left, right = {}, {}
        for (eta, tau), c in x.items():
            for k, r in residue(eta).items():
                nv = left.get((k, tau), 0) + c * r
                if nv:
                    left[(k, tau)] = nv
                else:
                    left.pop((k, tau))
            for k, r in residue(tau).items():
                nv = right.get((eta, k), 0) + c * r
                if nv:
                    right[(eta, k)] = nv
                else:
                    right.pop((eta, k))
        if left or right:
            return False, v
    return True, None


def truncate(m: MonomialCoalgebra, n: int) -> TruncatedCoalgebra:
    """Span of the member paths of length <= n."""
    paths = enumerate_paths(m, n)
    q = m.quiver
    members = set(paths)
    for p in paths:
        for eta, tau in factorizations(q, p):
            if eta not in members or tau not in members:
                raise LinearError(f"presentation is not subpath-closed at {p}")
    return TruncatedCoalgebra(q, n, Subspace.span_paths(q, n, paths), check=False)


def socle(c: TruncatedCoalgebra) -> Subspace:
    """Span of the trivial paths lying in ``c``."""
    q = c.quiver
    verts = [q.trivial(v) for v in q.vertices if c.space.contains(q.trivial(v))]
    soc = Subspace.span_paths(q, c.truncation, verts)
    # a pointed coalgebra's coradical is spanned by its group-likes
    assert all(p.is_trivial for p in (soc.paths() or []))
    return soc


def is_cosemisimple(c: TruncatedCoalgebra) -> bool:
    return socle(c) == c.space


def coassoc_check(c: TruncatedCoalgebra) -> bool:
    """``(Delta (x) id) Delta == (id (x) Delta) Delta`` on every basis vector."""
    for v in c.basis():
        d = c.delta(v)
        lhs, rhs = {}, {}
        for (x, y), coef in d.items():
            for (x1, x2), c1 in c.delta({x: ONE}).items():
                k = (x1, x2, y)
                lhs[k] = lhs.get(k, 0) + coef * c1
            for (y1, y2), c2 in c.delta({y: ONE}).items():
                k = (x, y1, y2)
                rhs[k] = rhs.get(k, 0) + coef * c2
        lhs = {k: x for k, x in lhs.items() if x}
        rhs = {k: x for k, x in rhs.items() if x}
        if lhs != rhs:
            return False
    return True
