"""Wedge products, wedge powers and the coradical filtration.

``A ^C B`` is computed as the kernel of ``C -> C (x) C -> C/A (x) C/B``.  The
quotients are realised by canonical residues modulo ``A`` and ``B`` in the
ambient ``kQ_{<=N}``; since ``C/A`` embeds in ``kQ_{<=N}/A`` the kernel is the
same.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .linear import (ONE, LinearError, Subspace, TruncatedCoalgebra, _axpy,
                     is_subcoalgebra, kernel_of_columns, socle, tensor_key, truncate)
from .monomial import MonomialCoalgebra, enumerate_paths, wedge_monomial


def _kernel_map(a: Subspace, b: Subspace, c: TruncatedCoalgebra) -> Subspace:
    q = c.quiver
    res_a, res_b = {}, {}

    def ra(p):
        r = res_a.get(p)
        if r is None:
            r = res_a[p] = a.residue({p: ONE})
        return r

    def rb(p):
        r = res_b.get(p)
        if r is None:
            r = res_b[p] = b.residue({p: ONE})
        return r

    basis = c.basis()
    cols = []
    for v in basis:
        img = {}
        for (eta, tau), coef in c.delta(v).items():
            x, y = ra(eta), rb(tau)
            if not x or not y:
                continue
            for k1, c1 in x.items():
                for k2, c2 in y.items():
                    k = (k1, k2)
                    nv = img.get(k, 0) + coef * c1 * c2
                    if nv:
                        img[k] = nv
                    else:
                        img.pop(k)
        cols.append(img)
    out = []
    for combo in kernel_of_columns(cols, tensor_key(q)):
        vec = {}
        for i, coef in combo.items():
            _axpy(vec, coef, basis[i])
        out.append(vec)
    return Subspace(q, c.truncation, out)


def _require_sub(x: Subspace, c: TruncatedCoalgebra, name: str):
    if x.quiver != c.quiver or x.truncation != c.truncation:
        raise LinearError(f"{name} lives in a different ambient than C")
    if not x <= c.space:
        raise LinearError(f"{name} is not contained in C")
    ok, bad = is_subcoalgebra(x, c.quiver, c.truncation, coalgebra=c)
    if not ok:
        raise LinearError(f"{name} is not a subcoalgebra of C")


def wedge_linear(a: Subspace, b: Subspace, c: TruncatedCoalgebra, check: bool = True) -> Subspace:
    """``A ^C B`` for subcoalgebras ``A``, ``B`` of ``C``."""
    if check:
        _require_sub(a, c, "A")
        _require_sub(b, c, "B")
    w = _kernel_map(a, b, c)
    if check:
        ok, _ = is_subcoalgebra(w, c.quiver, c.truncation, coalgebra=c)
        assert ok, "wedge of subcoalgebras must be a subcoalgebra"
    return w


def comodule_wedge(i: Subspace, b: Subspace, c: TruncatedCoalgebra) -> Subspace:
    """The same kernel for an arbitrary subspace ``I`` (a right comodule in
    practice) on the left; no subcoalgebra checks."""
    return _kernel_map(i, b, c)


def wedge_power(a: Subspace, n: int, c: TruncatedCoalgebra, check: bool = True) -> Subspace:
    """Left-bracketed ``((A ^ A) ^ A) ...`` with ``n`` factors."""
    if n < 1:
        raise ValueError("wedge power needs n >= 1")
    if check:
        _require_sub(a, c, "A")
    w = a
    for _ in range(n - 1):
        nxt = _kernel_map(w, a, c)
        if nxt == w:
            break
        w = nxt
    return w


def coradical_filtration(c: TruncatedCoalgebra, upto: int) -> list:
    """``[C_0, ..., C_upto]`` with ``C_k`` the (k+1)-fold wedge power of the socle."""
    c0 = socle(c)
    out = [c0]
    for _ in range(upto):
        out.append(_kernel_map(out[-1], c0, c))
    for lo, hi in zip(out, out[1:]):
        assert lo <= hi, "coradical filtration must ascend"
    return out


@dataclass(frozen=True)
class XCheck:
    ok: bool
    combinatorial: Subspace
    linear: Subspace
    discrepancy: tuple      # vectors in one side but not the other

    def __bool__(self):
        return self.ok


def _span(m: MonomialCoalgebra, n: int) -> Subspace:
    return Subspace.span_paths(m.quiver, n, enumerate_paths(m, n))


def wedge_xcheck(a: MonomialCoalgebra, b: MonomialCoalgebra, c: MonomialCoalgebra, n: int) -> XCheck:
    """Compare the path-cut wedge with the linear kernel wedge at truncation n."""
    comb = Subspace.span_paths(c.quiver, n, wedge_monomial(a, b, c, n))
    lin = wedge_linear(_span(a, n), _span(b, n), truncate(c, n), check=False)
    bad = []
    for x, y in ((comb, lin), (lin, comb)):
        w = x.witness_outside(y)
        if w is not None:
            bad.append(w)
    return XCheck(not bad, comb, lin, tuple(bad))


@dataclass(frozen=True)
class Coidempotence:
    status: str                 # "yes-at-N", "no", "undetermined"
    truncation: int
    witness: Optional[dict] = None

    def __bool__(self):
        return self.status == "yes-at-N"


def is_coidempotent(a: Union[MonomialCoalgebra, Subspace],
                    c: Union[MonomialCoalgebra, TruncatedCoalgebra], n: int) -> Coidempotence:
    """Compare ``A ^C A`` with ``A`` inside ``C_{<=n}``.

    A "no" is a genuine answer (the witness lies in ``A ^ A`` but not in
    ``A``).  A "yes" only speaks about truncation ``n``; when ``A`` itself has
    members beyond ``n`` the truncated comparison cannot certify it and the
    result is "undetermined".
    """
    ct = truncate(c, n) if isinstance(c, MonomialCoalgebra) else c
    overflow = False
    if isinstance(a, MonomialCoalgebra):
        overflow = a.max_length() is None or a.max_length() > n
        a = _span(a, n)
    w = wedge_linear(a, a, ct)
    extra = w.witness_outside(a)
    if extra is not None:
        return Coidempotence("no", n, extra)
    return Coidempotence("undetermined" if overflow else "yes-at-N", n)
