"""Comparison maps between the bar-type and twisted-type models.

``phi_M: (M (x) B Omega C, b_M) -> (M (x) C, d (x) tau)`` with section
``id (x) rho`` and contraction ``h`` of its kernel, and the induced maps
``F``, ``G`` between the two hom complexes.  Every map is evaluated on a
weight window (total chain degree of all letters at most ``W``); all maps
preserve weight, so windowed identities are exact.

Signs: ``phi_M(m (x) {[c1|...|ck]}) = (-1)^{|[c1..c_{k-1}]|} m.[c1..c_{k-1}] (x) ck``,
``h(m (x) {[c1|w]|...}) = (-1)^{|m| + |c1|} m (x) {[c1]|[w]|...}`` and the
``i``-th summand of ``G`` carries ``(-1)^{|[c1..ci]|}``; here ``|[..]|`` is
the cobar degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .dgalg import rho
from .dgmod import (
    BarModuleComplex,
    HomComplex,
    ModuleError,
    TwistedComplex,
    bar_module_complex,
    clean,
    tau_source,
    twisted_d,
)
from .linalg import (
    RATIONALS,
    BoundedComplex,
    ChainMapError,
    Field,
    SparseMatrix,
    add_into,
    complex_from_operator,
    induced_homology_map,
    matrix_of,
)
from .simplicial import ChainCoalgebra

__all__ = [
    "ComparisonMap",
    "twisted_window",
    "phi_M",
    "section",
    "phi_M_elem",
    "section_elem",
    "h_elem",
    "contraction_h",
    "nilpotency_index",
    "F_map",
    "G_map",
    "h_tilde",
    "F_matrix",
    "G_matrix",
    "word_length",
]


def _sign(n: int) -> int:
    return -1 if n & 1 else 1


def _apply(fn, vec: Mapping) -> dict:
    out: dict = {}
    for k, v in vec.items():
        for x, u in fn(k).items():
            add_into(out, x, u * v)
    return out


# ---------------------------------------------------------------------------
# elementwise formulas


def phi_M_elem(M, c: ChainCoalgebra, key) -> dict:
    m, beta = key
    if not beta:
        return {(m, c.coaugmentation): 1}
    if len(beta) > 1:
        return {}
    w = beta[0]
    s = _sign(sum(c.degree(x) - 1 for x in w[:-1]))
    return {(x, w[-1]): s * v for x, v in M.act(m, w[:-1]).items()}


def section_elem(c: ChainCoalgebra, key) -> dict:
    m, x = key
    return {(m, b): v for b, v in rho(c, x).items()}


def h_elem(M, c: ChainCoalgebra, key) -> dict:
    m, beta = key
    if not beta or len(beta[0]) == 1:
        return {}
    w = beta[0]
    s = _sign(M.degree(m) + c.degree(w[0]))
    return {(m, ((w[0],), w[1:]) + beta[1:]): s}


def word_length(x: Mapping) -> int:
    """Largest number of cobar letters in a bar word occurring in ``x``."""
    return max((sum(len(a) for a in beta) for (_, beta) in x), default=0)


# ---------------------------------------------------------------------------
# materialized maps


@dataclass
class ComparisonMap:
    kind: str
    source: BoundedComplex
    target: BoundedComplex
    matrices: dict[int, SparseMatrix]

    def check_chain_map(self) -> None:
        """Raise :class:`ChainMapError` unless ``d f = f d`` in every stored degree."""
        f = self.source.field
        for d in self.source.degrees:
            if d not in self.target.basis:
                continue
            fm = self.matrices[d]
            lower = self.matrices.get(d - 1, SparseMatrix.zeros(self.target.dim(d - 1), self.source.dim(d - 1), f))
            diff = self.target.diff(d) @ fm - lower @ self.source.diff(d)
            if not diff.is_zero():
                (_, col) = min(diff.entries)
                raise ChainMapError(f"{self.kind} is not a chain map in degree {d}", d, self.source.basis[d][col])

    def is_chain_map(self) -> bool:
        try:
            self.check_chain_map()
        except ChainMapError:
            return False
        return True

    def homology_maps(self, degrees: Iterable[int] | None = None):
        if degrees is None:
            degrees = [d for d in self.source.degrees if d in self.target.basis]
        return induced_homology_map(self.matrices, self.source, self.target, degrees)

    def __matmul__(self, other: "ComparisonMap") -> "ComparisonMap":
        mats = {}
        for d in other.source.degrees:
            a = self.matrices.get(d)
            b = other.matrices.get(d)
            if a is None or b is None:
                continue
            mats[d] = a @ b
        return ComparisonMap(f"{self.kind}*{other.kind}", other.source, self.target, mats)


def twisted_window(M, c: ChainCoalgebra, weight_cap: int, f: Field = RATIONALS) -> TwistedComplex:
    """The weight window of ``M (x) C``; a subcomplex, so no truncation flags."""
    basis = tau_source(M, c, weight_cap)
    if not basis:
        basis = {0: []}
    lo, hi = min(basis), max(basis)
    basis = {n: basis.get(n, []) for n in range(min(lo, 0), hi + 1)}
    cx, dropped = complex_from_operator(basis, lambda k: twisted_d(M, c, k), f, strict=True)
    return TwistedComplex(M, c, cx, dropped)


def _map_between(kind, fn, src: BoundedComplex, tgt: BoundedComplex, f: Field) -> ComparisonMap:
    mats = {}
    for d in src.degrees:
        mats[d] = matrix_of(fn, src.basis[d], tgt.basis.get(d, []), f, strict=True)
    return ComparisonMap(kind, src, tgt, mats)


def phi_M(M, c: ChainCoalgebra, weight_cap: int = 4, f: Field = RATIONALS):
    """``phi_M`` on the weight window, with the windows it connects.

    Returns ``(map, bar_side, twisted_side)``.
    """
    bc = bar_module_complex(M, c, weight_cap, f)
    tw = twisted_window(M, c, weight_cap, f)
    return _map_between("phi_M", lambda k: phi_M_elem(M, c, k), bc.complex, tw.complex, f), bc, tw


def section(M, c: ChainCoalgebra, weight_cap: int = 4, f: Field = RATIONALS):
    """``id (x) rho_C`` on the weight window; returns ``(map, twisted_side, bar_side)``."""
    bc = bar_module_complex(M, c, weight_cap, f)
    tw = twisted_window(M, c, weight_cap, f)
    return _map_between("section", lambda k: section_elem(c, k), tw.complex, bc.complex, f), tw, bc


def contraction_h(M, c: ChainCoalgebra, x: Mapping, f: Field = RATIONALS) -> dict:
    """``h`` on an element of ``ker phi_M``; raises if ``x`` is not in the kernel."""
    if clean(_apply(lambda k: phi_M_elem(M, c, k), x), f):
        raise ModuleError("element is not in the kernel of phi_M", next(iter(x), None))
    return clean(_apply(lambda k: h_elem(M, c, k), x), f)


def nilpotency_index(bc: BarModuleComplex, x: Mapping, bound: int | None = None, f: Field = RATIONALS) -> int | None:
    """Least ``n`` with ``(b h + h b - id)^n x = 0``, or ``None`` past ``bound``.

    ``bound`` defaults to :func:`word_length` of ``x``.
    """
    M, c = bc.module, bc.coalgebra
    if bound is None:
        bound = word_length(x)
    hfn = lambda k: h_elem(M, c, k)
    cur = clean(x, f)
    n = 0
    while cur:
        if n >= bound:
            return None
        nxt = _apply(hfn, _apply(bc.d, cur))
        for k, v in _apply(bc.d, _apply(hfn, cur)).items():
            add_into(nxt, k, v)
        for k, v in cur.items():
            add_into(nxt, k, -v)
        cur = clean(nxt, f)
        n += 1
    return n


# ---------------------------------------------------------------------------
# hom-complex maps


def _by_source(g: Mapping) -> dict:
    out: dict = {}
    for (x, n), v in g.items():
        out.setdefault(x, []).append((n, v))
    return out


def F_map(f_: Mapping, ht: HomComplex) -> dict:
    """``F(f) = f o (id (x) rho_C)`` restricted to the source window of ``ht``."""
    c = ht.coalgebra
    byx = _by_source(f_)
    out: dict = {}
    for keys in ht.source.values():
        for m, x in keys:
            for beta, u in rho(c, x).items():
                for n, v in byx.get((m, beta), ()):
                    add_into(out, ((m, x), n), u * v)
    return clean(out, ht.field)


def G_map(g: Mapping, hi: HomComplex) -> dict:
    """``G(g)``: on ``m (x) {[c1|...|ck]}`` the sum over ``i < k`` of
    ``(-1)^{|[c1..ci]|} g(m.[c1..ci] (x) c_{i+1}).[c_{i+2}..ck]``; on the empty
    bar word ``g(m (x) v)``; zero on longer bar words.
    """
    c = hi.coalgebra
    M, N = hi.module, hi.target
    byx = _by_source(g)
    out: dict = {}
    for keys in hi.source.values():
        for m, beta in keys:
            if not beta:
                for n, v in byx.get((m, c.coaugmentation), ()):
                    add_into(out, ((m, beta), n), v)
                continue
            if len(beta) > 1:
                continue
            w = beta[0]
            for i in range(len(w)):
                s = _sign(sum(c.degree(x) - 1 for x in w[:i]))
                for x, u in M.act(m, w[:i]).items():
                    for n, v in byx.get((x, w[i]), ()):
                        for n2, t in N.act(n, w[i + 1:]).items():
                            add_into(out, ((m, beta), n2), s * u * v * t)
    return clean(out, hi.field)


def h_tilde(f_: Mapping, hi: HomComplex) -> dict:
    """``f o h`` on the source window of ``hi``."""
    M, c = hi.module, hi.coalgebra
    byx = _by_source(f_)
    out: dict = {}
    for keys in hi.source.values():
        for key in keys:
            for y, u in h_elem(M, c, key).items():
                for n, v in byx.get(y, ()):
                    add_into(out, (key, n), u * v)
    return clean(out, hi.field)


def _matrix(fn, src: HomComplex, tgt: HomComplex, p: int) -> SparseMatrix:
    labels = src.complex.basis.get(p, [])
    tl = tgt.complex.basis.get(p, [])
    return matrix_of(lambda lab: fn({lab: 1}), labels, tl, src.field, strict=True)


def F_matrix(hi: HomComplex, ht: HomComplex, p: int) -> SparseMatrix:
    return _matrix(lambda g: F_map(g, ht), hi, ht, p)


def G_matrix(ht: HomComplex, hi: HomComplex, p: int) -> SparseMatrix:
    return _matrix(lambda g: G_map(g, hi), ht, hi, p)
