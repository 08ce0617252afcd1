"""Right dg modules over a cobar algebra, twisted tensor products and hom complexes.

Modules are encoded by the action of single letters; longer words act by
composition, ``m.[c1|c2] = (m.[c1]).[c2]``.  Elements everywhere are plain
dicts ``key -> coefficient`` with integer or rational coefficients; matrices
are coerced into the active field when complexes are assembled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .dgalg import BarCoalgebra, CobarAlgebra, NotConnectedError, bar, cobar
from .linalg import (
    RATIONALS,
    BoundedComplex,
    Field,
    SparseMatrix,
    add_into,
    complex_from_operator,
    homology_ranks,
)
from .simplicial import ChainCoalgebra, SimplicialSet, normalized_chains

__all__ = [
    "ModuleError",
    "DgModule",
    "FreeCobarModule",
    "trivial_module",
    "hopf_module",
    "monodromy_module",
    "validate_module",
    "TwistedComplex",
    "twisted_complex",
    "colimit_complex",
    "BarModuleComplex",
    "bar_module_complex",
    "HomComplex",
    "hom_tau",
    "hom_infty",
    "hom_strict",
    "embed_strict",
    "compose_infty",
    "clean",
]


class ModuleError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message} (witness {witness!r})")
        self.witness = witness


def _sign(n: int) -> int:
    return -1 if n & 1 else 1


def clean(vec: Mapping, f: Field = RATIONALS) -> dict:
    """Coerce coefficients into ``f`` and drop zeros."""
    out = {}
    for k, v in vec.items():
        v = f(v)
        if v:
            out[k] = v
    return out


# ---------------------------------------------------------------------------
# modules


@dataclass
class DgModule:
    """A finite right dg module given by generators, ``d`` and letter actions.

    ``differential[m]`` and ``action[c][m]`` are dicts of generator -> coefficient.
    Missing entries are zero.
    """

    name: str
    degrees: dict[str, int]
    differential: dict[str, dict[str, object]] = field(default_factory=dict)
    action: dict[str, dict[str, dict[str, object]]] = field(default_factory=dict)
    over: str | None = None

    finite = True

    def basis(self, deg: int) -> list[str]:
        return sorted(m for m, k in self.degrees.items() if k == deg)

    @property
    def generators(self) -> list[str]:
        return sorted(self.degrees, key=lambda m: (self.degrees[m], m))

    @property
    def degree_range(self) -> tuple[int, int]:
        ks = list(self.degrees.values()) or [0]
        return min(ks), max(ks)

    def degree(self, m: str) -> int:
        return self.degrees[m]

    @staticmethod
    def weight(m) -> int:
        return 0

    def d(self, m: str) -> dict:
        return dict(self.differential.get(m, {}))

    def act_letter(self, m: str, c: str) -> dict:
        return dict(self.action.get(c, {}).get(m, {}))

    def act(self, m, word: Sequence[str]) -> dict:
        cur = {m: 1}
        for c in word:
            nxt: dict = {}
            for x, v in cur.items():
                for y, u in self.act_letter(x, c).items():
                    add_into(nxt, y, u * v)
            cur = nxt
            if not cur:
                break
        return cur

    def act_elem(self, vec: Mapping, word: Sequence[str]) -> dict:
        out: dict = {}
        for m, v in vec.items():
            for y, u in self.act(m, word).items():
                add_into(out, y, u * v)
        return out

    def key_str(self, m) -> str:
        return str(m)


@dataclass
class FreeCobarModule:
    """The cobar algebra as a right module over itself (bases truncated as in the algebra)."""

    algebra: CobarAlgebra
    name: str = "free"

    finite = False

    def basis(self, deg: int) -> list[tuple]:
        return self.algebra.basis(deg)

    def degree(self, m: tuple) -> int:
        return self.algebra.degree(m)

    def weight(self, m: tuple) -> int:
        return self.algebra.weight(m)

    def d(self, m: tuple) -> dict:
        return self.algebra.d(m)

    @staticmethod
    def act_letter(m: tuple, c: str) -> dict:
        return {m + (c,): 1}

    @staticmethod
    def act(m: tuple, word: Sequence[str]) -> dict:
        return {m + tuple(word): 1}

    def act_elem(self, vec: Mapping, word: Sequence[str]) -> dict:
        return {m + tuple(word): v for m, v in vec.items()}

    def key_str(self, m) -> str:
        return self.algebra.key_str(m)


def trivial_module(over: str | None = None) -> DgModule:
    """The ground field in degree 0; every letter acts by zero."""
    return DgModule("trivial", {"1": 0}, over=over)


def hopf_module(cell: str = "sigma", over: str | None = "sphere_min2") -> DgModule:
    """``e0`` in degree 0, ``e1`` in degree 1, ``e0.[cell] = e1``, zero differential."""
    return DgModule("hopf", {"e0": 0, "e1": 1}, {}, {cell: {"e0": {"e1": 1}}}, over=over)


def monodromy_module(k: SimplicialSet, u: Mapping[str, object] | object, size: int | None = None) -> DgModule:
    """A local system in degree 0 given by invertible monodromy per nondegenerate edge.

    ``u`` maps edge ids to a scalar or a square matrix (list of rows); a bare
    scalar is used for every edge.  The edge letter acts by ``u - 1`` on
    column vectors: ``e_j.[edge] = sum_i (u - 1)_{ij} e_i``.
    """
    edges = k.generators(1)
    if not isinstance(u, Mapping):
        u = {e: u for e in edges}
    mats = {}
    for e in edges:
        x = u.get(e, 1)
        if not isinstance(x, (list, tuple)):
            x = [[x]]
        mats[e] = [list(r) for r in x]
    n = size or (len(next(iter(mats.values()))) if mats else 1)
    for e, m in mats.items():
        if len(m) != n or any(len(r) != n for r in m):
            raise ModuleError(f"monodromy for {e} is not {n}x{n}", e)
    gens = [f"v{i}" for i in range(n)] if n > 1 else ["1"]
    action = {}
    for e, m in mats.items():
        act = {}
        for j in range(n):
            col = {}
            for i in range(n):
                v = Fraction(m[i][j]) - (1 if i == j else 0)
                if v:
                    col[gens[i]] = v if v.denominator != 1 else int(v)
            if col:
                act[gens[j]] = col
        if act:
            action[e] = act
    return DgModule("monodromy", {g: 0 for g in gens}, {}, action, over=k.name)


# ---------------------------------------------------------------------------
# validation


def validate_module(m, a: CobarAlgebra, f: Field = RATIONALS, max_degree: int | None = None) -> dict:
    """Check ``d^2 = 0``, action degrees and the Leibniz rule on every (generator, letter) pair.

    Returns a small report dict; raises :class:`ModuleError` with a witness on failure.
    """
    if isinstance(m, FreeCobarModule):
        return {"module": m.name, "generators": None, "pairs": 0, "ok": True}
    lo, hi = m.degree_range
    letters = a.letters
    for c in m.action:
        if c not in letters:
            raise ModuleError(f"action on unknown letter {c!r}", c)
    for g in m.generators:
        for x in m.d(g):
            if x not in m.degrees:
                raise ModuleError("differential hits unknown generator", (g, x))
            if m.degree(x) != m.degree(g) - 1:
                raise ModuleError("differential has wrong degree", (g, x))
        if clean(_apply(m.d, m.d(g)), f):
            raise ModuleError("d^2 != 0", g)
    pairs = 0
    for g in m.generators:
        for c in letters:
            img = m.act_letter(g, c)
            for x in img:
                if x not in m.degrees:
                    raise ModuleError("action hits unknown generator", (g, c, x))
                if m.degree(x) != m.degree(g) + a.letter_degree(c):
                    raise ModuleError("action has wrong degree", (g, c, x))
            lhs = _apply(m.d, img)
            rhs = m.act_elem(m.d(g), (c,))
            s = _sign(m.degree(g))
            for w, v in a.d_letter(c).items():
                for x, u in m.act(g, w).items():
                    add_into(rhs, x, s * u * v)
            diff = dict(lhs)
            for k, v in rhs.items():
                add_into(diff, k, -v)
            if clean(diff, f):
                raise ModuleError("Leibniz rule fails", (g, c))
            pairs += 1
    return {"module": m.name, "generators": len(m.degrees), "pairs": pairs, "ok": True}


def _apply(fn, vec: Mapping) -> dict:
    out: dict = {}
    for k, v in vec.items():
        for x, u in fn(k).items():
            add_into(out, x, u * v)
    return out


# ---------------------------------------------------------------------------
# twisted tensor product


@dataclass
class TwistedComplex:
    """``(M (x) C, d (x) tau)`` on keys ``(m, c)``."""

    module: object
    coalgebra: ChainCoalgebra
    complex: BoundedComplex
    dropped: set

    @property
    def truncated(self) -> bool:
        return self.complex.truncated_above is not None

    def d(self, key) -> dict:
        return twisted_d(self.module, self.coalgebra, key)

    def homology(self, degrees: Iterable[int] | None = None):
        if degrees is None:
            degrees = [k for k in self.complex.degrees if self.complex.reliable(k)]
        return homology_ranks(self.complex, degrees)

    def comodule_check(self) -> bool:
        """``id (x) Delta`` intertwines the twisted differential with ``d (x) tau (x) 1 + 1 (x) 1 (x) d``."""
        M, C = self.module, self.coalgebra
        f = self.complex.field
        comod = _comod_factory(C)
        for deg, keys in self.complex.basis.items():
            for key in keys:
                m, c = key
                lhs = _apply(comod, self.d(key))
                rhs: dict = {}
                for (c1, c2), v in C.coproduct(c).items():
                    for (mm, cc), u in twisted_d(M, C, (m, c1)).items():
                        add_into(rhs, (mm, cc, c2), u * v)
                    s = _sign(M.degree(m) + C.degree(c1))
                    for c3, u in C.d(c2).items():
                        add_into(rhs, (m, c1, c3), s * u * v)
                diff = dict(lhs)
                for k, v in rhs.items():
                    add_into(diff, k, -v)
                if clean(diff, f):
                    return False
        return True


def _comod_factory(C):
    def comod(key):
        m, c = key
        return {(m, a, b): v for (a, b), v in C.coproduct(c).items()}
    return comod


def twisted_d(M, C: ChainCoalgebra, key) -> dict:
    m, c = key
    out: dict = {}
    for x, v in M.d(m).items():
        add_into(out, (x, c), v)
    s = _sign(M.degree(m))
    for x, v in C.d(c).items():
        add_into(out, (m, x), s * v)
    for (a, b), v in C.coproduct(c).items():
        if C.degree(a) == 0:
            continue
        for x, u in M.act_letter(m, a).items():
            add_into(out, (x, b), s * u * v)
    return out


def _module_degrees(M, top: int) -> range:
    if M.finite:
        lo, hi = M.degree_range
        return range(lo, hi + 1)
    return range(0, top + 1)


def twisted_complex(
    M, c: ChainCoalgebra, f: Field = RATIONALS, max_degree: int = 6, check: bool = True
) -> TwistedComplex:
    """Assemble ``(M (x) C, d (x) tau)``.

    For a finite module the whole complex is built.  For the free module it
    is built through ``max_degree + 1`` and the top degree is flagged.
    """
    over = getattr(M, "over", None)
    if over is not None and over != c.name:
        raise ModuleError(f"module is over {over!r}, coalgebra is {c.name!r}", over)
    if not c.connected:
        raise NotConnectedError(f"{c.name} must have exactly one vertex")
    truncated = None
    if M.finite:
        lo, hi = M.degree_range
        top = hi + c.max_degree
        degs = range(min(lo, 0), top + 1)
    else:
        top = max_degree + 1
        degs = range(0, top + 1)
        truncated = top
    basis: dict[int, list] = {}
    for n in degs:
        keys = []
        for k in range(0, c.max_degree + 1):
            for m in M.basis(n - k):
                for x in c.basis(k):
                    keys.append((m, x))
        basis[n] = keys
    cx, dropped = complex_from_operator(
        basis, lambda key: twisted_d(M, c, key), f, truncated, strict=False, check=check
    )
    if dropped and truncated is None:
        truncated = top
    return TwistedComplex(M, c, cx, dropped)


def colimit_complex(k: SimplicialSet, M, f: Field = RATIONALS, max_degree: int = 6):
    """The colimit model ``(M (x) C_*(K), d (x) tau)`` with its homology table."""
    if len(k.vertices()) != 1:
        raise NotConnectedError(f"{k.name} has {len(k.vertices())} vertices; a single base vertex is required")
    c = normalized_chains(k)
    tc = twisted_complex(M, c, f, max_degree)
    return tc, tc.homology()


# ---------------------------------------------------------------------------
# M (x) B(Omega C) with b_M


def bar_weight_basis(M, B: BarCoalgebra, weight_cap: int, max_degree: int | None = None) -> dict[int, list]:
    """Keys ``(m, beta)`` with total weight at most ``weight_cap``, grouped by degree."""
    out: dict[int, list] = {}
    top_bar = weight_cap  # a bar word has degree at most its weight
    mdeg = _module_degrees(M, weight_cap if max_degree is None else max_degree)
    for k in range(0, top_bar + 1):
        for beta in B.basis(k):
            wb = B.weight(beta)
            if wb > weight_cap:
                continue
            for j in mdeg:
                if max_degree is not None and j + k > max_degree:
                    continue
                for m in M.basis(j):
                    if wb + M.weight(m) <= weight_cap:
                        out.setdefault(j + k, []).append((m, beta))
    if not out:
        return {0: []}
    lo, hi = min(out), max(out)
    return {n: out.get(n, []) for n in range(min(lo, 0), hi + 1)}


def b_M(M, B: BarCoalgebra, key) -> dict:
    m, beta = key
    out: dict = {}
    for x, v in M.d(m).items():
        add_into(out, (x, beta), v)
    s = _sign(M.degree(m))
    for b2, v in B.d(beta).items():
        add_into(out, (m, b2), s * v)
    if beta:
        for x, v in M.act(m, beta[0]).items():
            add_into(out, (x, beta[1:]), s * v)
    return out


@dataclass
class BarModuleComplex:
    """``(M (x) B Omega C, b_M)`` restricted to total weight at most ``weight_cap``."""

    module: object
    coalgebra: ChainCoalgebra
    bar: BarCoalgebra
    weight_cap: int
    complex: BoundedComplex
    dropped: set

    def d(self, key) -> dict:
        return b_M(self.module, self.bar, key)

    def homology(self, degrees: Iterable[int] | None = None):
        if degrees is None:
            degrees = [k for k in self.complex.degrees if self.complex.reliable(k)]
        return homology_ranks(self.complex, degrees)


def bar_module_complex(
    M, c: ChainCoalgebra, weight_cap: int = 4, f: Field = RATIONALS, max_degree: int | None = None
) -> BarModuleComplex:
    """The weight window of ``M (x) B Omega C``; closed under ``b_M`` hence exact.

    With ``max_degree`` the window is further cut by total degree and the
    top degree is flagged unreliable.
    """
    A = M.algebra if isinstance(M, FreeCobarModule) else cobar(c, weight_cap + 1, weight_cap)
    B = bar(A, weight_cap, weight_cap)
    basis = bar_weight_basis(M, B, weight_cap, max_degree)
    truncated = max_degree if max_degree is not None else None
    cx, dropped = complex_from_operator(basis, lambda k: b_M(M, B, k), f, truncated, strict=False)
    if dropped and truncated is None:
        raise ModuleError("weight window is not closed under b_M", next(iter(dropped)))
    return BarModuleComplex(M, c, B, weight_cap, cx, dropped)


# ---------------------------------------------------------------------------
# hom complexes


@dataclass
class HomComplex:
    """Maps from a windowed source complex into ``N``, graded by map degree.

    Basis labels are pairs ``(x, n)``: the map sending source key ``x`` to
    target generator ``n`` and every other source key to zero.
    """

    variant: str
    source: dict[int, list]
    source_degree: Callable
    target: object
    complex: BoundedComplex
    dropped: set = field(default_factory=set)
    strict_maps: dict | None = None

    @property
    def field(self) -> Field:
        return self.complex.field

    def ranks(self) -> dict[int, int]:
        return {p: len(b) for p, b in self.complex.basis.items()}

    def delta(self, g: Mapping) -> dict:
        """``delta`` applied to a map stored as ``{(x, n): coeff}`` of one degree."""
        if not g:
            return {}
        p = self.map_degree(g)
        idx = self.complex.index(p)
        vec = {idx[k]: v for k, v in g.items()}
        out = self.complex.diff(p).apply(vec)
        labels = self.complex.basis.get(p - 1, [])
        return {labels[i]: v for i, v in out.items()}

    def map_degree(self, g: Mapping) -> int:
        ps = {self.label_degree(k) for k in g}
        if len(ps) != 1:
            raise ValueError("map is not homogeneous")
        return ps.pop()

    def label_degree(self, label) -> int:
        if self.variant == "strict":
            for p, keys in self.complex.basis.items():
                if label in self.complex.index(p):
                    return p
            raise KeyError(label)
        x, n = label
        return self.target.degree(n) - self.source_degree(x)

    def evaluate(self, g: Mapping, x) -> dict:
        out: dict = {}
        for (y, n), v in g.items():
            if y == x:
                add_into(out, n, v)
        return out


def _build_hom(
    variant: str,
    source: dict[int, list],
    source_degree: Callable,
    D: Callable,
    T: Callable,
    N,
    f: Field,
    degrees: Iterable[int] | None,
) -> HomComplex:
    keys = [x for ks in source.values() for x in ks]
    in_window = set(keys)
    revD: dict = {}
    revT: dict = {}
    for y in keys:
        for x, v in D(y).items():
            if x not in in_window:
                raise ModuleError("source window is not closed under the differential", (y, x))
            revD.setdefault(x, []).append((y, v))
        for x, a, v in T(y):
            if x not in in_window:
                raise ModuleError("source window is not closed under the twist", (y, x))
            revT.setdefault(x, []).append((y, a, v))
    sdeg = {x: source_degree(x) for x in keys}
    if N.finite:
        nlo, nhi = N.degree_range
    else:
        nlo, nhi = 0, max(sdeg.values(), default=0) + 8
    slo, shi = min(sdeg.values(), default=0), max(sdeg.values(), default=0)
    if degrees is None:
        degrees = range(nlo - shi, nhi - slo + 1)
    degrees = list(degrees)
    span = range(min(degrees) - 1, max(degrees) + 1)
    basis: dict[int, list] = {}
    for p in span:
        labels = []
        for x in keys:
            for n in N.basis(sdeg[x] + p):
                labels.append((x, n))
        basis[p] = labels

    def delta(label):
        x, n = label
        p = N.degree(n) - sdeg[x]
        s = _sign(p)
        out: dict = {}
        for n2, v in N.d(n).items():
            add_into(out, (x, n2), v)
        for y, v in revD.get(x, ()):
            add_into(out, (y, n), -s * v)
        for y, a, v in revT.get(x, ()):
            for n2, u in N.act(n, a).items():
                add_into(out, (y, n2), s * v * u)
        return out

    cx, dropped = complex_from_operator(basis, delta, f, strict=False)
    return HomComplex(variant, source, source_degree, N, cx, dropped)


def tau_source(M, c: ChainCoalgebra, weight_cap: int) -> dict[int, list]:
    out: dict[int, list] = {}
    for k in range(0, min(weight_cap, c.max_degree) + 1):
        for x in c.basis(k):
            for j in _module_degrees(M, weight_cap):
                for m in M.basis(j):
                    if M.weight(m) + k <= weight_cap:
                        out.setdefault(j + k, []).append((m, x))
    return out


def tau_twist(M, c: ChainCoalgebra, key):
    """Right-action terms of the tau hom differential: ``(source key, word, sign)``."""
    m, x = key
    out = []
    for (a, b), v in c.coproduct(x).items():
        if c.degree(b) == 0:
            continue
        out.append(((m, a), (b,), _sign(M.degree(m) + c.degree(a)) * v))
    return out


def hom_tau(M, N, c: ChainCoalgebra, weight_cap: int = 4, f: Field = RATIONALS, degrees=None) -> HomComplex:
    """Comodule maps ``M (x) C -> N (x) C`` through their components ``M (x) C -> N``."""
    source = tau_source(M, c, weight_cap)
    hc = _build_hom(
        "tau",
        source,
        lambda k: M.degree(k[0]) + c.degree(k[1]),
        lambda k: twisted_d(M, c, k),
        lambda k: tau_twist(M, c, k),
        N,
        f,
        degrees,
    )
    hc.coalgebra = c
    hc.module = M
    hc.weight_cap = weight_cap
    return hc


def infty_twist(M, B: BarCoalgebra, key):
    m, beta = key
    if not beta:
        return []
    e = M.degree(m) + sum(B.algebra.degree(a) + 1 for a in beta[:-1])
    return [((m, beta[:-1]), beta[-1], _sign(e))]


def hom_infty(M, N, c: ChainCoalgebra, weight_cap: int = 4, f: Field = RATIONALS, degrees=None) -> HomComplex:
    """``A_infinity`` module maps: components ``M (x) B Omega C -> N`` on a weight window."""
    A = M.algebra if isinstance(M, FreeCobarModule) else cobar(c, weight_cap + 1, weight_cap)
    B = bar(A, weight_cap, weight_cap)
    source = bar_weight_basis(M, B, weight_cap)
    source = {k: v for k, v in source.items() if v}
    hc = _build_hom(
        "infty",
        source,
        lambda k: M.degree(k[0]) + B.degree(k[1]),
        lambda k: b_M(M, B, k),
        lambda k: infty_twist(M, B, k),
        N,
        f,
        degrees,
    )
    hc.bar = B
    hc.coalgebra = c
    hc.module = M
    hc.weight_cap = weight_cap
    return hc


def strict_constraints(M, N, a: CobarAlgebra, p: int) -> tuple[list, SparseMatrix]:
    """Linear conditions ``f(m.[c]) = f(m).[c]`` on degree ``p`` maps of finite modules."""
    labels = [(m, n) for m in M.generators for n in N.basis(M.degree(m) + p)]
    idx = {k: i for i, k in enumerate(labels)}
    rows: dict = {}
    ent: dict = {}
    for m in M.generators:
        for c in a.letters:
            # coefficient of each target generator in f(m.c) - f(m).c
            for x, v in M.act_letter(m, c).items():
                for n in N.basis(M.degree(x) + p):
                    r = rows.setdefault((m, c, n), len(rows))
                    add_into(ent, (r, idx[(x, n)]), v)
            for n in N.basis(M.degree(m) + p):
                for n2, v in N.act_letter(n, c).items():
                    r = rows.setdefault((m, c, n2), len(rows))
                    add_into(ent, (r, idx[(m, n)]), -v)
    return labels, SparseMatrix(len(rows), len(labels), ent)


def hom_strict(M, N, a: CobarAlgebra, f: Field = RATIONALS, degrees=None) -> HomComplex:
    """Strict module maps ``M -> N`` with ``delta f = d f - (-1)^{|f|} f d``.

    Basis labels are ``("f", p, i)``; ``strict_maps[label]`` holds the map as
    ``{(m, n): coeff}``.
    """
    from .linalg import kernel_basis, solve

    mlo, mhi = M.degree_range
    nlo, nhi = N.degree_range
    if degrees is None:
        degrees = range(nlo - mhi, nhi - mlo + 1)
    degrees = list(degrees)
    span = range(min(degrees) - 1, max(degrees) + 1)
    maps: dict = {}
    basis: dict[int, list] = {}
    coords: dict[int, tuple] = {}
    for p in span:
        labels, K = strict_constraints(M, N, a, p)
        K = SparseMatrix(K.rows, K.cols, K.entries, f)
        ker = kernel_basis(K) if labels else []
        basis[p] = []
        for i, v in enumerate(ker):
            lab = ("f", p, i)
            basis[p].append(lab)
            maps[lab] = {labels[j]: c for j, c in v.items()}
        cols = [{j: c for j, c in v.items()} for v in ker]
        coords[p] = (labels, SparseMatrix.from_columns(cols, len(labels), f))

    def delta_map(g: Mapping, p: int) -> dict:
        s = _sign(p)
        out: dict = {}
        for (m, n), v in g.items():
            for n2, u in N.d(n).items():
                add_into(out, (m, n2), u * v)
        for m in M.generators:
            for x, u in M.d(m).items():
                for (y, n), v in g.items():
                    if y == x:
                        add_into(out, (m, n), -s * u * v)
        return out

    mats = {}
    for p in span:
        if p - 1 not in basis:
            continue
        tl, tm = coords[p - 1]
        tidx = {k: i for i, k in enumerate(tl)}
        cols = []
        for lab in basis[p]:
            img = delta_map(maps[lab], p)
            vec = {tidx[k]: v for k, v in img.items() if f(v)}
            sol = solve(tm, vec) if vec else {}
            if sol is None:
                raise ModuleError("delta leaves the strict subcomplex", lab)
            cols.append(sol)
        mats[p] = SparseMatrix.from_columns(cols, len(basis[p - 1]), f)
    cx = BoundedComplex(basis, mats, f)
    hc = HomComplex("strict", {}, lambda k: 0, N, cx, set(), maps)
    hc.module = M
    hc.delta_map = delta_map
    return hc


def is_strict_map(M, N, a: CobarAlgebra, g: Mapping, f: Field = RATIONALS) -> bool:
    for m in M.generators:
        for c in a.letters:
            lhs: dict = {}
            for x, v in M.act_letter(m, c).items():
                for (y, n), u in g.items():
                    if y == x:
                        add_into(lhs, n, u * v)
            rhs: dict = {}
            for (y, n), u in g.items():
                if y == m:
                    for n2, w in N.act_letter(n, c).items():
                        add_into(rhs, n2, u * w)
            for k, v in rhs.items():
                add_into(lhs, k, -v)
            if clean(lhs, f):
                return False
    return True


def embed_strict(g: Mapping, M, N, a: CobarAlgebra | None = None, f: Field = RATIONALS) -> dict:
    """``iota``: a strict map ``{(m, n): c}`` as an infinity morphism, supported on the empty bar word."""
    if a is not None and not is_strict_map(M, N, a, g, f):
        raise ModuleError("map does not commute with the action", next(iter(g), None))
    return {((m, ()), n): v for (m, n), v in g.items()}


def compose_infty(g: Mapping, f_: Mapping, M, N) -> dict:
    """``(g o f)(m (x) beta) = sum g(f(m (x) beta') (x) beta'')`` over deconcatenations."""
    by_src: dict = {}
    for ((n, beta), p), v in g.items():
        by_src.setdefault(n, []).append((beta, p, v))
    out: dict = {}
    for ((m, beta), n), v in f_.items():
        for beta2, p, u in by_src.get(n, ()):
            add_into(out, ((m, beta + beta2), p), u * v)
    return out
