"""The bundled invariant suite and its report.

Every check is a pure function of the run configuration; randomized checks
draw from ``random.Random(seed)`` so a report is reproducible from its seed.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Mapping

from . import fixtures
from .dgalg import NotConnectedError, bar, check_conilpotent, cobar, rho
from .dgmod import (
    DgModule,
    FreeCobarModule,
    ModuleError,
    bar_module_complex,
    clean,
    embed_strict,
    hom_infty,
    hom_strict,
    hom_tau,
    hopf_module,
    monodromy_module,
    trivial_module,
    twisted_complex,
    validate_module,
)
from .equiv import (
    F_map,
    G_map,
    h_tilde,
    nilpotency_index,
    phi_M,
    section,
    word_length,
)
from .linalg import (
    RATIONALS,
    Field,
    SparseMatrix,
    add_into,
    homology_ranks,
    kernel_basis,
    matrix_of,
    rank,
    solve,
)
from .necklace import (
    Necklaces,
    aw_lambda,
    lambda_hom,
    mc_defect,
    phi_inverse,
    phi_iso,
    tensor_d,
)
from .oracle import group_homology_oracle_Z
from .serialize import emit_module, emit_simplicial, parse_module, parse_simplicial
from .simplicial import ChainCoalgebra, SimplicialError, delta, normalized_chains, product

__all__ = [
    "CheckFailure",
    "CheckResult",
    "Report",
    "SuiteConfig",
    "CHECKS",
    "run_suite",
    "run_check",
    "Check",
    "DEFAULT_SEED",
    "module_cases",
    "hom_pairs",
]

DEFAULT_SEED = 20240601


class CheckFailure(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class CheckResult:
    name: str
    target: str
    status: str
    witness: str | None = None
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0


@dataclass
class Report:
    command: str
    field: str
    seed: int
    max_degree: int
    word_cap: int
    checks: list[CheckResult] = field(default_factory=list)
    tables: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "field": self.field,
            "seed": self.seed,
            "max_degree": self.max_degree,
            "word_cap": self.word_cap,
            "ok": self.ok,
            "checks": [
                {k: v for k, v in asdict(c).items() if k != "seconds"} for c in self.checks
            ],
            "tables": self.tables,
        }


@dataclass(frozen=True)
class SuiteConfig:
    field: Field = RATIONALS
    max_degree: int = 6
    word_cap: int = 8
    seed: int = DEFAULT_SEED
    samples: int = 100
    morphisms: int = 50


# ---------------------------------------------------------------------------
# helpers


def _sign(n: int) -> int:
    return -1 if n & 1 else 1


def _apply(fn, vec: Mapping) -> dict:
    out: dict = {}
    for k, v in vec.items():
        for x, u in fn(k).items():
            add_into(out, x, u * v)
    return out


def _diff(a: Mapping, b: Mapping, f: Field) -> dict:
    out = dict(a)
    for k, v in b.items():
        add_into(out, k, -v)
    return clean(out, f)


def _d_squared(keys: Iterable, d: Callable, f: Field) -> int:
    n = 0
    for k in keys:
        if clean(_apply(d, d(k)), f):
            raise CheckFailure("d^2 != 0", k)
        n += 1
    return n


def _one_vertex(k) -> bool:
    return len(k.vertices()) == 1


def _chains(name: str) -> ChainCoalgebra:
    return normalized_chains(fixtures.space(name))


# weight windows (total simplex dimension of all letters) per coalgebra
WINDOWS = {"circle": 6, "sphere_min2": 10, "sphere_min3": 12, "pinched": 5, "wedge(circle,circle)": 4}


def module_cases(max_degree: int = 6, word_cap: int = 8) -> list[tuple[str, object, ChainCoalgebra]]:
    """``(label, module, coalgebra)`` for every registry module instantiation."""
    out = []
    for name in fixtures.one_vertex_spaces():
        k = fixtures.space(name)
        c = normalized_chains(k)
        out.append((f"trivial/{name}", trivial_module(k.name), c))
    s2 = _chains("sphere_min2")
    out.append(("hopf/sphere_min2", hopf_module(), s2))
    circ = _chains("circle")
    for u in (1, 2, 3, -1):
        out.append((f"monodromy(u={u})/circle", monodromy_module(circ.sset, u), circ))
    w = _chains("wedge")
    e1, e2 = w.sset.generators(1)
    out.append(("monodromy(2x2)/wedge", monodromy_module(w.sset, {e1: [[1, 1], [0, 1]], e2: [[2, 0], [1, 1]]}), w))
    for name in ("circle", "sphere_min2", "sphere_min3", "pinched"):
        c = _chains(name)
        out.append((f"free/{name}", FreeCobarModule(cobar(c, max_degree + 2, word_cap)), c))
    return out


def _free(c: ChainCoalgebra) -> FreeCobarModule:
    w = WINDOWS[c.name]
    return FreeCobarModule(cobar(c, w + 2, w + 1))


def hom_pairs() -> list[tuple[str, object, object, ChainCoalgebra, int]]:
    """``(label, M, N, C, W)`` module pairs for the hom-complex checks."""
    s2 = _chains("sphere_min2")
    t, h = trivial_module("sphere_min2"), hopf_module()
    circ = _chains("circle")
    u2 = monodromy_module(circ.sset, 2)
    u3 = monodromy_module(circ.sset, -1)
    pin = _chains("pinched")
    tp = trivial_module("pinched")
    s3 = _chains("sphere_min3")
    w2 = WINDOWS["sphere_min2"]
    return [
        ("hopf->hopf/sphere_min2", h, h, s2, w2),
        ("trivial->hopf/sphere_min2", t, h, s2, w2),
        ("hopf->trivial/sphere_min2", h, t, s2, w2),
        ("trivial->trivial/sphere_min2", t, t, s2, w2),
        ("free->hopf/sphere_min2", _free(s2), h, s2, w2),
        ("u=2->u=-1/circle", u2, u3, circ, WINDOWS["circle"]),
        ("u=2->u=2/circle", u2, u2, circ, WINDOWS["circle"]),
        ("free->u=2/circle", _free(circ), u2, circ, WINDOWS["circle"]),
        ("trivial->trivial/pinched", tp, tp, pin, WINDOWS["pinched"]),
        ("free->trivial/pinched", _free(pin), tp, pin, WINDOWS["pinched"]),
        ("free->trivial/sphere_min3", _free(s3), trivial_module("sphere_min3"), s3, WINDOWS["sphere_min3"]),
    ]


# ---------------------------------------------------------------------------
# linalg


def check_rank_nullity(cfg: SuiteConfig, rng: random.Random) -> dict:
    f = cfg.field
    for trial in range(25):
        r, c = rng.randint(1, 6), rng.randint(1, 7)
        dense = [[rng.choice([0, 0, 0, 1, -1, 2, -3]) for _ in range(c)] for _ in range(r)]
        m = SparseMatrix.from_dense(dense, f)
        ker = kernel_basis(m)
        if rank(m) + len(ker) != c:
            raise CheckFailure("rank + nullity != columns", dense)
        for v in ker:
            if clean(m.apply(v), f):
                raise CheckFailure("kernel vector not annihilated", dense)
        x = {j: f(rng.randint(-2, 2)) for j in range(c)}
        b = m.apply(x)
        sol = solve(m, b)
        if sol is None or clean(_diff(m.apply(sol), b, f), f):
            raise CheckFailure("solve failed on a consistent system", dense)
    return {"matrices": 25}


def check_euler(cfg: SuiteConfig, name: str) -> dict:
    from .linalg import complex_from_operator

    c = _chains(name)
    basis = {n: c.basis(n) for n in range(0, c.max_degree + 1)}
    cx, _ = complex_from_operator(basis, c.d, cfg.field)
    h = homology_ranks(cx)
    chi_c = sum(_sign(n) * len(b) for n, b in basis.items())
    chi_h = sum(_sign(n) * r for n, r, _ in h)
    if chi_c != chi_h:
        raise CheckFailure("Euler characteristics differ", (chi_c, chi_h))
    return {"homology": [r for _, r, _ in h]}


# ---------------------------------------------------------------------------
# simplicial


def check_face_identities(cfg: SuiteConfig, name: str) -> dict:
    k = fixtures.space(name)
    try:
        k.validate()
    except SimplicialError as e:
        raise CheckFailure(str(e), name) from None
    return {"counts": k.counts()}


def check_chain_d_squared(cfg: SuiteConfig, name: str) -> dict:
    c = _chains(name)
    return {"generators": _d_squared(c.sset.generators(), c.d, cfg.field)}


def check_coassociative(cfg: SuiteConfig, name: str) -> dict:
    c = _chains(name)
    f = cfg.field
    for g in c.sset.generators():
        lhs: dict = {}
        rhs: dict = {}
        for (a, b), v in c.coproduct(g).items():
            for (a1, a2), u in c.coproduct(a).items():
                add_into(lhs, (a1, a2, b), u * v)
            for (b1, b2), u in c.coproduct(b).items():
                add_into(rhs, (a, b1, b2), u * v)
        if _diff(lhs, rhs, f):
            raise CheckFailure("coproduct is not coassociative", g)
    return {}


def check_counit(cfg: SuiteConfig, name: str) -> dict:
    c = _chains(name)
    f = cfg.field
    for g in c.sset.generators():
        left: dict = {}
        right: dict = {}
        for (a, b), v in c.coproduct(g).items():
            add_into(left, b, c.counit(a) * v)
            add_into(right, a, c.counit(b) * v)
        if _diff(left, {g: 1}, f) or _diff(right, {g: 1}, f):
            raise CheckFailure("counit law fails", g)
    return {}


def check_coproduct_chain_map(cfg: SuiteConfig, name: str) -> dict:
    c = _chains(name)
    f = cfg.field
    for g in c.sset.generators():
        lhs: dict = {}
        for x, v in c.d(g).items():
            for t, u in c.coproduct(x).items():
                add_into(lhs, t, u * v)
        rhs: dict = {}
        for (a, b), v in c.coproduct(g).items():
            for x, u in c.d(a).items():
                add_into(rhs, (x, b), u * v)
            for y, u in c.d(b).items():
                add_into(rhs, (a, y), _sign(c.degree(a)) * u * v)
        if _diff(lhs, rhs, f):
            raise CheckFailure("Delta d != (d (x) 1 + 1 (x) d) Delta", g)
    return {}


# ---------------------------------------------------------------------------
# dgalg


def _need_one_vertex(name: str):
    k = fixtures.space(name)
    if not _one_vertex(k):
        return None
    return normalized_chains(k)


def check_cobar(cfg: SuiteConfig, name: str, rng: random.Random) -> dict:
    c = _need_one_vertex(name)
    if c is None:
        return {"skip": "cobar needs a single vertex"}
    a = cobar(c, cfg.max_degree, cfg.word_cap)
    f = cfg.field
    keys = [w for n in range(cfg.max_degree + 1) for w in a.basis(n)]
    n = _d_squared(keys, a.d, f)
    small = [w for w in keys if len(w) <= 3 and a.degree(w) <= 3]
    pairs = list(itertools.product(small, small))
    if len(pairs) > 400:
        pairs = rng.sample(pairs, 400)
    for u, v in pairs:
        lhs = a.d(u + v)
        rhs = a.mul_elem(a.d(u), {v: 1})
        for x, t in a.mul_elem({u: 1}, a.d(v)).items():
            add_into(rhs, x, _sign(a.degree(u)) * t)
        if _diff(lhs, rhs, f):
            raise CheckFailure("cobar d is not a derivation", (u, v))
    return {"words": n, "leibniz_pairs": len(pairs)}


def check_bar(cfg: SuiteConfig, name: str) -> dict:
    c = _need_one_vertex(name)
    if c is None:
        return {"skip": "cobar needs a single vertex"}
    w = WINDOWS.get(c.name, cfg.max_degree)
    top = cfg.max_degree
    b = bar(cobar(c, top + 1, w), top, w)
    f = cfg.field
    keys = [beta for n in range(top + 1) for beta in b.basis(n)]
    _d_squared(keys, b.d, f)
    for beta in keys:
        lhs = _apply(b.coproduct, b.d(beta))
        rhs: dict = {}
        for (x, y), v in b.coproduct(beta).items():
            for x2, u in b.d(x).items():
                add_into(rhs, (x2, y), u * v)
            for y2, u in b.d(y).items():
                add_into(rhs, (x, y2), _sign(b.degree(x)) * u * v)
        if _diff(lhs, rhs, f):
            raise CheckFailure("bar d is not a coderivation", beta)
        left: dict = {}
        right: dict = {}
        for (x, y), v in b.coproduct(beta).items():
            for (x1, x2), u in b.coproduct(x).items():
                add_into(left, (x1, x2, y), u * v)
            for (y1, y2), u in b.coproduct(y).items():
                add_into(right, (x, y1, y2), u * v)
        if _diff(left, right, f):
            raise CheckFailure("bar coproduct is not coassociative", beta)
    return {"words": len(keys)}


def check_rho(cfg: SuiteConfig, name: str) -> dict:
    c = _need_one_vertex(name)
    if c is None:
        return {"skip": "rho needs a single vertex"}
    f = cfg.field
    nil = check_conilpotent(c)
    if any(v is None for v in nil.values()):
        raise CheckFailure("coalgebra is not conilpotent within the bound", nil)
    w = c.max_degree + 1
    b = bar(cobar(c, w + 1, w), w + 1, w)
    for x in c.sset.generators():
        lhs = b.d_elem(rho(c, x))
        rhs = rho(c, c.d(x))
        if _diff(lhs, rhs, f):
            raise CheckFailure("rho is not a chain map", x)
        left = _apply(b.coproduct, rho(c, x))
        right: dict = {}
        for (y, z), v in c.coproduct(x).items():
            for by, u in rho(c, y).items():
                for bz, t in rho(c, z).items():
                    add_into(right, (by, bz), u * t * v)
        if _diff(left, right, f):
            raise CheckFailure("rho is not a coalgebra map", x)
    return {"conilpotency": nil}


# ---------------------------------------------------------------------------
# dgmod


def _module_case(label: str, cfg: SuiteConfig):
    for lab, m, c in module_cases(cfg.max_degree, cfg.word_cap):
        if lab == label:
            return m, c
    raise KeyError(label)


def check_module_laws(cfg: SuiteConfig, label: str) -> dict:
    m, c = _module_case(label, cfg)
    a = m.algebra if isinstance(m, FreeCobarModule) else cobar(c, cfg.max_degree, cfg.word_cap)
    try:
        return validate_module(m, a, cfg.field)
    except ModuleError as e:
        raise CheckFailure(str(e), e.witness) from None


def check_twisted(cfg: SuiteConfig, label: str) -> dict:
    m, c = _module_case(label, cfg)
    f = cfg.field
    tc = twisted_complex(m, c, f, cfg.max_degree, check=False)
    keys = [k for ks in tc.complex.basis.values() for k in ks]
    if m.finite:
        _d_squared(keys, tc.d, f)
        if not tc.comodule_check():
            raise CheckFailure("id (x) Delta does not intertwine the differentials", label)
    else:
        # the free module is infinite; d^2 is checked on the stored keys
        _d_squared(keys, tc.d, f)
    return {"homology": [[d, r, ok] for d, r, ok in tc.homology()]}


def check_bar_module(cfg: SuiteConfig, label: str) -> dict:
    m, c = _module_case(label, cfg)
    bc = bar_module_complex(m, c, WINDOWS[c.name], cfg.field)
    keys = [k for ks in bc.complex.basis.values() for k in ks]
    _d_squared(keys, bc.d, cfg.field)
    return {"keys": len(keys)}


def _hom_d_squared(hc) -> int:
    cx = hc.complex
    if hc.dropped:
        raise CheckFailure("delta leaves the hom window", next(iter(hc.dropped)))
    for p in cx.degrees:
        if p - 1 in cx.basis and not (cx.diff(p - 1) @ cx.diff(p)).is_zero():
            raise CheckFailure("delta^2 != 0", p)
    return sum(len(b) for b in cx.basis.values())


def check_hom(cfg: SuiteConfig, label: str, variant: str) -> dict:
    pair = {lab: (m, n, c, w) for lab, m, n, c, w in hom_pairs()}[label]
    m, n, c, w = pair
    f = cfg.field
    try:
        if variant == "tau":
            hc = hom_tau(m, n, c, w, f)
        elif variant == "infty":
            hc = hom_infty(m, n, c, w, f)
        else:
            if not m.finite:
                return {"skip": "strict maps are enumerated for finite modules only"}
            hc = hom_strict(m, n, cobar(c, cfg.max_degree, cfg.word_cap), f)
    except ValueError as e:
        raise CheckFailure(str(e), label) from None
    out = {"labels": _hom_d_squared(hc)}
    if variant == "strict":
        out["iota"] = _check_iota(hc, m, n, c, w, f)
    return out


def _check_iota(hs, m, n, c, w, f: Field) -> int:
    """``delta(iota g) = iota(delta g)`` for every strict basis map ``g``."""
    hi = hom_infty(m, n, c, w, f)
    count = 0
    for p, labels in hs.complex.basis.items():
        if p - 1 not in hs.complex.basis:
            continue
        for lab in labels:
            g = hs.strict_maps[lab]
            lhs = hi.delta(embed_strict(g, m, n))
            rhs = embed_strict(clean(hs.delta_map(g, p), f), m, n)
            if _diff(lhs, rhs, f):
                raise CheckFailure("iota does not commute with delta", lab)
            count += 1
    return count


# ---------------------------------------------------------------------------
# lambda


def check_lambda_d_squared(cfg: SuiteConfig, name: str) -> dict:
    k = fixtures.space(name)
    nk = Necklaces(k)
    f = cfg.field
    top = cfg.max_degree
    n = 0
    for x in k.vertices():
        for y in k.vertices():
            for d in range(top + 1):
                n += _d_squared(nk.basis(x, y, d, cfg.word_cap), nk.d, f)
    return {"monomials": n}


def check_rank_law(cfg: SuiteConfig) -> dict:
    from math import comb

    out = {}
    for n in range(1, 5):
        lh = lambda_hom(delta(n), "0", str(n), max_degree=n, f=cfg.field)
        want = [comb(n - 1, d) * 2 ** (n - 1 - d) for d in range(n)] + [0]
        got = lh.ranks()
        if got != want:
            raise CheckFailure("rank law fails", (n, got, want))
        h = [r for _, r, _ in lh.homology()]
        if h != [1] + [0] * n:
            raise CheckFailure("homology is not k in degree 0", (n, h))
        out[f"delta{n}"] = got[:-1]
    return out


def check_cobar_iso(cfg: SuiteConfig, name: str, rng: random.Random) -> dict:
    k = fixtures.space(name)
    c = normalized_chains(k)
    f = cfg.field
    top = min(4, cfg.max_degree)
    a = cobar(c, top, cfg.word_cap)
    nk = Necklaces(k)
    x = k.vertices()[0]
    sizes = []
    words = []
    for d in range(top + 1):
        cb = a.basis(d)
        lb = nk.basis(x, x, d, cfg.word_cap)
        m = matrix_of(lambda w: phi_iso(nk, w), cb, lb, f)
        if len(cb) != len(lb) or rank(m) != len(cb):
            raise CheckFailure("phi is not a basis bijection", d)
        for w in cb:
            if _diff(phi_iso(nk, a.d(w)), nk.d_elem(phi_iso(nk, w)), f):
                raise CheckFailure("phi is not a chain map", w)
            if _diff(phi_inverse(nk, phi_iso(nk, w)), {w: 1}, f):
                raise CheckFailure("phi_inverse o phi != id", w)
        sizes.append(len(cb))
        words.extend(w for w in cb if len(w) <= 3)
    pairs = list(itertools.product(words, words))
    if len(pairs) > 300:
        pairs = rng.sample(pairs, 300)
    for u, v in pairs:
        if _diff(phi_iso(nk, u + v), nk.compose_elem(phi_iso(nk, u), phi_iso(nk, v)), f):
            raise CheckFailure("phi is not multiplicative", (u, v))
    return {"ranks": sizes}


def check_baues(cfg: SuiteConfig, name: str) -> dict:
    k = fixtures.space(name)
    nk = Necklaces(k)
    f = cfg.field
    n = 0
    for x in k.vertices():
        for y in k.vertices():
            for d in range(4):
                for key in nk.basis(x, y, d, 3):
                    aw = aw_lambda(nk, key)
                    if _diff(tensor_d(nk, aw), _apply(lambda t: aw_lambda(nk, t), nk.d(key)), f):
                        raise CheckFailure("AW_Lambda is not a chain map", key)
                    left: dict = {}
                    right: dict = {}
                    for (a, b), v in aw.items():
                        for (a1, a2), u in aw_lambda(nk, a).items():
                            add_into(left, (a1, a2, b), u * v)
                        for (b1, b2), u in aw_lambda(nk, b).items():
                            add_into(right, (a, b1, b2), u * v)
                    if _diff(left, right, f):
                        raise CheckFailure("AW_Lambda is not coassociative", key)
                    n += 1
    return {"monomials": n}


def check_ez(cfg: SuiteConfig, pair: tuple[int, int]) -> dict:
    s, l = delta(pair[0]), delta(pair[1])
    p = product(s, l)
    ns = Necklaces(s)
    f = cfg.field
    n = 0
    for x in s.vertices():
        for y in s.vertices():
            for d in range(3):
                for t in ns.basis(x, y, d):
                    if ns.degree(t) > 2:
                        continue
                    for g in l.generators():
                        if l.dims[g] > 2:
                            continue
                        if clean(mc_defect(p, t, g, x), f):
                            raise CheckFailure("Maurer-Cartan identity fails", (t, g))
                        n += 1
    return {"pairs": n}


# ---------------------------------------------------------------------------
# equiv


def equiv_cases() -> list[tuple[str, object, ChainCoalgebra, int]]:
    s2 = _chains("sphere_min2")
    s3 = _chains("sphere_min3")
    pin = _chains("pinched")
    circ = _chains("circle")
    return [
        ("trivial/sphere_min2", trivial_module("sphere_min2"), s2, WINDOWS["sphere_min2"]),
        ("hopf/sphere_min2", hopf_module(), s2, WINDOWS["sphere_min2"]),
        ("free/sphere_min2", _free(s2), s2, WINDOWS["sphere_min2"]),
        ("trivial/sphere_min3", trivial_module("sphere_min3"), s3, WINDOWS["sphere_min3"]),
        ("free/sphere_min3", _free(s3), s3, WINDOWS["sphere_min3"]),
        ("trivial/pinched", trivial_module("pinched"), pin, WINDOWS["pinched"]),
        ("free/pinched", _free(pin), pin, WINDOWS["pinched"]),
        ("monodromy(u=2)/circle", monodromy_module(circ.sset, 2), circ, WINDOWS["circle"]),
        ("free/circle", _free(circ), circ, WINDOWS["circle"]),
    ]


def check_phi_M(cfg: SuiteConfig, label: str) -> dict:
    m, c, w = next((m, c, w) for lab, m, c, w in equiv_cases() if lab == label)
    f = cfg.field
    phi, bc, tw = phi_M(m, c, w, f)
    if not phi.is_chain_map():
        raise CheckFailure("phi_M is not a chain map", label)
    sec, _, _ = section(m, c, w, f)
    if not sec.is_chain_map():
        raise CheckFailure("id (x) rho is not a chain map", label)
    comp = phi @ sec
    for d, mat in comp.matrices.items():
        if mat != SparseMatrix.identity(tw.complex.dim(d), f):
            raise CheckFailure("phi_M o (id (x) rho) != id", d)
    degs = [d for d in tw.complex.degrees if d in bc.complex.basis]
    maps = phi.homology_maps(degs)
    bad = [hm.degree for hm in maps if hm.reliable and not hm.is_iso]
    if bad:
        raise CheckFailure("phi_M is not a homology isomorphism", bad)
    return {"homology": [[hm.degree, hm.source_rank] for hm in maps]}


def sample_kernel(label: str, cfg: SuiteConfig, count: int, rng: random.Random):
    """Random elements of ``ker phi_M`` on the weight window, with the bar complex."""
    m, c, w = next((m, c, w) for lab, m, c, w in equiv_cases() if lab == label)
    f = cfg.field
    phi, bc, _ = phi_M(m, c, w, f)
    pools = []
    for d, mat in phi.matrices.items():
        ker = kernel_basis(mat)
        if ker:
            pools.append((bc.complex.basis[d], ker))
    out = []
    if not pools:
        return bc, out
    for _ in range(20 * count):
        if len(out) >= count:
            break
        keys, ker = rng.choice(pools)
        picks = rng.sample(ker, min(len(ker), rng.randint(1, 3)))
        x: dict = {}
        for v in picks:
            cc = rng.choice([1, -1, 2, 3])
            for i, t in v.items():
                add_into(x, keys[i], cc * t)
        x = clean(x, f)
        if x:
            out.append(x)
    return bc, out


def check_nilpotency(cfg: SuiteConfig, rng: random.Random) -> dict:
    labels = [lab for lab, *_ in equiv_cases()]
    per = -(-cfg.samples // len(labels))
    n = 0
    worst = 0
    for lab in labels:
        bc, xs = sample_kernel(lab, cfg, per, rng)
        for x in xs:
            if n >= cfg.samples:
                break
            k = nilpotency_index(bc, x, None, cfg.field)
            if k is None:
                raise CheckFailure("(b h + h b - id)^n x != 0 within the word length", (lab, word_length(x)))
            worst = max(worst, k)
            n += 1
    if n < cfg.samples:
        raise CheckFailure("too few kernel samples", n)
    return {"samples": n, "max_index": worst}


def random_morphism(hc, rng: random.Random, f: Field) -> dict:
    degs = [p for p, b in hc.complex.basis.items() if b]
    p = rng.choice(degs)
    labels = hc.complex.basis[p]
    picks = rng.sample(labels, min(len(labels), rng.randint(1, 4)))
    return clean({lab: rng.choice([1, -1, 2, -2, 3]) for lab in picks}, f)


def check_F_G(cfg: SuiteConfig, label: str, rng: random.Random) -> dict:
    m, n, c, w = {lab: (m, n, c, w) for lab, m, n, c, w in hom_pairs()}[label]
    f = cfg.field
    ht = hom_tau(m, n, c, w, f)
    hi = hom_infty(m, n, c, w, f)
    for trial in range(cfg.morphisms):
        g = random_morphism(ht, rng, f)
        gg = G_map(g, hi)
        if _diff(F_map(gg, ht), g, f):
            raise CheckFailure("F o G != id", (trial, sorted(map(repr, g))[:2]))
        if _diff(hi.delta(gg) if gg else {}, G_map(ht.delta(g), hi), f):
            raise CheckFailure("G does not commute with delta", trial)
        k = random_morphism(hi, rng, f)
        fk = F_map(k, ht)
        if _diff(ht.delta(fk) if fk else {}, F_map(hi.delta(k), ht), f):
            raise CheckFailure("F does not commute with delta", trial)
        h_tilde(k, hi)
    return {"morphisms": cfg.morphisms}


# ---------------------------------------------------------------------------
# app-level values


def check_oracle(cfg: SuiteConfig) -> dict:
    out = {}
    circ = fixtures.space("circle")
    c = normalized_chains(circ)
    for u in (1, 2, 3, -1):
        if cfg.field.p and u % cfg.field.p == 0:
            continue
        tc = twisted_complex(monodromy_module(circ, u), c, cfg.field)
        got = [r for _, r, _ in tc.homology([0, 1])]
        want = group_homology_oracle_Z(u, cfg.field)
        if got != want:
            raise CheckFailure("twisted homology disagrees with the oracle", (u, got, want))
        out[str(u)] = got
    return out


def check_round_trip(cfg: SuiteConfig) -> dict:
    n = 0
    for name in fixtures.SPACES:
        t = emit_simplicial(fixtures.space(name))
        if emit_simplicial(parse_simplicial(t)) != t:
            raise CheckFailure("simplicial JSON round trip is not byte-stable", name)
        n += 1
    for lab, m, _ in module_cases(cfg.max_degree, cfg.word_cap):
        if not isinstance(m, DgModule):
            continue
        t = emit_module(m)
        if emit_module(parse_module(t)) != t:
            raise CheckFailure("module JSON round trip is not byte-stable", lab)
        n += 1
    return {"documents": n}


def check_loop_space(cfg: SuiteConfig) -> dict:
    from .linalg import complex_from_operator

    c = _chains("sphere_min2")
    a = cobar(c, cfg.max_degree + 1, None)
    basis = {d: a.basis(d) for d in range(cfg.max_degree + 2)}
    cx, _ = complex_from_operator(basis, a.d, cfg.field, truncated_above=cfg.max_degree + 1)
    h = [r for _, r, _ in homology_ranks(cx, range(cfg.max_degree + 1))]
    if h != [1] * (cfg.max_degree + 1):
        raise CheckFailure("loop-space homology is not one-dimensional in each degree", h)
    return {"homology": h}


def check_bar_cobar(cfg: SuiteConfig) -> dict:
    from .linalg import complex_from_operator

    c = _chains("sphere_min2")
    a = cobar(c, 6, None)
    b = bar(a, 5)
    basis = {d: b.basis(d) for d in range(6)}
    cx, _ = complex_from_operator(basis, b.d, cfg.field, truncated_above=5)
    h = [r for _, r, _ in homology_ranks(cx, range(5))]
    if h != [1, 0, 1, 0, 0]:
        raise CheckFailure("B Omega C homology differs from H(C)", h)
    return {"homology": h}


def check_colimits(cfg: SuiteConfig) -> dict:
    circ = fixtures.space("circle")
    s2 = fixtures.space("sphere_min2")
    cases = [
        ("circle,u=1", circ, monodromy_module(circ, 1), [1, 1]),
        ("sphere_min2,hopf", s2, hopf_module(), [1, 0, 0, 1]),
        ("sphere_min2,trivial", s2, trivial_module("sphere_min2"), [1, 0, 1]),
        ("circle,u=2", circ, monodromy_module(circ, 2), [0, 0]),
    ]
    out = {}
    for lab, k, m, want in cases:
        tc = twisted_complex(m, normalized_chains(k), cfg.field)
        got = [r for _, r, _ in tc.homology(range(len(want)))]
        if got != want:
            raise CheckFailure("colimit value differs", (lab, got, want))
        out[lab] = got
    return out


def check_free_acyclic(cfg: SuiteConfig) -> dict:
    c = _chains("sphere_min2")
    m = FreeCobarModule(cobar(c, 8, None))
    tc = twisted_complex(m, c, cfg.field, 5)
    h = [r for _, r, _ in tc.homology(range(5))]
    if h != [1, 0, 0, 0, 0]:
        raise CheckFailure("free module twisted complex is not acyclic", h)
    return {"homology": h}


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Check:
    name: str
    target: str
    run: Callable[[SuiteConfig, random.Random], dict]


def _checks() -> list[Check]:
    out: list[Check] = [Check("linalg.rank_nullity", "random", lambda cfg, rng: check_rank_nullity(cfg, rng))]
    spaces = list(fixtures.SPACES)
    per_space = [
        ("linalg.euler_characteristic", check_euler),
        ("simplicial.face_identities", check_face_identities),
        ("simplicial.d_squared", check_chain_d_squared),
        ("simplicial.coassociativity", check_coassociative),
        ("simplicial.counit", check_counit),
        ("simplicial.coproduct_chain_map", check_coproduct_chain_map),
        ("dgalg.bar", check_bar),
        ("dgalg.rho", check_rho),
        ("lambda.d_squared", check_lambda_d_squared),
    ]
    for cname, fn in per_space:
        for s in spaces:
            out.append(Check(cname, s, lambda cfg, rng, fn=fn, s=s: fn(cfg, s)))
    for s in spaces:
        out.append(Check("dgalg.cobar", s, lambda cfg, rng, s=s: check_cobar(cfg, s, rng)))
    for lab, *_ in module_cases():
        out.append(Check("dgmod.module_laws", lab, lambda cfg, rng, lab=lab: check_module_laws(cfg, lab)))
        out.append(Check("dgmod.twisted_complex", lab, lambda cfg, rng, lab=lab: check_twisted(cfg, lab)))
    for lab in ("trivial/sphere_min2", "hopf/sphere_min2", "free/sphere_min2", "monodromy(u=2)/circle", "free/pinched"):
        out.append(Check("dgmod.bar_module", lab, lambda cfg, rng, lab=lab: check_bar_module(cfg, lab)))
    for lab, *_ in hom_pairs():
        for v in ("tau", "infty", "strict"):
            out.append(Check(f"dgmod.hom_{v}", lab, lambda cfg, rng, lab=lab, v=v: check_hom(cfg, lab, v)))
    out.append(Check("lambda.rank_law", "delta1..delta4", lambda cfg, rng: check_rank_law(cfg)))
    for s in ("circle", "sphere_min2", "pinched"):
        out.append(Check("lambda.cobar_iso", s, lambda cfg, rng, s=s: check_cobar_iso(cfg, s, rng)))
    for s in ("circle", "sphere_min2", "pinched", "wedge", "delta3", "delta1xdelta1"):
        out.append(Check("lambda.baues_coproduct", s, lambda cfg, rng, s=s: check_baues(cfg, s)))
    for pr in ((1, 1), (2, 1), (1, 2), (2, 2)):
        out.append(Check("lambda.ez_maurer_cartan", f"delta{pr[0]}xdelta{pr[1]}", lambda cfg, rng, pr=pr: check_ez(cfg, pr)))
    for lab, *_ in equiv_cases():
        out.append(Check("equiv.phi_M", lab, lambda cfg, rng, lab=lab: check_phi_M(cfg, lab)))
    out.append(Check("equiv.contraction_nilpotent", "kernel samples", lambda cfg, rng: check_nilpotency(cfg, rng)))
    for lab, *_ in hom_pairs():
        out.append(Check("equiv.F_G", lab, lambda cfg, rng, lab=lab: check_F_G(cfg, lab, rng)))
    out += [
        Check("app.oracle_agreement", "circle", lambda cfg, rng: check_oracle(cfg)),
        Check("app.json_round_trip", "registry", lambda cfg, rng: check_round_trip(cfg)),
        Check("app.loop_space", "sphere_min2", lambda cfg, rng: check_loop_space(cfg)),
        Check("app.bar_cobar", "sphere_min2", lambda cfg, rng: check_bar_cobar(cfg)),
        Check("app.colimit_values", "registry", lambda cfg, rng: check_colimits(cfg)),
        Check("app.free_acyclic", "sphere_min2", lambda cfg, rng: check_free_acyclic(cfg)),
    ]
    return out


CHECKS: list[Check] = _checks()


def run_check(check: Check, cfg: SuiteConfig) -> CheckResult:
    rng = random.Random(f"{cfg.seed}:{check.name}:{check.target}")
    t0 = time.perf_counter()
    try:
        detail = check.run(cfg, rng)
    except CheckFailure as e:
        return CheckResult(check.name, check.target, "fail", f"{e}: {e.witness!r}", {}, time.perf_counter() - t0)
    except (ValueError, KeyError, NotConnectedError) as e:
        return CheckResult(check.name, check.target, "fail", f"{type(e).__name__}: {e}", {}, time.perf_counter() - t0)
    status = "skip" if "skip" in detail else "pass"
    return CheckResult(check.name, check.target, status, None, detail, time.perf_counter() - t0)


def run_suite(cfg: SuiteConfig = SuiteConfig(), select: Iterable[str] | None = None) -> Report:
    """Run every registered check (or those whose name starts with a prefix in ``select``)."""
    prefixes = tuple(select) if select else None
    rep = Report("verify", cfg.field.name, cfg.seed, cfg.max_degree, cfg.word_cap)
    for chk in CHECKS:
        if prefixes and not chk.name.startswith(prefixes):
            continue
        rep.checks.append(run_check(chk, cfg))
    return rep
