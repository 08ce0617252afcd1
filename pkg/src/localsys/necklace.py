"""The dg category of necklaces on a simplicial set.

A morphism monomial from ``x`` to ``y`` is a word ``[s1|...|sk]`` of
nondegenerate simplices of positive dimension with ``last(si) = first(s_{i+1})``.
Keys are tuples of generator ids; the empty tuple stands for ``c_x``, the
class of the degenerate 1-simplex at ``x``, which is the identity.

``d[s] = -sum_{0<i<n} (-1)^i [d_i s] + sum_{0<p<n} (-1)^p [front_p s | back_{n-p} s]``,
extended as a derivation (bead ``s`` has degree ``dim s - 1``) and then put
in canonical form: a degenerate bead of dimension at least two kills the
word, degenerate 1-simplices are dropped from longer words.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .linalg import (
    RATIONALS,
    BoundedComplex,
    Field,
    SparseMatrix,
    add_into,
    complex_from_operator,
    homology_ranks,
    solve,
)
from .simplicial import ProductSet, SimplexRef, SimplicialSet

__all__ = [
    "LambdaError",
    "Necklaces",
    "LambdaHomComplex",
    "lambda_hom",
    "compose",
    "phi_iso",
    "phi_inverse",
    "aw_lambda",
    "ez",
    "ez_universal",
    "mc_defect",
    "top_necklaces",
]


class LambdaError(ValueError):
    pass


def _sign(n: int) -> int:
    return -1 if n & 1 else 1


def _clean(vec: Mapping, f: Field | None = None) -> dict:
    if f is None:
        return {k: v for k, v in vec.items() if v}
    out = {}
    for k, v in vec.items():
        v = f(v)
        if v:
            out[k] = v
    return out


@dataclass
class Necklaces:
    """Necklace monomials of a simplicial set ``K`` and their operations."""

    k: SimplicialSet
    _d: dict = field(default_factory=dict, repr=False)

    # canonical form --------------------------------------------------------

    def canonical(self, word: Sequence[SimplexRef]) -> tuple | None:
        """Canonical key of a word of simplex refs, or ``None`` if it is zero."""
        for r in word:
            if r.dim < 1:
                raise LambdaError("beads must have positive dimension")
            if r.degenerate and r.dim >= 2:
                return None
        return tuple(r.base for r in word if not r.degenerate)

    def refs(self, key: tuple) -> list[SimplexRef]:
        return [self.k.ref(g) for g in key]

    def degree(self, key: tuple) -> int:
        return sum(self.k.dims[g] - 1 for g in key)

    def endpoints(self, key: tuple, x: str | None = None) -> tuple[str, str]:
        if not key:
            if x is None:
                raise LambdaError("the identity needs its object")
            return x, x
        return self.k.endpoints(key[0])[0], self.k.endpoints(key[-1])[1]

    def is_composable(self, key: tuple) -> bool:
        return all(self.k.endpoints(a)[1] == self.k.endpoints(b)[0] for a, b in zip(key, key[1:]))

    def key_str(self, key: tuple, x: str | None = None) -> str:
        if not key:
            return f"c_{x}" if x is not None else "c"
        return "[" + "|".join(key) + "]"

    # differential ------------------------------------------------------------

    def d_bead(self, r: SimplexRef) -> list[tuple[list[SimplexRef], int]]:
        """``d`` of a single nondegenerate bead as words of refs (before canonical form)."""
        n = r.dim
        out = []
        for i in range(1, n):
            out.append(([self.k.face(r, i)], -_sign(i)))
        for p in range(1, n):
            out.append(([self.k.sub(r, 0, p), self.k.sub(r, p, n)], _sign(p)))
        return out

    def d(self, key: tuple) -> dict:
        hit = self._d.get(key)
        if hit is not None:
            return hit
        refs = self.refs(key)
        out: dict = {}
        s = 1
        for i, r in enumerate(refs):
            for mid, v in self.d_bead(r):
                c = self.canonical(refs[:i] + mid + refs[i + 1:])
                if c is not None:
                    add_into(out, c, s * v)
            s *= _sign(r.dim - 1)
        self._d[key] = out
        return out

    def d_elem(self, x: Mapping) -> dict:
        out: dict = {}
        for k, v in x.items():
            for t, u in self.d(k).items():
                add_into(out, t, u * v)
        return out

    # composition ---------------------------------------------------------------

    def compose(self, a: tuple, b: tuple) -> tuple:
        if a and b and self.k.endpoints(a[-1])[1] != self.k.endpoints(b[0])[0]:
            raise LambdaError(f"cannot compose {a} with {b}: endpoints differ")
        return a + b

    def compose_elem(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, u in x.items():
            for b, v in y.items():
                add_into(out, self.compose(a, b), u * v)
        return out

    # bases ---------------------------------------------------------------------

    def basis(self, x: str, y: str, deg: int, word_cap: int | None = None) -> list[tuple]:
        """Canonical monomials ``x -> y`` of degree ``deg`` (length at most ``word_cap``)."""
        gens = [g for g in self.k.generators() if self.k.dims[g] >= 1]
        by_start: dict[str, list[str]] = {}
        for g in gens:
            by_start.setdefault(self.k.endpoints(g)[0], []).append(g)
        has_loops = any(self.k.dims[g] == 1 and self.k.endpoints(g)[0] == self.k.endpoints(g)[1] for g in gens)
        if has_loops and word_cap is None:
            raise LambdaError("a word cap is required when there are loops of degree 0")
        out = []
        if x == y and deg == 0:
            out.append(())

        def rec(prefix: tuple, at: str, remaining: int):
            if prefix and at == y and remaining == 0:
                out.append(prefix)
            if word_cap is not None and len(prefix) >= word_cap:
                return
            for g in by_start.get(at, ()):
                k = self.k.dims[g] - 1
                if k <= remaining:
                    rec(prefix + (g,), self.k.endpoints(g)[1], remaining - k)

        rec((), x, deg)
        out.sort(key=lambda w: (len(w), w))
        return out


def compose(nk: Necklaces, a: tuple, b: tuple) -> tuple:
    return nk.compose(a, b)


@dataclass
class LambdaHomComplex:
    necklaces: Necklaces
    x: str
    y: str
    complex: BoundedComplex
    truncated: bool

    def homology(self, degrees=None):
        if degrees is None:
            degrees = [d for d in self.complex.degrees if self.complex.reliable(d)]
        return homology_ranks(self.complex, degrees)

    def ranks(self) -> list[int]:
        return [self.complex.dim(d) for d in self.complex.degrees]


def lambda_hom(
    k: SimplicialSet,
    x: str,
    y: str,
    max_degree: int = 6,
    word_cap: int | None = None,
    f: Field = RATIONALS,
) -> LambdaHomComplex:
    """``Lambda(K)(x, y)`` through ``max_degree``.

    When the basis needs a word cap or stops short of the natural top degree,
    the top stored degree is flagged unreliable.
    """
    verts = set(k.vertices())
    for v in (x, y):
        if v not in verts:
            raise LambdaError(f"unknown vertex {v!r}")
    nk = Necklaces(k)
    has_loops = any(k.dims[g] == 1 and k.endpoints(g)[0] == k.endpoints(g)[1] for g in k.generators(1))
    cap = word_cap if has_loops else None
    if has_loops and cap is None:
        cap = 8
    basis = {d: nk.basis(x, y, d, cap) for d in range(0, max_degree + 1)}
    top_exists = bool(nk.basis(x, y, max_degree + 1, cap))
    truncated = max_degree if (top_exists or has_loops) else None
    cx, dropped = complex_from_operator(basis, nk.d, f, truncated, strict=not has_loops)
    return LambdaHomComplex(nk, x, y, cx, truncated is not None or bool(dropped))


# ---------------------------------------------------------------------------
# the cobar isomorphism for one-vertex sets


def phi_iso(nk: Necklaces, w: Mapping | tuple) -> dict:
    """Cobar element -> ``Lambda(K)(x, x)``: ``[s] -> [s] - c_x`` for edges, ``[s] -> [s]`` otherwise."""
    if isinstance(w, tuple):
        w = {w: 1}
    out: dict = {}
    for word, v in w.items():
        cur: dict = {(): v}
        for g in word:
            factor = {(g,): 1}
            if nk.k.dims[g] == 1:
                factor[()] = -1
            cur = nk.compose_elem(cur, factor)
        for k, u in cur.items():
            add_into(out, k, u)
    return _clean(out)


def phi_inverse(nk: Necklaces, m: Mapping | tuple) -> dict:
    """Inverse of :func:`phi_iso`: ``[s] -> [s] + 1`` for edges, ``c_x -> 1``."""
    if isinstance(m, tuple):
        m = {m: 1}
    out: dict = {}
    for key, v in m.items():
        cur: dict = {(): v}
        for g in key:
            factor = {(g,): 1}
            if nk.k.dims[g] == 1:
                factor[()] = 1
            nxt: dict = {}
            for a, u in cur.items():
                for b, t in factor.items():
                    add_into(nxt, a + b, u * t)
            cur = nxt
        for k, u in cur.items():
            add_into(out, k, u)
    return _clean(out)


# ---------------------------------------------------------------------------
# Baues coproduct


def _aw_bead(nk: Necklaces, g: str) -> dict:
    k = nk.k
    r = k.ref(g)
    n = r.dim
    if n == 1:
        return {((g,), (g,)): 1}
    out: dict = {}
    for size in range(0, n):
        for inner in itertools.combinations(range(1, n), size):
            a = (0,) + inner + (n,)
            eps = sum((i - 1) * (a[i] - a[i - 1] - 1) for i in range(1, len(a)))
            left = nk.canonical([k.sub(r, a[i - 1], a[i]) for i in range(1, len(a))])
            right = nk.canonical([k.restrict(r, a)]) if len(a) >= 2 else None
            if left is None or right is None:
                continue
            add_into(out, (left, right), _sign(eps))
    return out


def aw_lambda(nk: Necklaces, key: tuple) -> dict:
    """``AW_Lambda`` on a monomial, as a dict ``(left key, right key) -> coeff``."""
    cur: dict = {((), ()): 1}
    for g in key:
        nxt: dict = {}
        for (l1, r1), u in cur.items():
            for (l2, r2), v in _aw_bead(nk, g).items():
                s = _sign(nk.degree(r1) * nk.degree(l2))
                add_into(nxt, (l1 + l2, r1 + r2), s * u * v)
        cur = nxt
    return _clean(cur)


def tensor_d(nk: Necklaces, t: Mapping) -> dict:
    out: dict = {}
    for (a, b), v in t.items():
        for x, u in nk.d(a).items():
            add_into(out, (x, b), u * v)
        s = _sign(nk.degree(a))
        for y, u in nk.d(b).items():
            add_into(out, (a, y), s * u * v)
    return _clean(out)


# ---------------------------------------------------------------------------
# Eilenberg-Zilber map
#
# Universal computation in T x Delta^l where T = Delta^{n1} v ... v Delta^{nk}.
# Vertices of T are 0..N with junctions J_i; a bead is a strictly increasing
# chain of points (x, y).


def _junctions(ns: Sequence[int]) -> list[int]:
    out = [0]
    for n in ns:
        out.append(out[-1] + n)
    return out


def top_necklaces(ns: Sequence[int], l: int) -> list[tuple]:
    """Necklaces of maximal degree from ``(0,0)`` to ``(N,l)`` with one bead per bead of ``T``."""
    J = _junctions(ns)
    out = []

    def paths(x0, y0, x1, y_max):
        # monotone unit-step paths from (x0,y0) to x = x1 (ending anywhere on x = x1, y <= y_max)
        res = []

        def rec(p):
            x, y = p[-1]
            if x == x1:
                res.append(tuple(p))
                # also allow continuing up along x = x1
            if x < x1:
                rec(p + [(x + 1, y)])
            if y < y_max:
                rec(p + [(x, y + 1)])

        rec([(x0, y0)])
        return res

    def rec_bead(i, start, acc):
        if i == len(ns):
            out.append(tuple(acc))
            return
        for p in paths(start[0], start[1], J[i + 1], l):
            if i == len(ns) - 1 and p[-1][1] != l:
                continue
            if len(p) < 2:
                continue
            rec_bead(i + 1, p[-1], acc + [p])

    rec_bead(0, (0, 0), [])
    return sorted(set(out))


def _u_d_bead(b: tuple) -> list[tuple[list[tuple], int]]:
    n = len(b) - 1
    out = []
    for i in range(1, n):
        out.append(([b[:i] + b[i + 1:]], -_sign(i)))
    for p in range(1, n):
        out.append(([b[: p + 1], b[p:]], _sign(p)))
    return out


def _u_d(word: tuple) -> dict:
    out: dict = {}
    s = 1
    for i, b in enumerate(word):
        for mid, v in _u_d_bead(b):
            add_into(out, word[:i] + tuple(mid) + word[i + 1:], s * v)
        s *= _sign(len(b) - 2)
    return out


def _u_deg(word: tuple) -> int:
    return sum(len(b) - 2 for b in word)


def _push(elem: Mapping, fx, fy) -> dict:
    out: dict = {}
    for word, v in elem.items():
        w = tuple(tuple((fx(i, p[0]), fy(p[1])) for p in b) for i, b in enumerate(word))
        add_into(out, w, v)
    return out


_EZ_CACHE: dict = {}


def _fundamental(ns: Sequence[int]) -> tuple:
    J = _junctions(ns)
    return tuple(tuple(range(J[i], J[i + 1] + 1)) for i in range(len(ns)))


def _u_lambda_d_t(ns: Sequence[int]) -> dict:
    """``d`` of the fundamental necklace of ``T`` as words of x-chains."""
    word = _fundamental(ns)
    out: dict = {}
    s = 1
    for i, b in enumerate(word):
        n = len(b) - 1
        terms = [([b[:j] + b[j + 1:]], -_sign(j)) for j in range(1, n)]
        terms += [([b[: p + 1], b[p:]], _sign(p)) for p in range(1, n)]
        for mid, v in terms:
            add_into(out, word[:i] + tuple(mid) + word[i + 1:], s * v)
        s *= _sign(n - 1)
    return out


def _ez_pushed(t_chains: tuple, l_map: Sequence[int]) -> dict:
    """EZ of the necklace given by x-chains ``t_chains`` against the y-chain ``l_map``."""
    ns = tuple(len(b) - 1 for b in t_chains)
    l = len(l_map) - 1
    base = ez_universal(ns, l)
    J = _junctions(ns)

    def fx(i, x):
        # point x of the universal T lies in bead i; map to the chain
        return t_chains[i][x - J[i]]

    return _push(base, fx, lambda y: l_map[y])


def ez_universal(ns: Sequence[int], l: int) -> dict:
    """``EZ(iota_T (x) iota_l)`` in ``Lambda(T x Delta^l)``; keys are tuples of point chains.

    Coefficients are solved from the Maurer-Cartan identity and are all ``+-1``.
    """
    ns = tuple(ns)
    key = (ns, l)
    hit = _EZ_CACHE.get(key)
    if hit is not None:
        return hit
    if any(n < 1 for n in ns) or not ns:
        raise LambdaError("bead dimensions must be positive")
    tops = top_necklaces(ns, l)
    if l == 0:
        (only,) = tops
        res = {only: 1}
        _EZ_CACHE[key] = res
        return res
    rhs = _mc_rhs(ns, l)
    # d is injective on top degree; solve d(sum x_N N) = rhs
    cols = [_u_d(w) for w in tops]
    rows: dict = {}
    for col in cols:
        for w in col:
            rows.setdefault(w, len(rows))
    for w in rhs:
        if w not in rows:
            raise LambdaError(f"Maurer-Cartan system has no solution for {key}")
    ent = {}
    for j, col in enumerate(cols):
        for w, v in col.items():
            add_into(ent, (rows[w], j), v)
    m = SparseMatrix(len(rows), len(tops), ent)
    b = {rows[w]: v for w, v in rhs.items()}
    sol = solve(m, b)
    if sol is None:
        raise LambdaError(f"Maurer-Cartan system has no solution for {key}")
    res = {}
    for j, w in enumerate(tops):
        v = sol.get(j, 0)
        if v not in (1, -1):
            raise LambdaError(f"EZ coefficient {v} on {w} is not a sign")
        res[w] = int(v)
    _EZ_CACHE[key] = res
    return res


def _mc_rhs(ns: tuple, l: int) -> dict:
    """Right-hand side of the Maurer-Cartan identity for the universal pair."""
    J = _junctions(ns)
    N = J[-1]
    deg_t = sum(ns) - len(ns)
    out: dict = {}
    full_l = tuple(range(l + 1))
    # EZ(d t (x) sigma)
    for t2, v in _u_lambda_d_t(ns).items():
        for w, u in _ez_pushed(t2, full_l).items():
            add_into(out, w, v * u)
    # (-1)^{|t|} EZ(t (x) d' sigma)
    t = _fundamental(ns)
    for i in range(1, l):
        face = full_l[:i] + full_l[i + 1:]
        for w, u in _ez_pushed(t, face).items():
            add_into(out, w, _sign(deg_t) * _sign(i) * u)
    # (-1)^{|t||sigma'|} [(first, sigma') | EZ(t (x) sigma'')]
    for p in range(1, l + 1):
        bead = tuple((0, y) for y in range(0, p + 1))
        for w, u in _ez_pushed(t, full_l[p:]).items():
            add_into(out, (bead,) + w, _sign(deg_t * p) * u)
    # -(-1)^{|t| + |sigma'|} [EZ(t (x) sigma') | (last, sigma'')]
    for p in range(0, l):
        bead = tuple((N, y) for y in range(p, l + 1))
        for w, u in _ez_pushed(t, full_l[: p + 1]).items():
            add_into(out, w + (bead,), -_sign(deg_t + p) * u)
    return _clean(out)


def mc_defect_universal(ns: Sequence[int], l: int) -> dict:
    """``d EZ - rhs`` for the universal pair; empty when the identity holds."""
    lhs: dict = {}
    for w, v in ez_universal(ns, l).items():
        for x, u in _u_d(w).items():
            add_into(lhs, x, u * v)
    for w, v in _mc_rhs(tuple(ns), l).items():
        add_into(lhs, w, -v)
    return _clean(lhs)


# -- pushforward into a product ---------------------------------------------------


def _bead_ref(p: ProductSet, t_ref: SimplexRef, s_ref: SimplexRef, chain: tuple, x0: int) -> SimplexRef:
    xs = [pt[0] - x0 for pt in chain]
    ys = [pt[1] for pt in chain]
    a = p.left.apply(t_ref, xs)
    b = p.right.apply(s_ref, ys)
    return p.pair_ref(a, b)


def ez(p: ProductSet, t: Sequence[SimplexRef] | tuple, sigma: SimplexRef | str, x: str | None = None) -> dict:
    """``EZ(t (x) sigma)`` in ``Lambda(S x L)`` as canonical keys of ``p``.

    ``t`` is a word of simplex refs of ``S`` (a bare key is accepted; the
    empty key needs ``x`` and means ``c_x``).  A degenerate ``sigma`` of
    positive dimension gives zero.
    """
    S, L = p.left, p.right
    if isinstance(sigma, str):
        sigma = L.ref(sigma)
    if isinstance(t, tuple) and all(isinstance(g, str) for g in t):
        if not t:
            if x is None:
                raise LambdaError("the identity needs its object")
            t = [SimplexRef(x, (0, 0))]
        else:
            t = [S.ref(g) for g in t]
    t = list(t)
    if sigma.degenerate and sigma.dim > 0:
        return {}
    ns = tuple(r.dim for r in t)
    base = ez_universal(ns, sigma.dim)
    J = _junctions(ns)
    nk = Necklaces(p)
    out: dict = {}
    for word, v in base.items():
        refs = [_bead_ref(p, t[i], sigma, b, J[i]) for i, b in enumerate(word)]
        c = nk.canonical(refs)
        if c is not None:
            add_into(out, c, v)
    return _clean(out)


def mc_defect(p: ProductSet, t: tuple, sigma: str | SimplexRef, x: str | None = None) -> dict:
    """``lhs - rhs`` of the Maurer-Cartan identity for ``EZ`` on an actual pair.

    Empty exactly when the identity holds.
    """
    S, L = p.left, p.right
    nS, nP = Necklaces(S), Necklaces(p)
    if isinstance(sigma, str):
        sigma = L.ref(sigma)
    if not t:
        first = last = x
    else:
        first, last = nS.endpoints(t, x)
    l = sigma.dim
    deg_t = nS.degree(t)
    lhs = nP.d_elem(ez(p, t, sigma, x))
    rhs: dict = {}
    for t2, v in nS.d(t).items():
        for w, u in ez(p, t2, sigma, first).items():
            add_into(rhs, w, v * u)
    for i in range(1, l):
        for w, u in ez(p, t, L.face(sigma, i), first).items():
            add_into(rhs, w, _sign(deg_t) * _sign(i) * u)
    sx = S.ref(first)
    sy = S.ref(last)
    for q in range(1, l + 1):
        front = L.sub(sigma, 0, q)
        bead = p.pair_ref(SimplexRef(sx.base, (0,) * (q + 1)), front)
        for w, u in ez(p, t, L.sub(sigma, q, l), first).items():
            c = nP.canonical([bead] + nP.refs(w))
            if c is not None:
                add_into(rhs, c, _sign(deg_t * q) * u)
    for q in range(0, l):
        back = L.sub(sigma, q, l)
        bead = p.pair_ref(SimplexRef(sy.base, (0,) * (l - q + 1)), back)
        for w, u in ez(p, t, L.sub(sigma, 0, q), first).items():
            c = nP.canonical(nP.refs(w) + [bead])
            if c is not None:
                add_into(rhs, c, -_sign(deg_t + q) * u)
    for k, v in rhs.items():
        add_into(lhs, k, -v)
    return _clean(lhs)
