"""Finite simplicial sets, their products, and normalized chains.

A simplex is stored as a :class:`SimplexRef`: a nondegenerate generator
``base`` together with an order-preserving surjection ``eta`` from
``[m]`` onto ``[dim base]``.  The simplex is ``base`` precomposed with
``eta``; its strictly decreasing degeneracy word lists the positions where
``eta`` repeats.  Every structure map is computed by composing with an
order-preserving map and re-factoring, so results are always canonical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

__all__ = [
    "SimplexRef",
    "SimplicialSet",
    "SimplicialError",
    "IdentityViolation",
    "ChainCoalgebra",
    "delta",
    "sphere_min",
    "circle",
    "pinched",
    "wedge",
    "product",
    "normalized_chains",
    "standard_model",
]


class SimplicialError(ValueError):
    pass


class IdentityViolation(SimplicialError):
    def __init__(self, i: int, j: int, simplex: str, lhs, rhs):
        super().__init__(
            f"d_{i} d_{j} {simplex} = {lhs} but d_{j - 1} d_{i} {simplex} = {rhs}"
        )
        self.triple = (i, j, simplex)


@dataclass(frozen=True, order=True)
class SimplexRef:
    base: str
    eta: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.eta) - 1

    @property
    def base_dim(self) -> int:
        return self.eta[-1]

    @property
    def degenerate(self) -> bool:
        return self.dim != self.base_dim

    @property
    def degeneracy_word(self) -> tuple[int, ...]:
        """Strictly decreasing degeneracy indices ``(j1 > j2 > ...)``."""
        return tuple(sorted((j for j in range(self.dim) if self.eta[j] == self.eta[j + 1]), reverse=True))

    @classmethod
    def nondegenerate(cls, base: str, dim: int) -> "SimplexRef":
        return cls(base, tuple(range(dim + 1)))

    @classmethod
    def from_word(cls, base: str, base_dim: int, degen: Sequence[int]) -> "SimplexRef":
        degen = list(degen)
        if any(a <= b for a, b in zip(degen, degen[1:])):
            raise SimplicialError(f"degeneracy word {degen} is not strictly decreasing")
        m = base_dim + len(degen)
        js = set(degen)
        if any(j < 0 or j >= m for j in js):
            raise SimplicialError(f"degeneracy index out of range in {degen}")
        eta = [0]
        for k in range(m):
            eta.append(eta[-1] + (0 if k in js else 1))
        if eta[-1] != base_dim:
            raise SimplicialError("inconsistent degeneracy word")
        return cls(base, tuple(eta))

    def __str__(self) -> str:
        w = self.degeneracy_word
        if not w:
            return self.base
        return "".join(f"s{j}" for j in w) + " " + self.base


@dataclass
class SimplicialSet:
    """Nondegenerate generators with face tables.

    ``faces[g][i]`` is the ``i``-th face of generator ``g`` (dimension >= 1).
    """

    name: str
    dims: dict[str, int]
    faces: dict[str, list[SimplexRef]]
    _vertex_cache: dict = field(default_factory=dict, repr=False, compare=False)

    # -- structure -----------------------------------------------------------

    @property
    def max_dim(self) -> int:
        return max(self.dims.values(), default=-1)

    def generators(self, dim: int | None = None) -> list[str]:
        gens = sorted(self.dims, key=lambda g: (self.dims[g], g))
        if dim is None:
            return gens
        return [g for g in gens if self.dims[g] == dim]

    def counts(self) -> list[int]:
        return [len(self.generators(n)) for n in range(self.max_dim + 1)]

    def vertices(self) -> list[str]:
        return self.generators(0)

    def ref(self, g: str) -> SimplexRef:
        return SimplexRef.nondegenerate(g, self.dims[g])

    def apply(self, s: SimplexRef, theta: Sequence[int]) -> SimplexRef:
        """The simplex ``s`` precomposed with the monotone map ``theta: [q] -> [dim s]``."""
        comp = tuple(s.eta[t] for t in theta)
        base = s.base
        while True:
            n = self.dims[base]
            image = set(comp)
            if len(image) == n + 1:
                return SimplexRef(base, comp)
            i = max(k for k in range(n + 1) if k not in image)
            face = self.faces[base][i]
            comp = tuple(face.eta[c if c < i else c - 1] for c in comp)
            base = face.base

    def face(self, s: SimplexRef, i: int) -> SimplexRef:
        n = s.dim
        if not 0 <= i <= n or n == 0:
            raise SimplicialError(f"face index {i} out of range for a {n}-simplex")
        return self.apply(s, tuple(k for k in range(n + 1) if k != i))

    def degeneracy(self, s: SimplexRef, j: int) -> SimplexRef:
        n = s.dim
        if not 0 <= j <= n:
            raise SimplicialError(f"degeneracy index {j} out of range for a {n}-simplex")
        return self.apply(s, tuple(k if k <= j else k - 1 for k in range(n + 2)))

    def vertex(self, s: SimplexRef, k: int) -> str:
        return self.apply(s, (k,)).base

    def first_vertex(self, s: SimplexRef | str) -> str:
        if isinstance(s, str):
            s = self.ref(s)
        return self.vertex(s, 0)

    def last_vertex(self, s: SimplexRef | str) -> str:
        if isinstance(s, str):
            s = self.ref(s)
        return self.vertex(s, s.dim)

    def endpoints(self, g: str) -> tuple[str, str]:
        hit = self._vertex_cache.get(g)
        if hit is None:
            hit = self._vertex_cache[g] = (self.first_vertex(g), self.last_vertex(g))
        return hit

    def sub(self, s: SimplexRef, lo: int, hi: int) -> SimplexRef:
        """The sub-simplex on consecutive vertices ``lo..hi``."""
        return self.apply(s, tuple(range(lo, hi + 1)))

    def restrict(self, s: SimplexRef, verts: Sequence[int]) -> SimplexRef:
        return self.apply(s, tuple(verts))

    def normalize(self, base: str, word: Sequence[tuple[str, int]] | str) -> SimplexRef:
        """Canonical form of a face/degeneracy word applied to ``base``.

        ``word`` is written as in ``d0 s1 x``: the rightmost operator acts
        first.  It may be a string such as ``"d0 s0"`` or a list of
        ``("d", i)`` / ``("s", j)`` pairs.
        """
        if isinstance(word, str):
            ops = []
            for tok in word.split():
                if tok[0] not in "ds" or not tok[1:].isdigit():
                    raise SimplicialError(f"bad operator {tok!r}")
                ops.append((tok[0], int(tok[1:])))
            word = ops
        if base not in self.dims:
            raise SimplicialError(f"unknown generator {base!r}")
        s = self.ref(base)
        for kind, i in reversed(list(word)):
            s = self.face(s, i) if kind == "d" else self.degeneracy(s, i)
        return s

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        """Raise unless every face resolves and ``d_i d_j = d_{j-1} d_i`` for ``i < j``."""
        for g, n in self.dims.items():
            if n < 0:
                raise SimplicialError(f"negative dimension for {g!r}")
            fs = self.faces.get(g, [])
            if n == 0:
                if fs:
                    raise SimplicialError(f"vertex {g!r} has faces")
                continue
            if len(fs) != n + 1:
                raise SimplicialError(f"{g!r} of dimension {n} needs {n + 1} faces, has {len(fs)}")
            for i, f in enumerate(fs):
                if f.base not in self.dims:
                    raise SimplicialError(f"face {i} of {g!r} refers to unknown generator {f.base!r}")
                if f.dim != n - 1:
                    raise SimplicialError(f"face {i} of {g!r} has dimension {f.dim}, expected {n - 1}")
                if f.base_dim != self.dims[f.base] or sorted(set(f.eta)) != list(range(f.base_dim + 1)):
                    raise SimplicialError(f"face {i} of {g!r} is not a canonical degeneracy of {f.base!r}")
                if any(a > b for a, b in zip(f.eta, f.eta[1:])):
                    raise SimplicialError(f"face {i} of {g!r} is not monotone")
        for g in self.generators():
            n = self.dims[g]
            if n < 2:
                continue
            s = self.ref(g)
            for j in range(n + 1):
                for i in range(j):
                    lhs = self.face(self.faces[g][j], i)
                    rhs = self.face(self.faces[g][i], j - 1)
                    if lhs != rhs:
                        raise IdentityViolation(i, j, g, lhs, rhs)
            del s

    def is_valid(self) -> bool:
        try:
            self.validate()
        except SimplicialError:
            return False
        return True


# ---------------------------------------------------------------------------
# standard models


def _subset_id(vs: Sequence[int]) -> str:
    if all(v < 10 for v in vs):
        return "".join(str(v) for v in vs)
    return ",".join(str(v) for v in vs)


def delta(n: int) -> SimplicialSet:
    """The standard ``n``-simplex; generator ids are vertex strings such as ``"012"``."""
    dims: dict[str, int] = {}
    faces: dict[str, list[SimplexRef]] = {}
    for k in range(n + 1):
        for vs in itertools.combinations(range(n + 1), k + 1):
            g = _subset_id(vs)
            dims[g] = k
            if k:
                faces[g] = [
                    SimplexRef.nondegenerate(_subset_id(vs[:i] + vs[i + 1:]), k - 1) for i in range(k + 1)
                ]
    return SimplicialSet(f"delta{n}", dims, faces)


def sphere_min(n: int, vertex: str = "b", cell: str = "sigma") -> SimplicialSet:
    """``Delta^n / boundary``: one vertex and one nondegenerate ``n``-simplex."""
    if n < 1:
        raise SimplicialError("sphere_min needs n >= 1")
    deg = SimplexRef(vertex, (0,) * n)
    return SimplicialSet(f"sphere_min{n}" if n > 1 else "circle", {vertex: 0, cell: n}, {cell: [deg] * (n + 1)})


def circle() -> SimplicialSet:
    return sphere_min(1)


def pinched() -> SimplicialSet:
    """One vertex ``b``, an edge ``a`` and a 2-simplex ``sigma`` with all faces ``a``."""
    a = SimplexRef.nondegenerate("a", 1)
    return SimplicialSet("pinched", {"b": 0, "a": 1, "sigma": 2}, {"a": [SimplexRef("b", (0,))] * 2, "sigma": [a, a, a]})


def wedge(k: SimplicialSet, l: SimplicialSet, vertex: str = "b") -> SimplicialSet:
    """Wedge of two one-vertex simplicial sets; generators are prefixed ``1.`` and ``2.``."""
    for x in (k, l):
        if len(x.vertices()) != 1:
            raise SimplicialError(f"{x.name} does not have a single vertex")
    dims = {vertex: 0}
    faces = {}
    for tag, x in (("1", k), ("2", l)):
        v = x.vertices()[0]
        ren = lambda g, tag=tag, v=v: vertex if g == v else f"{tag}.{g}"
        for g, n in x.dims.items():
            if n == 0:
                continue
            dims[ren(g)] = n
            faces[ren(g)] = [SimplexRef(ren(f.base), f.eta) for f in x.faces[g]]
    return SimplicialSet(f"wedge({k.name},{l.name})", dims, faces)


# ---------------------------------------------------------------------------
# products


def _pair_id(a: SimplexRef, b: SimplexRef) -> str:
    def enc(s):
        w = s.degeneracy_word
        return s.base + ("" if not w else "^" + "".join(str(j) for j in w))

    return f"({enc(a)},{enc(b)})"


@dataclass
class ProductSet(SimplicialSet):
    """A product ``K x L``; ``pairs`` records the component simplices of each generator."""

    left: SimplicialSet | None = None
    right: SimplicialSet | None = None
    pairs: dict[str, tuple[SimplexRef, SimplexRef]] = field(default_factory=dict)
    _ids: dict = field(default_factory=dict, repr=False)

    def pair_ref(self, a: SimplexRef, b: SimplexRef) -> SimplexRef:
        """Canonical simplex of ``K x L`` with components ``a`` and ``b``."""
        if a.dim != b.dim:
            raise SimplicialError("components of a product simplex must have equal dimension")
        m = a.dim
        common = [j for j in range(m) if a.eta[j] == a.eta[j + 1] and b.eta[j] == b.eta[j + 1]]
        keep = [k for k in range(m + 1) if k - 1 not in common]
        # outer surjection collapses the common repeats
        eta = []
        level = -1
        for k in range(m + 1):
            if k - 1 not in common:
                level += 1
            eta.append(level)
        a0 = SimplexRef(a.base, tuple(a.eta[k] for k in keep))
        b0 = SimplexRef(b.base, tuple(b.eta[k] for k in keep))
        gid = self._ids.get((a0, b0))
        if gid is None:
            raise SimplicialError(f"product simplex ({a0}, {b0}) is beyond the materialized dimension")
        return SimplexRef(gid, tuple(eta))

    def vertex_id(self, x: str, y: str) -> str:
        return self._ids[(SimplexRef(x, (0,)), SimplexRef(y, (0,)))]


def product(k: SimplicialSet, l: SimplicialSet, max_dim: int | None = None) -> ProductSet:
    """``K x L``: nondegenerate simplices are pairs with no common degeneracy index."""
    top = k.max_dim + l.max_dim
    if max_dim is not None:
        top = min(top, max_dim)
    dims: dict[str, int] = {}
    pairs: dict[str, tuple[SimplexRef, SimplexRef]] = {}
    ids: dict = {}
    for m in range(top + 1):
        for x in k.generators():
            p = k.dims[x]
            if p > m:
                continue
            for y in l.generators():
                q = l.dims[y]
                if q > m or p + q < m:
                    continue
                for ja in itertools.combinations(range(m), m - p):
                    rest = [j for j in range(m) if j not in ja]
                    for jb in itertools.combinations(rest, m - q):
                        a = SimplexRef.from_word(x, p, sorted(ja, reverse=True))
                        b = SimplexRef.from_word(y, q, sorted(jb, reverse=True))
                        gid = _pair_id(a, b)
                        dims[gid] = m
                        pairs[gid] = (a, b)
                        ids[(a, b)] = gid
    out = ProductSet(f"{k.name}x{l.name}", dims, {}, left=k, right=l, pairs=pairs, _ids=ids)
    for gid, (a, b) in pairs.items():
        m = dims[gid]
        if m == 0:
            continue
        out.faces[gid] = [out.pair_ref(k.face(a, i), l.face(b, i)) for i in range(m + 1)]
    return out


# ---------------------------------------------------------------------------
# normalized chains


@dataclass
class ChainCoalgebra:
    """Normalized chains with the Alexander-Whitney coproduct.

    Elements are dicts ``generator id -> coefficient``; tensors are dicts
    keyed by id pairs.
    """

    sset: SimplicialSet
    _d: dict = field(default_factory=dict, repr=False)
    _delta: dict = field(default_factory=dict, repr=False)

    @property
    def name(self) -> str:
        return self.sset.name

    def basis(self, deg: int) -> list[str]:
        return self.sset.generators(deg)

    @property
    def max_degree(self) -> int:
        return self.sset.max_dim

    def degree(self, g: str) -> int:
        return self.sset.dims[g]

    def d(self, g: str) -> dict[str, int]:
        hit = self._d.get(g)
        if hit is None:
            k = self.sset
            n = k.dims[g]
            out: dict[str, int] = {}
            if n:
                for i, f in enumerate(k.faces[g]):
                    if not f.degenerate:
                        out[f.base] = out.get(f.base, 0) + (-1) ** i
            hit = self._d[g] = {x: c for x, c in out.items() if c}
        return hit

    def coproduct(self, g: str) -> dict[tuple[str, str], int]:
        hit = self._delta.get(g)
        if hit is None:
            k = self.sset
            s = k.ref(g)
            n = s.dim
            out: dict[tuple[str, str], int] = {}
            for p in range(n + 1):
                front = k.sub(s, 0, p)
                back = k.sub(s, p, n)
                if front.degenerate or back.degenerate:
                    continue
                key = (front.base, back.base)
                out[key] = out.get(key, 0) + 1
            hit = self._delta[g] = out
        return hit

    def reduced_coproduct(self, g: str) -> dict[tuple[str, str], int]:
        return {(a, b): c for (a, b), c in self.coproduct(g).items() if self.degree(a) > 0 and self.degree(b) > 0}

    def counit(self, g: str) -> int:
        return 1 if self.degree(g) == 0 else 0

    @property
    def coaugmentation(self) -> str | None:
        vs = self.sset.vertices()
        return vs[0] if len(vs) == 1 else None

    @property
    def connected(self) -> bool:
        return self.coaugmentation is not None

    def positive_basis(self) -> list[str]:
        return [g for g in self.sset.generators() if self.degree(g) > 0]


def normalized_chains(k: SimplicialSet) -> ChainCoalgebra:
    return ChainCoalgebra(k)


def standard_model(name: str) -> SimplicialSet:
    """Named fixtures: ``delta<n>``, ``sphere_min<n>``, ``circle``, ``pinched``,
    ``wedge`` (two circles), ``wedge(<a>,<b>)`` and ``delta1xdelta1``."""
    name = name.strip().lower().replace(" ", "")
    if name.startswith("delta") and name[5:].isdigit():
        return delta(int(name[5:]))
    if name.startswith("delta(") and name.endswith(")") and name[6:-1].isdigit():
        return delta(int(name[6:-1]))
    for prefix in ("sphere_min", "sphere_min("):
        rest = name[len(prefix):].rstrip(")")
        if name.startswith(prefix) and rest.isdigit():
            return sphere_min(int(rest))
    if name == "circle":
        return circle()
    if name == "pinched":
        return pinched()
    if name in ("wedge", "wedge(circle,circle)"):
        return wedge(circle(), circle())
    if name.startswith("wedge(") and name.endswith(")"):
        a, _, b = name[6:-1].partition(",")
        return wedge(standard_model(a), standard_model(b))
    if name in ("delta1xdelta1", "delta(1)xdelta(1)"):
        p = product(delta(1), delta(1))
        p.name = "delta1xdelta1"
        return p
    raise SimplicialError(f"unknown fixture {name!r}")
