"""Exact scalars, sparse matrices and homology of bounded chain complexes.

Scalars live in a :class:`Field`, either the rationals (``rat``) or a prime
field (``fp:<p>``).  Structure constants elsewhere in the package are plain
Python integers or fractions; they are coerced into the active field when a
matrix is assembled, so the same fixture data serves both modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from numbers import Rational
from typing import Hashable, Iterable, Mapping, Sequence

__all__ = [
    "Field",
    "Fp",
    "RATIONALS",
    "SparseMatrix",
    "BoundedComplex",
    "HomologyMap",
    "ChainMapError",
    "DegreeRangeError",
    "rank",
    "homology_ranks",
    "induced_homology_map",
    "add_into",
    "scale",
    "combine",
    "kernel_basis",
    "solve",
    "homology_basis",
    "complex_from_operator",
    "matrix_of",
]


class DegreeRangeError(ValueError):
    pass


class ChainMapError(ValueError):
    """Raised when a candidate chain map fails to commute with differentials."""

    def __init__(self, message: str, degree: int, witness: Hashable):
        super().__init__(message)
        self.degree = degree
        self.witness = witness


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Fp:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    def _lift(self, other) -> "Fp":
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixing residues modulo different primes")
            return other
        if isinstance(other, int):
            return Fp(other, self.p)
        if isinstance(other, Rational):
            den = other.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return Fp(other.numerator * pow(den, -1, self.p), self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Fp(self.v + o.v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Fp(self.v - o.v, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Fp(o.v - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Fp(self.v * o.v, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o.v == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(o.v, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else o / self

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.v == o.v

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"


@dataclass(frozen=True)
class Field:
    """The ground field: ``p == 0`` means the rationals."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip().lower()
        if text in ("rat", "q", "rational", "rationals"):
            return cls(0)
        if text.startswith("fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise ValueError(f"bad field {text!r}") from None
            return cls(p)
        raise ValueError(f"bad field {text!r}; expected 'rat' or 'fp:<p>'")

    @property
    def name(self) -> str:
        return "rat" if self.p == 0 else f"fp:{self.p}"

    def __call__(self, x):
        if self.p == 0:
            if isinstance(x, Fp):
                raise TypeError("cannot coerce a prime-field residue to a rational")
            return Fraction(x)
        if isinstance(x, Fp):
            if x.p != self.p:
                raise ValueError("residue modulo a different prime")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, int):
            return Fp(x, self.p)
        if isinstance(x, Rational):
            return Fp(0, self.p) + x
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def inv(self, x):
        x = self(x)
        if not x:
            raise ZeroDivisionError("division by zero")
        return 1 / x


RATIONALS = Field(0)


# ---------------------------------------------------------------------------
# linear combinations stored as dicts  key -> coefficient


def add_into(target: dict, key, coeff) -> None:
    if not coeff:
        return
    v = target.get(key)
    v = coeff if v is None else v + coeff
    if v:
        target[key] = v
    else:
        target.pop(key, None)


def scale(vec: Mapping, c) -> dict:
    if not c:
        return {}
    out = {}
    for k, v in vec.items():
        w = v * c
        if w:
            out[k] = w
    return out


def combine(*terms: tuple) -> dict:
    """``combine((c1, v1), (c2, v2), ...)`` returns ``c1*v1 + c2*v2 + ...``."""
    out: dict = {}
    for c, vec in terms:
        for k, v in vec.items():
            add_into(out, k, c * v)
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], object]
    field: Field = RATIONALS

    def __post_init__(self):
        clean = {}
        for (r, c), v in dict(self.entries).items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            v = self.field(v)
            if v:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], field: Field = RATIONALS) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        ent = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        return cls(nrows, ncols, ent, field)

    @classmethod
    def from_columns(
        cls, columns: Sequence[Mapping[int, object]], nrows: int, field: Field = RATIONALS
    ) -> "SparseMatrix":
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                ent[(i, j)] = v
        return cls(nrows, len(columns), ent, field)

    @classmethod
    def identity(cls, n: int, field: Field = RATIONALS) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)}, field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = RATIONALS) -> "SparseMatrix":
        return cls(rows, cols, {}, field)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> list[list]:
        out = [[self.field(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}, self.field
        )

    def column(self, j: int) -> dict[int, object]:
        return {r: v for (r, c), v in self.entries.items() if c == j}

    def columns(self) -> list[dict[int, object]]:
        cols: list[dict[int, object]] = [{} for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, object]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], object] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                add_into(out, (r, c), v * w)
        return SparseMatrix(self.rows, other.cols, out, self.field)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            add_into(out, k, v)
        return SparseMatrix(self.rows, self.cols, out, self.field)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()}, self.field)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def apply(self, vec: Mapping[int, object]) -> dict[int, object]:
        cols = {}
        for (r, c), v in self.entries.items():
            cols.setdefault(c, []).append((r, v))
        out: dict[int, object] = {}
        for c, x in vec.items():
            for r, v in cols.get(c, ()):
                add_into(out, r, v * x)
        return out


# ---------------------------------------------------------------------------
# elimination


def _echelon(columns: Iterable[Mapping[int, object]], field: Field):
    """Column echelon form by pivoting on the smallest row index.

    Returns ``(pivots, reduced)`` where ``pivots`` maps pivot row -> reduced
    column (with leading coefficient 1) and ``reduced`` lists, for each input
    column, the pivot row it introduced or ``None`` if it was dependent.
    """
    pivots: dict[int, dict[int, object]] = {}
    introduced: list[int | None] = []
    for col in columns:
        v = {r: field(x) for r, x in col.items() if x}
        v = {r: x for r, x in v.items() if x}
        while v:
            r = min(v)
            piv = pivots.get(r)
            if piv is None:
                inv = 1 / v[r]
                v = {k: x * inv for k, x in v.items()}
                pivots[r] = v
                introduced.append(r)
                break
            c = v[r]
            for k, x in piv.items():
                add_into(v, k, -c * x)
        else:
            introduced.append(None)
    return pivots, introduced


def rank(m: SparseMatrix) -> int:
    """Rank over ``m.field`` by exact sparse elimination."""
    if not m.entries:
        return 0
    cols = m.columns()
    if m.rows < m.cols:
        cols = m.transpose().columns()
    pivots, _ = _echelon(cols, m.field)
    return len(pivots)


def kernel_basis(m: SparseMatrix) -> list[dict[int, object]]:
    """Basis of ``ker m`` as sparse column vectors, deterministic in column order."""
    f = m.field
    cols = m.columns()
    pivots: dict[int, tuple[dict[int, object], dict[int, object]]] = {}
    kernel = []
    for j, col in enumerate(cols):
        v = {r: f(x) for r, x in col.items()}
        track: dict[int, object] = {j: f(1)}
        while v:
            r = min(v)
            if r not in pivots:
                inv = 1 / v[r]
                pivots[r] = ({k: x * inv for k, x in v.items()}, {k: x * inv for k, x in track.items()})
                break
            c = v[r]
            pv, pt = pivots[r]
            for k, x in pv.items():
                add_into(v, k, -c * x)
            for k, x in pt.items():
                add_into(track, k, -c * x)
        else:
            kernel.append(track)
    return kernel


def solve(m: SparseMatrix, b: Mapping[int, object]) -> dict[int, object] | None:
    """Some ``x`` with ``m x = b``, or ``None`` when ``b`` is not in the image."""
    f = m.field
    cols = m.columns()
    pivots: dict[int, tuple[dict, dict]] = {}
    for j, col in enumerate(cols):
        v = {r: f(x) for r, x in col.items()}
        track = {j: f(1)}
        while v:
            r = min(v)
            if r not in pivots:
                inv = 1 / v[r]
                pivots[r] = ({k: x * inv for k, x in v.items()}, {k: x * inv for k, x in track.items()})
                break
            c = v[r]
            pv, pt = pivots[r]
            for k, x in pv.items():
                add_into(v, k, -c * x)
            for k, x in pt.items():
                add_into(track, k, -c * x)
    v = {r: f(x) for r, x in b.items() if x}
    v = {r: x for r, x in v.items() if x}
    sol: dict[int, object] = {}
    while v:
        r = min(v)
        if r not in pivots:
            return None
        c = v[r]
        pv, pt = pivots[r]
        for k, x in pv.items():
            add_into(v, k, -c * x)
        for k, x in pt.items():
            add_into(sol, k, c * x)
    return sol


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundedComplex:
    """A chain complex stored over a contiguous range of degrees.

    ``differentials[d]`` maps degree ``d`` to degree ``d - 1``.  Degrees
    outside the stored range are zero.  ``truncated_above`` marks the first
    degree whose basis or differential may be incomplete; homology at that
    degree and above is flagged unreliable (as is the degree just below it
    when the incoming differential was cut).
    """

    basis: Mapping[int, Sequence[Hashable]]
    differentials: Mapping[int, SparseMatrix]
    field: Field = RATIONALS
    truncated_above: int | None = None
    check: bool = True
    _index: dict = dc_field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        degs = sorted(self.basis)
        if degs and degs != list(range(degs[0], degs[-1] + 1)):
            raise ValueError("degrees must form a contiguous range")
        for d, b in self.basis.items():
            self._index[d] = {k: i for i, k in enumerate(b)}
            if len(self._index[d]) != len(b):
                raise ValueError(f"duplicate basis labels in degree {d}")
        for d, m in self.differentials.items():
            if d not in self.basis:
                raise ValueError(f"differential in unstored degree {d}")
            want = (len(self.basis.get(d - 1, ())), len(self.basis[d]))
            if m.shape != want:
                raise ValueError(f"differential {d} has shape {m.shape}, expected {want}")
        if self.check:
            for d in self.degrees:
                a, b = self.diff(d), self.diff(d + 1)
                if a.cols and b.cols and a.rows and not (a @ b).is_zero():
                    raise ValueError(f"d_{d} d_{d + 1} != 0")

    @property
    def degrees(self) -> range:
        if not self.basis:
            return range(0)
        return range(min(self.basis), max(self.basis) + 1)

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def index(self, d: int) -> dict:
        return self._index.get(d, {})

    def diff(self, d: int) -> SparseMatrix:
        m = self.differentials.get(d)
        if m is None:
            return SparseMatrix.zeros(self.dim(d - 1), self.dim(d), self.field)
        return m

    def reliable(self, d: int) -> bool:
        return self.truncated_above is None or d < self.truncated_above

    def with_field(self, field: Field) -> "BoundedComplex":
        return BoundedComplex(
            self.basis,
            {d: SparseMatrix(m.rows, m.cols, m.entries if field == m.field else _recoerce(m, field), field)
             for d, m in self.differentials.items()},
            field,
            self.truncated_above,
        )


def _recoerce(m: SparseMatrix, field: Field):
    out = {}
    for k, v in m.entries.items():
        if isinstance(v, Fp):
            v = v.v
        out[k] = v
    return out


def homology_ranks(c: BoundedComplex, degrees: Iterable[int] | None = None) -> list[tuple[int, int, bool]]:
    """``[(degree, rank, reliable), ...]`` with rank = dim ker d_n - rank d_{n+1}."""
    if degrees is None:
        degrees = c.degrees
    out = []
    for d in degrees:
        if d not in c.basis:
            raise DegreeRangeError(f"degree {d} outside stored range {c.degrees}")
        n = c.dim(d)
        out.append((d, n - rank(c.diff(d)) - rank(c.diff(d + 1)), c.reliable(d)))
    return out


def homology_basis(c: BoundedComplex, d: int):
    """Representatives of a homology basis in degree ``d`` and a reducer.

    Boundaries are placed first in the echelon; cycles that survive reduction
    (taken in basis-label order) give the homology basis.  The returned pivot
    table lets callers express any cycle in that basis.
    """
    f = c.field
    boundaries = c.diff(d + 1).columns()
    cycles = kernel_basis(c.diff(d))
    pivots: dict[int, dict] = {}
    # pivot table tracks combination of (boundary or homology generator)
    def insert(vec, tag):
        v = {r: f(x) for r, x in vec.items() if x}
        v = {r: x for r, x in v.items() if x}
        track = {tag: f(1)}
        while v:
            r = min(v)
            if r not in pivots:
                inv = 1 / v[r]
                pivots[r] = ({k: x * inv for k, x in v.items()}, {k: x * inv for k, x in track.items()})
                return True
            cc = v[r]
            pv, pt = pivots[r]
            for k, x in pv.items():
                add_into(v, k, -cc * x)
            for k, x in pt.items():
                add_into(track, k, -cc * x)
        return False

    for i, b in enumerate(boundaries):
        insert(b, ("b", i))
    reps = []
    for z in cycles:
        if insert(z, ("h", len(reps))):
            reps.append(z)
    return reps, pivots


def _coordinates(vec, pivots, f) -> dict:
    v = {r: f(x) for r, x in vec.items() if x}
    v = {r: x for r, x in v.items() if x}
    coords: dict = {}
    while v:
        r = min(v)
        if r not in pivots:
            raise ValueError("vector is not in the span of the reference basis")
        cc = v[r]
        pv, pt = pivots[r]
        for k, x in pv.items():
            add_into(v, k, -cc * x)
        for k, x in pt.items():
            add_into(coords, k, cc * x)
    return {k[1]: x for k, x in coords.items() if k[0] == "h"}


@dataclass(frozen=True)
class HomologyMap:
    degree: int
    matrix: SparseMatrix
    source_rank: int
    target_rank: int
    reliable: bool

    @property
    def is_iso(self) -> bool:
        return self.source_rank == self.target_rank == rank(self.matrix)

    @property
    def is_identity(self) -> bool:
        return self.source_rank == self.target_rank and self.matrix == SparseMatrix.identity(
            self.source_rank, self.matrix.field
        )


def induced_homology_map(
    f: Mapping[int, SparseMatrix],
    source: BoundedComplex,
    target: BoundedComplex,
    degrees: Iterable[int],
) -> list[HomologyMap]:
    """Matrices of ``H(f)`` on the deterministic homology bases.

    ``f[d]`` is the matrix of the chain map in degree ``d``.  The chain-map
    identity is checked on every degree where both sides are stored.
    """
    fld = source.field
    degrees = list(degrees)
    for d in degrees:
        for dd in (d, d + 1):
            if dd not in source.basis:
                continue
            fm = f.get(dd, SparseMatrix.zeros(target.dim(dd), source.dim(dd), fld))
            lower = f.get(dd - 1, SparseMatrix.zeros(target.dim(dd - 1), source.dim(dd - 1), fld))
            lhs = target.diff(dd) @ fm
            rhs = lower @ source.diff(dd)
            diff = lhs - rhs
            if not diff.is_zero():
                (r, col) = min(diff.entries)
                raise ChainMapError(
                    f"not a chain map in degree {dd}", dd, source.basis[dd][col]
                )
    out = []
    for d in degrees:
        if d not in source.basis or d not in target.basis:
            raise DegreeRangeError(f"degree {d} outside stored range")
        s_reps, _ = homology_basis(source, d)
        t_reps, t_piv = homology_basis(target, d)
        fm = f.get(d, SparseMatrix.zeros(target.dim(d), source.dim(d), fld))
        cols = [_coordinates(fm.apply(z), t_piv, fld) for z in s_reps]
        mat = SparseMatrix.from_columns(cols, len(t_reps), fld)
        out.append(HomologyMap(d, mat, len(s_reps), len(t_reps), source.reliable(d) and target.reliable(d)))
    return out


def complex_from_operator(
    basis: Mapping[int, Sequence[Hashable]],
    d,
    field: Field,
    truncated_above: int | None = None,
    strict: bool = True,
    check: bool = True,
) -> tuple[BoundedComplex, set]:
    """Assemble a :class:`BoundedComplex` from an elementwise differential.

    ``d(key)`` returns a dict key -> coefficient.  Keys that fall outside the
    stored basis of the target degree raise ``KeyError`` when ``strict``;
    otherwise they are dropped and reported in the returned set.
    """
    index = {deg: {k: i for i, k in enumerate(b)} for deg, b in basis.items()}
    dropped: set = set()
    mats = {}
    for deg, keys in basis.items():
        if deg - 1 not in basis:
            continue
        tgt = index[deg - 1]
        ent = {}
        for j, k in enumerate(keys):
            for t, v in d(k).items():
                i = tgt.get(t)
                if i is None:
                    if strict:
                        raise KeyError(f"d({k!r}) has term {t!r} outside the stored basis")
                    dropped.add(t)
                    continue
                add_into(ent, (i, j), v)
        mats[deg] = SparseMatrix(len(basis[deg - 1]), len(keys), ent, field)
    return BoundedComplex(dict(basis), mats, field, truncated_above, check=check), dropped


def matrix_of(
    fn, source_keys: Sequence[Hashable], target_keys: Sequence[Hashable], field: Field, strict: bool = True
) -> SparseMatrix:
    idx = {k: i for i, k in enumerate(target_keys)}
    ent = {}
    for j, k in enumerate(source_keys):
        for t, v in fn(k).items():
            i = idx.get(t)
            if i is None:
                if strict:
                    raise KeyError(f"image term {t!r} outside the target basis")
                continue
            add_into(ent, (i, j), v)
    return SparseMatrix(len(target_keys), len(source_keys), ent, field)
