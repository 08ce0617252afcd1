"""Cobar and bar constructions, the universal twisting cochain and rho.

Sign conventions (all checked by the test-suite):

* cobar letter ``[c]`` has degree ``|c| - 1`` and
  ``d[c] = -[dc] + sum (-1)^{|c'|} [c'|c'']`` over the reduced coproduct,
  extended as a derivation with Koszul signs on letter degrees;
* bar word ``{a_1|...|a_n}`` has degree ``sum (|a_i| + 1)`` and
  ``d{...} = -sum (-1)^{e_{i-1}} {..|d a_i|..} + sum (-1)^{e_i} {..|a_i a_{i+1}|..}``
  with ``e_i = |a_1| + ... + |a_i| - i``;
* ``rho(c) = {[c]} + sum {[c']|[c'']} + ...`` with no extra signs.

With these choices the twisted differential on ``M (x) C`` squares to zero
and ``rho`` is a map of dg coalgebras.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

from .linalg import RATIONALS, BoundedComplex, Field, add_into, complex_from_operator
from .simplicial import ChainCoalgebra

__all__ = [
    "Word",
    "CobarAlgebra",
    "FiniteDgAlgebra",
    "BarCoalgebra",
    "TruncationError",
    "NotConnectedError",
    "cobar",
    "bar",
    "cobar_complex",
    "bar_cobar_complex",
    "rho",
    "check_conilpotent",
    "word_str",
    "bar_str",
]

Word = tuple  # tuple of letter ids


class TruncationError(RuntimeError):
    pass


class NotConnectedError(ValueError):
    pass


def word_str(w: Sequence[str]) -> str:
    return "[" + "|".join(w) + "]"


def bar_str(beta: Sequence[Sequence[str]]) -> str:
    return "{" + "|".join(word_str(a) for a in beta) + "}"


def _sign(n: int) -> int:
    return -1 if n & 1 else 1


# ---------------------------------------------------------------------------


@dataclass
class CobarAlgebra:
    """The cobar construction on a connected coalgebra of normalized chains."""

    coalgebra: ChainCoalgebra
    max_degree: int = 6
    word_cap: int | None = 8
    _dletter: dict = field(default_factory=dict, repr=False)
    _basis: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.coalgebra.connected:
            raise NotConnectedError(f"{self.coalgebra.name} is not connected (needs exactly one vertex)")

    # letters -----------------------------------------------------------------

    @property
    def letters(self) -> list[str]:
        return self.coalgebra.positive_basis()

    def letter_degree(self, c: str) -> int:
        return self.coalgebra.degree(c) - 1

    @property
    def has_degree_zero_letters(self) -> bool:
        return any(self.letter_degree(c) == 0 for c in self.letters)

    @property
    def truncated(self) -> bool:
        """Whether the stored bases depend on the word cap."""
        return self.has_degree_zero_letters

    def degree(self, w: Word) -> int:
        return sum(self.coalgebra.degree(c) - 1 for c in w)

    def weight(self, w: Word) -> int:
        """Total chain degree of the letters; never increased by ``d``."""
        return sum(self.coalgebra.degree(c) for c in w)

    def tau(self, c: str) -> dict:
        """The universal twisting cochain on a basis element of ``C``."""
        if self.coalgebra.degree(c) == 0:
            return {}
        return {(c,): 1}

    # structure -----------------------------------------------------------------

    def d_letter(self, c: str) -> dict:
        hit = self._dletter.get(c)
        if hit is None:
            C = self.coalgebra
            out: dict = {}
            for x, v in C.d(c).items():
                if C.degree(x) > 0:
                    add_into(out, (x,), -v)
            for (a, b), v in C.reduced_coproduct(c).items():
                add_into(out, (a, b), _sign(C.degree(a)) * v)
            hit = self._dletter[c] = out
        return hit

    def d(self, w: Word) -> dict:
        out: dict = {}
        sgn = 1
        for i, c in enumerate(w):
            pre, post = w[:i], w[i + 1:]
            for mid, v in self.d_letter(c).items():
                add_into(out, pre + mid + post, sgn * v)
            sgn *= _sign(self.letter_degree(c))
        return out

    def d_elem(self, x: Mapping) -> dict:
        out: dict = {}
        for w, v in x.items():
            for k, u in self.d(w).items():
                add_into(out, k, u * v)
        return out

    @staticmethod
    def mul(a: Word, b: Word) -> dict:
        return {a + b: 1}

    @staticmethod
    def mul_elem(x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, u in x.items():
            for b, v in y.items():
                add_into(out, a + b, u * v)
        return out

    unit: Word = ()

    @staticmethod
    def augmentation(w: Word) -> int:
        return 1 if not w else 0

    # bases ---------------------------------------------------------------------

    def basis(self, deg: int) -> list[Word]:
        """Monomials of degree ``deg`` (and length at most ``word_cap``), canonically ordered."""
        if deg < 0:
            return []
        hit = self._basis.get(deg)
        if hit is not None:
            return hit
        letters = sorted(self.letters, key=lambda c: (self.letter_degree(c), c))
        cap = self.word_cap
        if not self.has_degree_zero_letters:
            cap = deg if cap is None else min(cap, deg)
        elif cap is None:
            raise TruncationError("a word cap is required when degree-0 letters exist")
        out: list[Word] = []

        def rec(prefix: tuple, remaining: int):
            if remaining == 0:
                out.append(prefix)
            if len(prefix) >= cap:
                return
            for c in letters:
                k = self.letter_degree(c)
                if k <= remaining:
                    rec(prefix + (c,), remaining - k)

        rec((), deg)
        out.sort(key=lambda w: (len(w), w))
        self._basis[deg] = out
        return out

    def reduced_basis(self, deg: int) -> list[Word]:
        return [w for w in self.basis(deg) if w]

    def all_basis(self) -> dict[int, list[Word]]:
        return {k: self.basis(k) for k in range(self.max_degree + 1)}

    def key_str(self, w: Word) -> str:
        return word_str(w)


def cobar(c: ChainCoalgebra, max_degree: int = 6, word_cap: int | None = 8) -> CobarAlgebra:
    return CobarAlgebra(c, max_degree, word_cap)


# ---------------------------------------------------------------------------


@dataclass
class FiniteDgAlgebra:
    """An augmented dg algebra given by structure constants on a finite basis.

    ``unit_key`` spans the image of the unit; every other basis element lies
    in the augmentation ideal.
    """

    degrees: dict[Hashable, int]
    differential: dict[Hashable, dict] = field(default_factory=dict)
    products: dict[tuple[Hashable, Hashable], dict] = field(default_factory=dict)
    unit_key: Hashable = "1"

    def degree(self, a) -> int:
        return self.degrees[a]

    def d(self, a) -> dict:
        return dict(self.differential.get(a, {}))

    def mul(self, a, b) -> dict:
        if a == self.unit_key:
            return {b: 1}
        if b == self.unit_key:
            return {a: 1}
        return dict(self.products.get((a, b), {}))

    def augmentation(self, a) -> int:
        return 1 if a == self.unit_key else 0

    def reduced_basis(self, deg: int) -> list:
        return sorted((a for a, k in self.degrees.items() if k == deg and a != self.unit_key), key=str)

    def key_str(self, a) -> str:
        return str(a)

    def weight(self, a) -> int:
        return 0 if a == self.unit_key else 1


def ground_field_algebra() -> FiniteDgAlgebra:
    return FiniteDgAlgebra({"1": 0})


# ---------------------------------------------------------------------------


@dataclass
class BarCoalgebra:
    """The bar construction on an augmented dg algebra, truncated by degree.

    Keys are tuples of augmentation-ideal basis keys.  ``weight_cap`` bounds
    the total weight (for a cobar algebra: total chain degree of all
    letters), which keeps bases finite when the algebra has infinitely many
    degree-0 monomials.
    """

    algebra: object
    max_degree: int = 6
    weight_cap: int | None = None
    _basis: dict = field(default_factory=dict, repr=False)

    def degree(self, beta: tuple) -> int:
        return sum(self.algebra.degree(a) + 1 for a in beta)

    def weight(self, beta: tuple) -> int:
        return sum(self.algebra.weight(a) for a in beta)

    def _e(self, beta: tuple, i: int) -> int:
        return sum(self.algebra.degree(a) for a in beta[:i]) - i

    def d(self, beta: tuple) -> dict:
        A = self.algebra
        out: dict = {}
        for i, a in enumerate(beta):
            s = -_sign(self._e(beta, i))
            for x, v in A.d(a).items():
                add_into(out, beta[:i] + (x,) + beta[i + 1:], s * v)
        for i in range(len(beta) - 1):
            s = _sign(self._e(beta, i + 1))
            for x, v in A.mul(beta[i], beta[i + 1]).items():
                add_into(out, beta[:i] + (x,) + beta[i + 2:], s * v)
        return out

    def d_elem(self, x: Mapping) -> dict:
        out: dict = {}
        for b, v in x.items():
            for k, u in self.d(b).items():
                add_into(out, k, u * v)
        return out

    @staticmethod
    def coproduct(beta: tuple) -> dict:
        return {(beta[:i], beta[i:]): 1 for i in range(len(beta) + 1)}

    @staticmethod
    def reduced_coproduct(beta: tuple) -> dict:
        return {(beta[:i], beta[i:]): 1 for i in range(1, len(beta))}

    @staticmethod
    def counit(beta: tuple) -> int:
        return 1 if not beta else 0

    coaugmentation: tuple = ()

    def basis(self, deg: int) -> list[tuple]:
        if deg < 0:
            return []
        hit = self._basis.get(deg)
        if hit is not None:
            return hit
        A = self.algebra
        pieces = {k: A.reduced_basis(k) for k in range(deg)}
        out: list[tuple] = []
        cap = self.weight_cap

        def rec(prefix: tuple, remaining: int, w: int):
            if remaining == 0:
                out.append(prefix)
                return
            for k in range(remaining):
                for a in pieces[k]:
                    nw = w + A.weight(a)
                    if cap is not None and nw > cap:
                        continue
                    rec(prefix + (a,), remaining - k - 1, nw)

        rec((), deg, 0)
        out.sort(key=lambda b: (len(b), [(len(a) if isinstance(a, tuple) else 0, a) for a in b]))
        self._basis[deg] = out
        return out

    def key_str(self, beta: tuple) -> str:
        return "{" + "|".join(self.algebra.key_str(a) for a in beta) + "}"


def bar(a, max_degree: int = 6, weight_cap: int | None = None) -> BarCoalgebra:
    return BarCoalgebra(a, max_degree, weight_cap)


# ---------------------------------------------------------------------------


def iterated_reduced(c: ChainCoalgebra, x: str, n: int) -> dict[tuple, int]:
    """``(Delta')^n`` applied to ``x``: a dict of ``(n+1)``-tuples of generators."""
    cur: dict[tuple, int] = {(x,): 1}
    for _ in range(n):
        nxt: dict[tuple, int] = {}
        for t, v in cur.items():
            for (a, b), u in c.reduced_coproduct(t[-1]).items():
                add_into(nxt, t[:-1] + (a, b), u * v)
        cur = nxt
        if not cur:
            break
    return cur


def rho(c: ChainCoalgebra, element: Mapping[str, object] | str, max_length: int = 16) -> dict:
    """``rho_C: C -> B Omega C`` on an element of ``C``.

    Bar words are tuples of one-letter cobar words.  Raises
    :class:`TruncationError` if the iterated reduced coproduct has not died
    out after ``max_length`` factors.
    """
    if isinstance(element, str):
        element = {element: 1}
    out: dict = {}
    for x, v in element.items():
        if c.degree(x) == 0:
            if x != c.coaugmentation:
                raise NotConnectedError("rho needs a connected coalgebra")
            add_into(out, (), v)
            continue
        n = 0
        while True:
            terms = iterated_reduced(c, x, n)
            if not terms:
                break
            if n + 1 > max_length:
                raise TruncationError(f"rho({x}) has not terminated within {max_length} factors")
            for t, u in terms.items():
                add_into(out, tuple((g,) for g in t), u * v)
            n += 1
    return out


def check_conilpotent(c, bound: int = 16) -> dict[str, int | None]:
    """Least ``n`` with ``(Delta')^n x = 0`` for each positive basis element, or ``None``."""
    out: dict = {}
    for x in c.positive_basis():
        for n in range(1, bound + 1):
            if not iterated_reduced(c, x, n):
                out[x] = n
                break
        else:
            out[x] = None
    return out


def cobar_complex(
    c: ChainCoalgebra, f: Field = RATIONALS, max_degree: int = 6, word_cap: int | None = 8
) -> tuple[CobarAlgebra, BoundedComplex]:
    """``Omega C`` as a chain complex in degrees ``0..max_degree + 1``.

    Degrees are reliable below ``min(max_degree + 1, word_cap)`` when all
    letters have positive degree; with degree-0 letters every stored degree
    depends on the word cap and is flagged.
    """
    a = cobar(c, max_degree + 1, word_cap)
    basis = {d: a.basis(d) for d in range(max_degree + 2)}
    if a.has_degree_zero_letters:
        top = 0
    else:
        top = max_degree + 1 if word_cap is None else min(max_degree + 1, word_cap)
    cx, _ = complex_from_operator(basis, a.d, f, top, strict=False)
    return a, cx


def bar_cobar_complex(
    c: ChainCoalgebra, f: Field = RATIONALS, max_degree: int = 6, word_cap: int | None = 8
) -> tuple[BarCoalgebra, BoundedComplex]:
    """``B Omega C`` in degrees ``0..max_degree + 1``.

    With degree-0 letters the bases are cut to the weight window
    ``word_cap`` (a subcomplex) and every degree is flagged.
    """
    a = cobar(c, max_degree + 2, word_cap)
    w = word_cap if a.has_degree_zero_letters else None
    b = bar(a, max_degree + 1, w)
    basis = {d: b.basis(d) for d in range(max_degree + 2)}
    top = 0 if w is not None else max_degree + 1
    cx, _ = complex_from_operator(basis, b.d, f, top, strict=False)
    return b, cx
