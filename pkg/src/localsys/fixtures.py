"""Compiled-in registry of simplicial sets and modules."""

from __future__ import annotations

from typing import Callable

from .dgalg import cobar
from .dgmod import FreeCobarModule, hopf_module, monodromy_module, trivial_module
from .simplicial import (
    SimplicialSet,
    circle,
    delta,
    normalized_chains,
    pinched,
    product,
    sphere_min,
    wedge,
)

__all__ = ["SPACES", "MODULES", "space", "module", "one_vertex_spaces", "FixtureError"]


class FixtureError(KeyError):
    pass


def _d1xd1() -> SimplicialSet:
    p = product(delta(1), delta(1))
    p.name = "delta1xdelta1"
    return p


SPACES: dict[str, Callable[[], SimplicialSet]] = {
    "delta0": lambda: delta(0),
    "delta1": lambda: delta(1),
    "delta2": lambda: delta(2),
    "delta3": lambda: delta(3),
    "circle": circle,
    "sphere_min2": lambda: sphere_min(2),
    "sphere_min3": lambda: sphere_min(3),
    "pinched": pinched,
    "wedge": lambda: wedge(circle(), circle()),
    "delta1xdelta1": _d1xd1,
}

# module name -> spaces it is defined over (None: any one-vertex space)
MODULES: dict[str, tuple[str, ...] | None] = {
    "trivial": None,
    "hopf": ("sphere_min2",),
    "monodromy": ("circle", "wedge(circle,circle)"),
    "free": None,
}


def space(name: str) -> SimplicialSet:
    key = name.strip().lower()
    if key == "sphere_min1":
        key = "circle"
    if key not in SPACES:
        raise FixtureError(f"unknown fixture {name!r}; known: {', '.join(sorted(SPACES))}")
    return SPACES[key]()


def one_vertex_spaces() -> list[str]:
    return [n for n in SPACES if len(space(n).vertices()) == 1]


def module(name: str, k: SimplicialSet, monodromy=None, max_degree: int = 6, word_cap: int | None = 8):
    """Build the named module over ``k``."""
    allowed = MODULES.get(name, ())
    if name not in MODULES:
        raise FixtureError(f"unknown module {name!r}; known: {', '.join(sorted(MODULES))}")
    if allowed is not None and k.name not in allowed:
        raise FixtureError(f"module {name!r} is not defined over {k.name!r}")
    if name == "trivial":
        return trivial_module(k.name)
    if name == "hopf":
        return hopf_module(over=k.name)
    if name == "monodromy":
        return monodromy_module(k, 1 if monodromy is None else monodromy)
    c = normalized_chains(k)
    return FreeCobarModule(cobar(c, max_degree + 2, word_cap))
