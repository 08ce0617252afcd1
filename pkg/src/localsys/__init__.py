"""Colimits of local systems over finite one-vertex simplicial sets.

The colimit is modeled by the twisted tensor product ``(M (x) C, d (x) tau)``
of a right dg module over the cobar construction of normalized chains.
Everything is computed with exact arithmetic over the rationals or a prime
field.
"""

from __future__ import annotations

from .dgalg import BarCoalgebra, CobarAlgebra, bar, cobar, rho
from .dgmod import (
    DgModule,
    FreeCobarModule,
    colimit_complex,
    hom_infty,
    hom_strict,
    hom_tau,
    hopf_module,
    monodromy_module,
    trivial_module,
    twisted_complex,
)
from .linalg import RATIONALS, BoundedComplex, Field, SparseMatrix, homology_ranks
from .necklace import Necklaces, lambda_hom
from .simplicial import ChainCoalgebra, SimplexRef, SimplicialSet, normalized_chains

__all__ = [
    "BarCoalgebra",
    "BoundedComplex",
    "ChainCoalgebra",
    "CobarAlgebra",
    "DgModule",
    "Field",
    "FreeCobarModule",
    "Necklaces",
    "RATIONALS",
    "SimplexRef",
    "SimplicialSet",
    "SparseMatrix",
    "bar",
    "cobar",
    "colimit_complex",
    "hom_infty",
    "hom_strict",
    "hom_tau",
    "homology_ranks",
    "hopf_module",
    "lambda_hom",
    "monodromy_module",
    "normalized_chains",
    "rho",
    "trivial_module",
    "twisted_complex",
]

__version__ = "0.1.0"
