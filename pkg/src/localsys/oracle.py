"""Classical oracle: homology of the circle with local coefficients.

``Z`` acts on ``k^n`` through an invertible matrix ``u``.  The two-term free
resolution ``0 -> k[t, 1/t] -> k[t, 1/t] -> k`` (multiplication by ``t - 1``)
gives ``H_0 = coker(u - 1)`` and ``H_1 = ker(u - 1)``.
"""

from __future__ import annotations

from typing import Sequence

from .linalg import RATIONALS, Field, SparseMatrix, rank

__all__ = ["SingularMonodromy", "group_homology_oracle_Z"]


class SingularMonodromy(ValueError):
    pass


def group_homology_oracle_Z(u: Sequence[Sequence] | object, f: Field = RATIONALS) -> list[int]:
    """``[dim H_0, dim H_1]`` of ``Z`` with coefficients twisted by ``u``."""
    if not isinstance(u, (list, tuple)):
        u = [[u]]
    n = len(u)
    if any(len(r) != n for r in u):
        raise SingularMonodromy("monodromy must be square")
    m = SparseMatrix.from_dense(u, f)
    if rank(m) != n:
        raise SingularMonodromy(f"monodromy is singular over {f.name}")
    shifted = m - SparseMatrix.identity(n, f)
    r = rank(shifted)
    return [n - r, n - r]
