from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localsys.linalg import (
    RATIONALS,
    BoundedComplex,
    ChainMapError,
    DegreeRangeError,
    Field,
    Fp,
    SparseMatrix,
    complex_from_operator,
    homology_ranks,
    induced_homology_map,
    kernel_basis,
    rank,
    solve,
)

F5 = Field(5)


def test_field_parse():
    assert Field.parse("rat") == RATIONALS
    assert Field.parse("fp:5").p == 5
    with pytest.raises(ValueError):
        Field.parse("fp:6")
    with pytest.raises(ValueError):
        Field.parse("reals")


def test_prime_field_arithmetic():
    a = Fp(3, 5)
    assert a + 4 == Fp(2, 5)
    assert a * 2 == Fp(1, 5)
    assert 1 / a == Fp(2, 5)
    assert F5(Fraction(1, 2)) == Fp(3, 5)
    with pytest.raises(ZeroDivisionError):
        F5.inv(10)


def test_rank_known_matrices():
    # rows 1 and 2 are dependent over every field
    m = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(m) == 2
    # determinant 5: invertible over Q, singular over F5
    d = [[1, 2], [-1, 3]]
    assert rank(SparseMatrix.from_dense(d)) == 2
    assert rank(SparseMatrix.from_dense(d, F5)) == 1


def test_kernel_and_solve():
    m = SparseMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    (k,) = kernel_basis(m)
    assert m.apply(k) == {}
    assert {i: int(v) for i, v in k.items()} in ({0: 1, 1: -1, 2: 1}, {0: -1, 1: 1, 2: -1})
    assert solve(m, {0: 1, 1: 1}) is not None
    assert solve(SparseMatrix.from_dense([[1, 1], [1, 1]]), {0: 1}) is None


def test_homology_of_circle_complex():
    # C_1 = <e>, C_0 = <v>, d e = 0
    cx = BoundedComplex({0: ["v"], 1: ["e"]}, {1: SparseMatrix.zeros(1, 1)})
    assert homology_ranks(cx) == [(0, 1, True), (1, 1, True)]


def test_truncation_flags():
    cx = BoundedComplex({0: ["v"], 1: ["e"]}, {1: SparseMatrix.identity(1)}, truncated_above=1)
    assert homology_ranks(cx) == [(0, 0, True), (1, 0, False)]
    with pytest.raises(DegreeRangeError):
        homology_ranks(cx, [5])


def test_d_squared_is_checked():
    d1 = SparseMatrix.from_dense([[1]])
    d2 = SparseMatrix.from_dense([[1]])
    with pytest.raises(ValueError):
        BoundedComplex({0: ["a"], 1: ["b"], 2: ["c"]}, {1: d1, 2: d2})


def test_complex_from_operator_strictness():
    basis = {0: ["v"], 1: ["e"]}
    with pytest.raises(KeyError):
        complex_from_operator(basis, lambda k: {"w": 1} if k == "e" else {}, RATIONALS)
    cx, dropped = complex_from_operator(basis, lambda k: {"w": 1} if k == "e" else {}, RATIONALS, strict=False)
    assert dropped == {"w"}


def test_induced_map_identity_and_chain_map_error():
    cx = BoundedComplex({0: ["v"], 1: ["e"]}, {1: SparseMatrix.zeros(1, 1)})
    ident = {0: SparseMatrix.identity(1), 1: SparseMatrix.identity(1)}
    maps = induced_homology_map(ident, cx, cx, [0, 1])
    assert all(hm.is_identity and hm.is_iso for hm in maps)
    tgt = BoundedComplex({0: ["v"], 1: ["e"]}, {1: SparseMatrix.identity(1)})
    with pytest.raises(ChainMapError):
        induced_homology_map({0: SparseMatrix.zeros(1, 1), 1: SparseMatrix.identity(1)}, cx, tgt, [1])


small = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw):
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 5))
    return [[draw(small) for _ in range(c)] for _ in range(r)]


@settings(max_examples=60, deadline=None)
@given(matrices(), st.sampled_from([RATIONALS, F5]))
def test_rank_nullity(dense, f):
    m = SparseMatrix.from_dense(dense, f)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.cols
    assert all(not m.apply(v) for v in ker)
    assert rank(m) == rank(m.transpose())


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_recovers_image(dense, data):
    m = SparseMatrix.from_dense(dense)
    x = {j: data.draw(small) for j in range(m.cols)}
    b = m.apply(x)
    sol = solve(m, b)
    assert sol is not None
    assert m.apply(sol) == {k: v for k, v in b.items() if v}


@settings(max_examples=40, deadline=None)
@given(matrices(), matrices())
def test_product_rank_bound(a, b):
    ma = SparseMatrix.from_dense(a)
    mb = SparseMatrix.from_dense(b)
    if ma.cols != mb.rows:
        return
    assert rank(ma @ mb) <= min(rank(ma), rank(mb))
