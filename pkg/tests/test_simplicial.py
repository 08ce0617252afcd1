from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localsys import fixtures
from localsys.simplicial import (
    IdentityViolation,
    SimplexRef,
    SimplicialError,
    SimplicialSet,
    circle,
    delta,
    normalized_chains,
    pinched,
    product,
    sphere_min,
    standard_model,
    wedge,
)


@pytest.mark.parametrize("n", range(5))
def test_delta_counts_are_binomial(n):
    assert delta(n).counts() == [comb(n + 1, k + 1) for k in range(n + 1)]


def test_delta_faces():
    d2 = delta(2)
    assert [f.base for f in d2.faces["012"]] == ["12", "02", "01"]
    assert d2.first_vertex("012") == "0" and d2.last_vertex("012") == "2"


def test_fixture_counts():
    assert circle().counts() == [1, 1]
    assert sphere_min(2).counts() == [1, 0, 1]
    assert pinched().counts() == [1, 1, 1]
    assert wedge(circle(), circle()).counts() == [1, 2]
    # the square has 4 vertices, 5 edges and 2 triangles
    assert product(delta(1), delta(1)).counts() == [4, 5, 2]
    assert standard_model("delta1xdelta1").name == "delta1xdelta1"
    for name in fixtures.SPACES:
        fixtures.space(name).validate()


def test_degeneracy_word_round_trip():
    r = SimplexRef.from_word("x", 1, [2, 0])
    assert r.dim == 3 and r.eta == (0, 0, 1, 1)
    assert r.degeneracy_word == (2, 0)
    with pytest.raises(SimplicialError):
        SimplexRef.from_word("x", 1, [0, 2])


def test_simplicial_identities_on_degenerate_simplices():
    k = delta(2)
    s = k.degeneracy(k.ref("012"), 1)
    # d_1 s_1 = d_2 s_1 = id
    assert k.face(s, 1) == k.ref("012") == k.face(s, 2)
    # d_0 s_1 = s_0 d_0
    assert k.face(s, 0) == k.degeneracy(k.face(k.ref("012"), 0), 0)
    assert k.normalize("012", "d0 s1") == k.face(s, 0)


def test_bad_face_identity_is_reported():
    a = SimplexRef.nondegenerate("a", 1)
    b = SimplexRef.nondegenerate("b", 1)
    v = lambda x: SimplexRef(x, (0,))
    k = SimplicialSet(
        "broken",
        {"0": 0, "1": 0, "a": 1, "b": 1, "t": 2},
        {"a": [v("1"), v("0")], "b": [v("0"), v("1")], "t": [a, a, b]},
    )
    with pytest.raises(IdentityViolation):
        k.validate()


def test_boundary_and_coproduct_on_delta2():
    c = normalized_chains(delta(2))
    assert c.d("012") == {"12": 1, "02": -1, "01": 1}
    assert c.coproduct("012") == {("0", "012"): 1, ("01", "12"): 1, ("012", "2"): 1}
    assert c.reduced_coproduct("012") == {("01", "12"): 1}


def test_pinched_coproduct_collapses_vertices():
    c = normalized_chains(pinched())
    assert c.d("sigma") == {"a": 1}
    assert c.reduced_coproduct("sigma") == {("a", "a"): 1}
    assert c.d("a") == {}


def test_product_faces_of_square():
    p = product(delta(1), delta(1))
    top = p.generators(2)
    assert len(top) == 2
    # the two triangles share their diagonal
    diag = {f.base for f in p.faces[top[0]]} & {f.base for f in p.faces[top[1]]}
    assert diag == {"(01,01)"}


def test_wedge_requires_one_vertex():
    with pytest.raises(SimplicialError):
        wedge(delta(1), circle())


monotone = st.integers(1, 4).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, n), min_size=1, max_size=4).map(sorted))
)


@settings(max_examples=80, deadline=None)
@given(monotone, st.data())
def test_apply_is_functorial(pair, data):
    n, theta = pair
    k = delta(n)
    s = k.ref(k.generators(n)[0])
    q = len(theta) - 1
    psi = sorted(data.draw(st.lists(st.integers(0, q), min_size=1, max_size=4)))
    lhs = k.apply(k.apply(s, theta), psi)
    rhs = k.apply(s, [theta[i] for i in psi])
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(fixtures.SPACES)))
def test_chain_laws_every_fixture(name):
    c = normalized_chains(fixtures.space(name))
    for g in c.sset.generators():
        dd: dict = {}
        for x, v in c.d(g).items():
            for y, u in c.d(x).items():
                dd[y] = dd.get(y, 0) + u * v
        assert not any(dd.values())
        left: dict = {}
        for (a, b), v in c.coproduct(g).items():
            left[b] = left.get(b, 0) + c.counit(a) * v
        assert {k: v for k, v in left.items() if v} == {g: 1}


@pytest.mark.parametrize("name", ["circle", "sphere_min2", "pinched", "delta2", "wedge"])
def test_product_with_point_preserves_counts(name):
    k = fixtures.space(name)
    assert product(k, delta(0)).counts() == k.counts()
    assert len(product(circle(), delta(0)).generators()) == 2


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_normalize_respects_simplicial_identities(data):
    # rewriting d_i s_j and d_i d_j pairs by the identities gives the same simplex
    k = delta(3)
    base = "0123"
    i = data.draw(st.integers(0, 3))
    j = data.draw(st.integers(0, 3))
    if i < j:
        assert k.normalize(base, f"d{i} d{j}") == k.normalize(base, f"d{j - 1} d{i}")
    j = data.draw(st.integers(0, 3))
    i = data.draw(st.integers(0, 4))
    lhs = k.normalize(base, f"d{i} s{j}")
    if i < j:
        rhs = k.normalize(base, f"s{j - 1} d{i}")
    elif i in (j, j + 1):
        rhs = k.ref(base)
    else:
        rhs = k.normalize(base, f"s{j} d{i - 1}")
    assert lhs == rhs
    # normal form is idempotent: normalizing the result's own word changes nothing
    assert k.normalize(lhs.base, [("s", t) for t in lhs.degeneracy_word]) == lhs
