from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localsys import fixtures
from localsys.dgalg import (
    NotConnectedError,
    TruncationError,
    bar,
    bar_cobar_complex,
    check_conilpotent,
    cobar,
    cobar_complex,
    rho,
)
from localsys.linalg import add_into, homology_ranks
from localsys.simplicial import delta, normalized_chains, pinched, sphere_min


def _dd(op, x):
    out: dict = {}
    for k, v in op(x).items():
        for j, u in op(k).items():
            add_into(out, j, u * v)
    return {k: v for k, v in out.items() if v}


def test_pinched_cobar_differential():
    a = cobar(normalized_chains(pinched()))
    assert a.d(("sigma",)) == {("a",): -1, ("a", "a"): -1}
    assert a.d(("a",)) == {}
    assert a.letter_degree("a") == 0 and a.has_degree_zero_letters


def test_cobar_of_sphere_has_one_class_per_degree(field):
    # H_*(Omega S^2) is a polynomial algebra on one class of degree 1
    _, cx = cobar_complex(normalized_chains(sphere_min(2)), field, max_degree=6)
    assert [r for _, r, _ in homology_ranks(cx, range(7))] == [1] * 7


def test_cobar_rejects_multi_vertex():
    with pytest.raises(NotConnectedError):
        cobar(normalized_chains(delta(1)))


def test_cobar_leibniz_on_products():
    a = cobar(normalized_chains(pinched()), word_cap=4)
    x, y = ("sigma",), ("sigma", "a")
    lhs = a.d(x + y)
    rhs: dict = {}
    for k, v in a.d_elem({x: 1}).items():
        for j, u in a.mul(k, y).items():
            add_into(rhs, j, u * v)
    for k, v in a.d_elem({y: 1}).items():
        add_into(rhs, x + k, (-1) ** a.degree(x) * v)
    assert lhs == {k: v for k, v in rhs.items() if v}


def test_bar_degree_and_signs():
    a = cobar(normalized_chains(sphere_min(2)))
    b = bar(a, 6)
    beta = (("sigma",), ("sigma",))
    assert b.degree(beta) == 4
    # {[s]|[s]} -> +{[s|s]}
    assert b.d(beta) == {(("sigma", "sigma"),): 1}
    assert b.d(((("sigma", "sigma"),))) == {}


def test_bar_cobar_recovers_chains_of_sphere(field):
    _, cx = bar_cobar_complex(normalized_chains(sphere_min(2)), field, max_degree=4)
    h = homology_ranks(cx)
    assert [r for _, r, _ in h[:5]] == [1, 0, 1, 0, 0]
    assert all(ok for _, _, ok in h[:5]) and not h[-1][2]


def test_rho_values():
    c = normalized_chains(pinched())
    assert rho(c, "sigma") == {(("sigma",),): 1, (("a",), ("a",)): 1}
    assert rho(c, c.coaugmentation) == {(): 1}
    assert check_conilpotent(c) == {"a": 1, "sigma": 2}
    with pytest.raises(TruncationError):
        rho(c, "sigma", max_length=1)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(n for n in fixtures.SPACES if fixtures.space(n).counts()[0] == 1)), st.data())
def test_cobar_and_bar_square_to_zero(name, data):
    a = cobar(normalized_chains(fixtures.space(name)), max_degree=4, word_cap=4)
    deg = data.draw(st.integers(0, 4))
    words = a.basis(deg)
    if words:
        w = data.draw(st.sampled_from(words))
        assert _dd(a.d, w) == {}
    b = bar(a, 4, weight_cap=4)
    betas = b.basis(data.draw(st.integers(0, 4)))
    if betas:
        beta = data.draw(st.sampled_from(betas))
        assert _dd(b.d, beta) == {}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(n for n in fixtures.SPACES if fixtures.space(n).counts()[0] == 1)), st.data())
def test_rho_is_a_chain_map(name, data):
    c = normalized_chains(fixtures.space(name))
    a = cobar(c, max_degree=8, word_cap=8)
    b = bar(a, 8)
    x = data.draw(st.sampled_from(c.sset.generators()))
    lhs = b.d_elem(rho(c, x))
    rhs = rho(c, c.d(x))
    lhs = {k: v for k, v in lhs.items() if v}
    assert lhs == {k: v for k, v in rhs.items() if v}
