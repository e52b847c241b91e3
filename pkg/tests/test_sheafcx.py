import json
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidacm.fieldlinalg import QQ, PrimeField
from rigidacm.kron import rk_rep
from rigidacm.sheafcx import (
    FreeComplex,
    chern,
    direct_sum,
    dual,
    ek_bundle,
    fib_bundle,
    koszul_model,
    line_bundle,
    minimize,
    omega_chern,
    realize_phi,
    shift,
    tensor,
    twist,
)

GF = PrimeField(1_000_003)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("p", [0, 1, 2])
def test_koszul_model_is_a_complex(n, p):
    c = koszul_model(n, p, p, GF)
    c.check()
    assert c.euler_rank == comb(n, p)


def test_realize_phi_is_a_complex():
    for k in (1, 2, 3, -1, 0):
        c = realize_phi(rk_rep(3, k, GF), 2)
        c.check()


def test_tensor_and_dual_are_complexes():
    f2 = fib_bundle(2, 2, GF)
    t = tensor(dual(f2), f2)
    t.check()
    assert t.euler_rank == 25


def test_chern_data():
    assert chern(fib_bundle(2, 0, GF)).as_tuple() == (1, -1, 0)
    assert chern(fib_bundle(2, -1, GF)).as_tuple() == (1, -2, 0)
    assert chern(fib_bundle(2, 1, GF)).as_tuple() == (2, -1, 1)
    assert chern(fib_bundle(2, 2, GF)).as_tuple() == (5, -2, 4)
    assert omega_chern(2, 1, 1).as_tuple() == (2, -1, 1)
    assert chern(ek_bundle(2, 3, GF)).as_tuple() == chern(fib_bundle(2, 2, GF)).as_tuple()


def test_chern_character_twist_matches_complex_twist():
    c = fib_bundle(2, 2, GF)
    for s in (-3, 1, 4):
        assert chern(twist(c, s)) == chern(c).twist(s)


def test_json_round_trip_normal_form():
    c = ek_bundle(2, 3, GF)
    data = json.loads(c.dumps())
    c2 = FreeComplex.from_json(data)
    assert c2 == c
    assert c2.dumps() == c.normal_form().dumps()


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.integers(-2, 2))
@settings(max_examples=30, deadline=None)
def test_sum_of_line_bundles_round_trip(twists, s):
    c = twist(direct_sum(*(line_bundle(3, d, QQ) for d in twists)), s)
    assert FreeComplex.from_json(json.loads(c.dumps()), QQ) == c
    assert sorted(c.term(0)) == sorted(d + s for d in twists)


def test_from_json_rejects_bad_input():
    c = koszul_model(2, 1, 1, QQ)
    data = c.to_json()
    data["diffs"]["0"][0][0][0]["monomial"] = [2, 0, 0]
    with pytest.raises(ValueError):
        FreeComplex.from_json(data)


def test_from_json_rejects_nonzero_square():
    # O -> O(1) -> O(2) with d = x0 twice does not square to zero
    data = {
        "n": 2,
        "terms": {"0": [{"twist": 0, "mult": 1}], "1": [{"twist": 1, "mult": 1}], "2": [{"twist": 2, "mult": 1}]},
        "diffs": {"0": [[[{"coef": "1", "monomial": [1, 0, 0]}]]], "1": [[[{"coef": "1", "monomial": [1, 0, 0]}]]]},
    }
    with pytest.raises(ValueError):
        FreeComplex.from_json(data)


def test_minimize_cancels_units_only():
    c = realize_phi(rk_rep(3, 2, GF), 2)
    m = minimize(c)
    m.check()
    assert m.euler_rank == c.euler_rank
    for p, block in m.diffs.items():
        for (i, j), f in block.items():
            assert m.term(p + 1)[i] != m.term(p)[j]


def test_shift_changes_sign_of_euler_rank():
    c = koszul_model(2, 1, 1, GF)
    assert shift(c, 1).euler_rank == -c.euler_rank


def test_e3_p3_minimal_shape():
    e = ek_bundle(3, 3, GF)
    assert {p: sorted(t) for p, t in e.terms.items()} == {-1: [-1], 0: [0] * 24, 1: [1] * 6}


def test_ek_rejects_k0():
    with pytest.raises(ValueError):
        ek_bundle(2, 0, GF)
