from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidacm.cech import hypercohomology
from rigidacm.classify import acm_check
from rigidacm.fieldlinalg import PrimeField
from rigidacm.sheafcx import ChernData, chern, ek_bundle, fib_bundle, koszul_model, line_bundle, twist
from rigidacm.veronese4 import (
    NotExceptional,
    bad_twists,
    chi,
    chi_pair,
    chi_polynomial,
    discriminant,
    find_acm_twist,
    root_gap_bound,
)

GF = PrimeField(1_000_003)


def _euler(c, t):
    return sum((-1) ** i * h for i, h in enumerate(hypercohomology(c, t)))


@pytest.mark.parametrize("make", [
    lambda: fib_bundle(2, 2, GF),
    lambda: ek_bundle(2, 3, GF),
    lambda: fib_bundle(3, 1, GF),
    lambda: fib_bundle(3, 2, GF),
    lambda: koszul_model(3, 2, 1, GF),
])
def test_riemann_roch_matches_oracle(make):
    c = make()
    cd = chern(c)
    for t in range(-4, 3):
        assert chi(cd, t) == _euler(c, t)


def test_chi_polynomial_matches_chi():
    cd = chern(fib_bundle(2, 3, GF))
    p = chi_polynomial(cd)
    assert all(p(t) == chi(cd, t) for t in range(-6, 4))


def test_chi_pair():
    o = chern(line_bundle(2, 0, GF))
    f1, f2 = chern(fib_bundle(2, 1, GF)), chern(fib_bundle(2, 2, GF))
    assert chi_pair(o, o) == 1
    assert chi_pair(f2, f1) == 0
    assert chi_pair(f1, f2) == 3


@pytest.mark.parametrize("make", [
    lambda: line_bundle(2, 0, GF),
    lambda: line_bundle(2, 1, GF),
    lambda: koszul_model(2, 1, 1, GF),
    lambda: fib_bundle(2, 2, GF),
    lambda: fib_bundle(2, 3, GF),
    lambda: ek_bundle(2, 2, GF),
    lambda: ek_bundle(2, 3, GF),
])
def test_exceptional_suite(make):
    c = make()
    cd = chern(c)
    assert discriminant(cd) == Fraction(5, 4) * cd.r ** 2 - 1
    assert root_gap_bound(cd) <= 3
    assert len(bad_twists(cd)) <= 3
    for d in (4, 5):
        t, bad = find_acm_twist(cd, d)
        assert all((t - b) % d for b in bad)
        assert acm_check(twist(c, t), d)[0]


@given(st.integers(1, 30), st.integers(-40, 40), st.integers(-80, 80))
@settings(max_examples=200, deadline=None)
def test_bad_twists_are_exactly_the_negative_values(r, c1, c2):
    cd = ChernData(2, Fraction(r), Fraction(c1), Fraction(c2))
    p = chi_polynomial(cd)
    bad = set(bad_twists(cd))
    assert bad == {t for t in range(-200, 200) if p(t) < 0}


def test_not_exceptional():
    with pytest.raises(NotExceptional):
        find_acm_twist(ChernData(2, Fraction(2), Fraction(0), Fraction(1)), 4)


def test_small_degree_rejected():
    with pytest.raises(ValueError):
        find_acm_twist(chern(line_bundle(2, 0, GF)), 3)
