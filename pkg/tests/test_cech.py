from math import comb

import pytest

from rigidacm.cech import (
    CohomologyTable,
    cohomology_table,
    ext_groups,
    hyper_dims,
    hypercohomology,
    is_sheaf_like,
    line_bundle_h,
    truncation_bound,
)
from rigidacm.fieldlinalg import QQ, PrimeField
from rigidacm.sheafcx import dual, ek_bundle, fib_bundle, koszul_model, line_bundle, shift, twist

GF = PrimeField(1_000_003)


def bott(n: int, p: int, t: int) -> tuple[int, ...]:
    """h^q(Omega^p(t)) on P^n from Bott's formula."""
    out = [0] * (n + 1)
    if t == 0:
        out[p] = 1
    if t > p:
        out[0] = comb(t + n - p, t) * comb(t - 1, p)
    if t < p - n:
        out[n] = comb(-t + p, -t) * comb(-t - 1, n - p)
    return tuple(out)


def test_basic_line_bundles():
    o = line_bundle(2, 0, GF)
    assert hypercohomology(o, 0) == (1, 0, 0)
    assert hypercohomology(o, -3) == (0, 0, 1)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("method", ["graded", "cech"])
def test_line_bundles_closed_form(n, method):
    for d in range(-8, 9):
        assert hypercohomology(line_bundle(n, d, GF), 0, method) == line_bundle_h(n, d)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("method", ["auto", "cech"])
def test_bott_formula(n, method):
    # the brute-force engine is kept to small truncation boxes on P^3
    lo = -n - 2 if (method, n) != ("cech", 3) else -3
    for p in range(n + 1):
        c = koszul_model(n, p, 0, GF)
        for t in range(lo, 4):
            assert hypercohomology(c, t, method) == bott(n, p, t), (p, t)


def test_tangent_examples():
    assert hypercohomology(koszul_model(2, 1, 0, GF), 0) == (0, 1, 0)
    assert hypercohomology(koszul_model(2, 1, 2, GF), 0) == (3, 0, 0)
    # T(-1) = dual of Omega(1)
    assert hypercohomology(dual(koszul_model(2, 1, 1, GF)), 0) == (3, 0, 0)


def test_engines_agree_on_fibonacci_bundles():
    for k in (-1, 1, 2, 3):
        c = fib_bundle(2, k, GF)
        for t in range(-4, 2):
            assert hyper_dims(c, t, "auto") == hyper_dims(c, t, "cech")


def test_truncation_bound_is_stable():
    c = fib_bundle(2, 2, GF)
    for t in (-3, -1):
        m = truncation_bound(c, t)
        assert hyper_dims(c, t, "cech", m) == hyper_dims(c, t, "cech", m + 1)


def test_fibonacci_bundle_h1_pattern_p2():
    # h^1(F_k(-1)) = a_k, h^1(F_k(-2)) = a_{k-1}
    for k, (a1, a2) in {1: (1, 0), 2: (3, 1), 3: (8, 3)}.items():
        c = fib_bundle(2, k, GF)
        assert hypercohomology(c, -1)[1] == a1
        assert hypercohomology(c, -2)[1] == a2


def test_ext_groups_exceptional():
    e = ek_bundle(2, 2, GF)
    assert ext_groups(e, e) == (1, 0, 0)
    assert ext_groups(fib_bundle(2, 2, GF), fib_bundle(2, 1, GF)) == (0, 0, 0)
    assert ext_groups(fib_bundle(2, 1, GF), fib_bundle(2, 2, GF)) == (3, 0, 0)


def test_prime_and_rational_agree():
    for k in (1, 2):
        cp, cq = fib_bundle(2, k, GF), fib_bundle(2, k, QQ)
        for t in range(-3, 2):
            assert hypercohomology(cp, t) == hypercohomology(cq, t)


def test_sheaf_like():
    assert is_sheaf_like(fib_bundle(2, 2, GF))
    assert not is_sheaf_like(shift(line_bundle(2, 0, GF), 1))


def test_serre_duality():
    c = ek_bundle(2, 3, GF)
    for t in range(-4, 2):
        assert hypercohomology(c, t) == tuple(reversed(hypercohomology(dual(c), -t - 3)))


def test_cohomology_table_json_round_trip():
    tab = cohomology_table(twist(fib_bundle(2, 1, GF), 1), -3, 1)
    again = CohomologyTable.from_json(tab.to_json())
    assert again == tab
    assert tab[(1, -2)] == 1


def test_empty_window_rejected():
    with pytest.raises(ValueError):
        cohomology_table(line_bundle(2, 0, GF), 2, 1)
