import pytest

from rigidacm.classify import (
    BeilinsonTable,
    ClassificationError,
    NotSheafLike,
    _classify_table,
    acm_check,
    certified_regularity,
    classify,
    classify_p2,
    classify_p3,
    normalize,
    rigid_decompose,
)
from rigidacm.cech import hypercohomology
from rigidacm.fib import fibonacci
from rigidacm.fieldlinalg import PrimeField
from rigidacm.sheafcx import direct_sum, dual, ek_bundle, fib_bundle, koszul_model, line_bundle, shift, twist

GF = PrimeField(1_000_003)


def test_line_bundle():
    res = classify(line_bundle(2, 5, GF))
    assert (res.case, res.s) == ("LineBundle", -5)
    assert res.components() == [("E_1", 1, 6)]


def test_line_bundle_p3():
    res = classify_p3(line_bundle(3, -2, GF))
    assert (res.case, res.a, res.b, res.s, res.rigid) == ("LineBundle", 1, 0, 2, [(1, 1)])


def test_e2_p2():
    res = classify_p2(ek_bundle(2, 2, GF))
    assert (res.case, res.a, res.b, res.rigid) == ("SteinerE", 3, 1, [(2, 1)])
    assert res.warnings == []


def test_decomposable_warning():
    res = classify(direct_sum(ek_bundle(2, 2, GF), line_bundle(2, 0, GF)))
    assert any("decomposable" in w for w in res.warnings)
    # Hom(E_2, O) = H^0(T(-1)) contributes three more endomorphisms
    assert res.hom_ext[0] == 5


@pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
@pytest.mark.parametrize("s", [-2, 0, 2])
def test_round_trip(n, k, s):
    l = n * (n + 1) // 2
    e = ek_bundle(n, k, GF)
    res = classify(twist(e, s))
    assert (res.case, res.a, res.b, res.s) == (
        "LineBundle" if k == 1 else "SteinerE", fibonacci(l, k), fibonacci(l, k - 1), 1 - s)
    assert res.rigid == [(k, 1)]
    assert rigid_decompose(twist(e, s)) == [(f"E_{k}", 1, s)]


# E_2 on P^2 has rank 2, so its dual is a twist of itself and is found as SteinerE
@pytest.mark.parametrize("n,k", [(2, 3), (2, 4), (3, 2), (3, 3)])
def test_duals_are_steiner_dual(n, k):
    l = n * (n + 1) // 2
    res = classify(twist(dual(ek_bundle(n, k, GF)), 1))
    assert (res.case, res.a, res.b, res.rigid) == ("SteinerDual", fibonacci(l, k), fibonacci(l, k - 1), [(k, 1)])
    assert res.components() == [(f"E_{k}^*", 1, 1)]


def test_self_dual_e2():
    res = classify(dual(ek_bundle(2, 2, GF)))
    assert (res.case, res.rigid) == ("SteinerE", [(2, 1)])


def test_twisted_f2_lands_in_steiner_e():
    res = classify(twist(fib_bundle(2, 2, GF), 1))
    assert res.case == "SteinerE"


def test_table_contradiction():
    alpha = {(i, j): 0 for i in range(3) for j in range(4)}
    alpha.update({(1, 0): 1, (1, 1): 1, (1, 2): 1})
    with pytest.raises(ClassificationError):
        _classify_table(BeilinsonTable(2, alpha))


def test_normalize():
    c, s = normalize(koszul_model(2, 1, 0, GF))
    assert s == 2
    assert hypercohomology(c, 0)[0] > 0 and hypercohomology(c, -1)[0] == 0


def test_regularity_is_certified():
    c = ek_bundle(2, 3, GF)
    m, checked = certified_regularity(c)
    assert all(checked[(i, m - i)] == 0 for i in (1, 2))
    for t in range(m, m + 4):
        assert hypercohomology(c, t)[1:] == (0, 0)


def test_acm():
    for k in (1, 2, 3):
        assert acm_check(ek_bundle(2, k, GF), 3)[0]
        assert acm_check(dual(ek_bundle(2, k, GF)), 3)[0]
    ok, cert = acm_check(koszul_model(2, 1, 1, GF), 1)
    assert not ok and cert.failures == [(1, -1, 1)]


def test_acm_rejects_non_sheaf():
    with pytest.raises(NotSheafLike):
        acm_check(shift(line_bundle(2, 0, GF), 1), 3)


def test_sum_of_e2_and_e3():
    res = classify(direct_sum(ek_bundle(2, 2, GF), ek_bundle(2, 3, GF)))
    assert (res.a, res.b, res.rigid) == (11, 4, [(2, 1), (3, 1)])
    assert res.components() == [("E_2", 1, 0), ("E_3", 1, 0)]


def test_omega2_on_p3_is_dual_type():
    # Omega^2(2) = T(-2) = E_2^*(-1) on P^3, and h^2(Omega^2) = 1 sits at an even twist
    c = koszul_model(3, 2, 2, GF)
    res = classify(c)
    assert (res.case, res.a, res.b, res.components()) == ("SteinerDual", 6, 1, [("E_2^*", 1, -1)])
    assert not acm_check(c, 2)[0]
    assert acm_check(twist(c, 1), 2)[0]


@pytest.mark.parametrize("n,k", [(2, 2), (2, 3), (3, 2)])
def test_acm_agrees_with_direct_scan(n, k):
    d = 3 if n == 2 else 2
    for c in (ek_bundle(n, k, GF), fib_bundle(n, k, GF), twist(fib_bundle(n, k, GF), 1)):
        scan = all(
            not any(hypercohomology(c, t)[1:n])
            for t in range(-3 * d - n, 3 * d + n + 1) if t % d == 0
        )
        assert acm_check(c, d)[0] == scan
