import numpy as np
import pytest
import sympy
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidacm.fib import dim_vector, fibonacci
from rigidacm.fieldlinalg import QQ, PrimeField, ResourceError
from rigidacm.kron import (
    KroneckerRep,
    euler_form,
    generic_rep,
    hom_ext,
    kac_decompose,
    rk_rep,
)

GF = PrimeField(1_000_003)


def _hom_dim_oracle(r, s):
    """dim Hom from the defining equations phi1 A_i = B_i phi0, solved with sympy."""
    a, b = r.dims
    a2, b2 = s.dims
    unknowns = a2 * a + b2 * b
    if unknowns == 0:
        return 0
    p0 = lambda u, v: u * a + v  # phi0 is a2 x a
    p1 = lambda u, v: a2 * a + u * b + v  # phi1 is b2 x b
    rows = []
    for A, B in zip(r.arrays, s.arrays):
        for i in range(b2):
            for j in range(a):
                row = [0] * unknowns
                for t in range(b):
                    row[p1(i, t)] += int(A[t, j])
                for t in range(a2):
                    row[p0(t, j)] -= int(B[i, t])
                rows.append(row)
    if not rows:
        return unknowns
    if r.field == QQ:
        return unknowns - sympy.Matrix(rows).rank()
    dom = sympy.GF(r.field.p)
    dm = DomainMatrix([[dom(x) for x in row] for row in rows], (len(rows), unknowns), dom)
    return unknowns - dm.rank()


def test_euler_form():
    assert euler_form(3, (1, 0), (0, 1)) == -3
    assert euler_form(3, (1, 3), (1, 3)) == 1


def test_kac_examples():
    assert kac_decompose(3, (1, 4)) == [(1, 1), (2, 1)]
    assert kac_decompose(3, (1, 1)) is None
    assert kac_decompose(3, (1, 3)) == [(2, 1)]
    assert kac_decompose(6, (6, 35)) == [(3, 1)]


def test_kac_rejects_zero():
    with pytest.raises(ValueError):
        kac_decompose(3, (0, 0))


def test_r2_is_exceptional():
    r = generic_rep(3, (1, 3), field=GF)
    assert hom_ext(r, r) == (1, 0)


def test_generic_11_not_rigid():
    r = generic_rep(3, (1, 1), field=GF)
    assert hom_ext(r, r) == (1, 2)


@pytest.mark.parametrize("field", [GF, QQ], ids=["prime", "rational"])
def test_reduced_hom_matches_full_complex(field):
    for k, j in [(1, 2), (2, 1), (-1, 2), (2, -1), (-2, 0), (3, 1)]:
        r, s = rk_rep(3, k, field), rk_rep(3, j, field)
        assert hom_ext(r, s)[0] == _hom_dim_oracle(r, s)


@pytest.mark.parametrize("k,j", [(1, 3), (2, 4), (-3, -1), (-2, 1), (0, 3)])
def test_reciprocity_small(k, j):
    a = lambda i: fibonacci(3, i)
    rj, rk = rk_rep(3, j, GF), rk_rep(3, k, GF)
    if k <= 0 < j:
        assert hom_ext(rj, rk) == (a(j - k - 1), 0)
        assert hom_ext(rk, rj) == (0, a(j - k + 1))
    else:
        assert hom_ext(rj, rk) == (0, a(j - k - 1))
        assert hom_ext(rk, rj) == (a(j - k + 1), 0)


@given(st.integers(2, 6), st.integers(0, 4), st.integers(0, 4))
@settings(max_examples=40, deadline=None)
def test_hom_minus_ext_is_euler_form(l, a, b):
    if a + b == 0:
        return
    r = generic_rep(l, (a, b), seed=1, field=GF)
    s = generic_rep(l, (b, a), seed=2, field=GF)
    hom, ext = hom_ext(r, s)
    assert hom == _hom_dim_oracle(r, s)
    assert hom - ext == euler_form(l, (a, b), (b, a))
    assert ext >= 0


def test_rep_guard():
    with pytest.raises(ResourceError):
        generic_rep(6, dim_vector(6, -5), field=GF)


def test_json_round_trip():
    r = generic_rep(3, (2, 3), field=GF)
    r2 = KroneckerRep.from_json(r.to_json(), GF)
    assert all(np.array_equal(x, y) for x, y in zip(r.arrays, r2.arrays))
