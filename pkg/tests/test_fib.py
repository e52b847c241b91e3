import pytest

from rigidacm.fib import dim_vector, ell_for, fibonacci, fibonacci_table, rank_ek, rank_fk


def test_fibonacci_l3():
    assert fibonacci_table(3, 6) == [0, 1, 3, 8, 21, 55, 144]


def test_fibonacci_l6():
    assert fibonacci_table(6, 3) == [0, 1, 6, 35]


def test_fibonacci_k0():
    assert fibonacci_table(3, 0) == [0]


@pytest.mark.parametrize("l", [2, 3, 6])
def test_recursion_and_cassini(l):
    # a_{k+1} a_{k-1} - a_k^2 = -1 is the Euler form identity <R_k, R_k> = 1
    for k in range(1, 12):
        a = fibonacci
        assert a(l, k + 1) == l * a(l, k) - a(l, k - 1)
        assert a(l, k + 1) * a(l, k - 1) - a(l, k) ** 2 == -1


def test_l2_is_linear():
    assert fibonacci_table(2, 5) == [0, 1, 2, 3, 4, 5]


def test_invalid_arguments():
    with pytest.raises(ValueError):
        fibonacci(3, -1)
    with pytest.raises(ValueError):
        fibonacci(1, 3)


def test_dim_vectors_and_ranks():
    assert ell_for(2) == 3 and ell_for(3) == 6
    assert dim_vector(3, 1) == (0, 1)
    assert dim_vector(3, 0) == (1, 0)
    assert dim_vector(3, -1) == (3, 1)
    assert [rank_fk(2, k) for k in range(-1, 4)] == [1, 1, 2, 5, 13]
    assert [rank_ek(2, k) for k in range(1, 5)] == [1, 2, 5, 13]
    assert [rank_ek(3, k) for k in range(1, 4)] == [1, 3, 17]
