"""Fibonacci numbers a_{l,k} and the ranks of the bundles F_k and E_k."""
from __future__ import annotations

from functools import lru_cache


def ell_for(n: int) -> int:
    """Number of Kronecker arrows attached to P^n, i.e. binomial(n+1, 2)."""
    return n * (n + 1) // 2


@lru_cache(maxsize=None)
def fibonacci(l: int, k: int) -> int:
    """a_{l,0} = 0, a_{l,1} = 1, a_{l,k+1} = l*a_{l,k} - a_{l,k-1}."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if l < 2:
        raise ValueError(f"l must be at least 2, got {l}")
    prev, cur = 0, 1
    if k == 0:
        return 0
    for _ in range(k - 1):
        prev, cur = cur, l * cur - prev
    return cur


def fibonacci_table(l: int, k_max: int) -> list[int]:
    return [fibonacci(l, k) for k in range(k_max + 1)]


def dim_vector(l: int, k: int) -> tuple[int, int]:
    """Dimension vector of the rigid simple R_k.

    For k >= 1 this is (a_{k-1}, a_k); for k <= 0 we use (a_{1-k}, a_{-k}),
    so that R_0 is the simple at the source and F_0 = O(-1).
    """
    if k >= 1:
        return fibonacci(l, k - 1), fibonacci(l, k)
    return fibonacci(l, 1 - k), fibonacci(l, -k)


def rank_fk(n: int, k: int) -> int:
    """Rank of the Fibonacci bundle F_k on P^n (rank Omega(1) = n)."""
    l = ell_for(n)
    if k >= 1:
        return n * fibonacci(l, k) - fibonacci(l, k - 1)
    return fibonacci(l, 1 - k) - n * fibonacci(l, -k)


def rank_omega(n: int, p: int) -> int:
    from math import comb

    return comb(n, p)


def rank_ek(n: int, k: int) -> int:
    """Rank of E_k = coker(Omega^2(1)^{a_{k-1}} -> O(-1)^{a_k})."""
    if k < 1:
        raise ValueError(f"E_k is defined for k >= 1, got {k}")
    l = ell_for(n)
    return fibonacci(l, k) - rank_omega(n, 2) * fibonacci(l, k - 1)
