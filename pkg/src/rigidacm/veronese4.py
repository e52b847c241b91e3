"""Riemann-Roch on P^2 (and P^3) and ACM twists on higher Veronese surfaces.

For an exceptional bundle F on P^2 with natural cohomology, h^1(F(t)) is
nonzero exactly when chi(F(t)) < 0.  Those twists lie strictly between the
two real roots of the quadratic chi(F(t)), whose distance is at most
ceil(2 sqrt(Delta) / r) <= 3 for Delta = 5 r^2 / 4 - 1.  For d >= 4 some
residue class mod d therefore avoids them all, and the corresponding twist of
F is ACM for the d-fold Veronese embedding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from rigidacm.sheafcx import ChernData

# Todd class of P^n as coefficients of 1, h, h^2, h^3
TODD = {
    2: (Fraction(1), Fraction(3, 2), Fraction(1)),
    3: (Fraction(1), Fraction(2), Fraction(11, 6), Fraction(1)),
}


class NotExceptional(ValueError):
    pass


def _integrate(n: int, ch) -> Fraction:
    """Degree-n part of ch * td(P^n)."""
    td = TODD[n]
    return sum((ch[i] * td[n - i] for i in range(n + 1)), Fraction(0))


def chi(c: ChernData, t: int = 0) -> int:
    """chi(F(t)) by Hirzebruch-Riemann-Roch."""
    val = _integrate(c.n, c.twist(t).ch)
    if val.denominator != 1:
        raise ValueError(f"non-integral Euler characteristic {val}: Chern data is not of a sheaf")
    return int(val)


@dataclass(frozen=True)
class ChiPolynomial:
    """chi(F(t)) = A t^2 + B t + C on P^2."""

    A: Fraction
    B: Fraction
    C: Fraction

    def __call__(self, t) -> Fraction:
        return self.A * t * t + self.B * t + self.C

    @property
    def discriminant(self) -> Fraction:
        return self.B * self.B - 4 * self.A * self.C


def chi_polynomial(c: ChernData) -> ChiPolynomial:
    if c.n != 2:
        raise ValueError("chi_polynomial is for P^2")
    r, ch1, ch2 = c.ch
    # chi(F(t)) = r (t+1)(t+2)/2 + ch1 (t + 3/2) + ch2
    return ChiPolynomial(r / 2, 3 * r / 2 + ch1, r + 3 * ch1 / 2 + ch2)


def _dual_ch(ch):
    return [(-1) ** i * x for i, x in enumerate(ch)]


def chi_pair(ce: ChernData, cf: ChernData) -> int:
    """chi(E, F) = sum (-1)^i ext^i(E, F) = integral of ch(E)^* ch(F) td."""
    if ce.n != cf.n:
        raise ValueError("Chern data on different projective spaces")
    n = ce.n
    a, b = _dual_ch(ce.ch), cf.ch
    prod = [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)]
    val = _integrate(n, prod)
    if val.denominator != 1:
        raise ValueError(f"non-integral pairing {val}")
    return int(val)


def discriminant(c: ChernData) -> Fraction:
    """Delta = c1^2 (1 - r) + r (2 c2 + r/4), the discriminant of chi(F(t))."""
    if c.n != 2:
        raise ValueError("discriminant is for P^2")
    r, c1, c2 = c.r, c.c1, c.c2
    return c1 * c1 * (1 - r) + r * (2 * c2 + r / 4)


def root_gap_bound(c: ChernData) -> int:
    """ceil(2 sqrt(Delta) / r), an integer upper bound on the distance between the roots."""
    delta = discriminant(c)
    if delta <= 0:
        return 0  # no two distinct real roots
    # ceil(sqrt(4 Delta / r^2)) computed exactly
    q = 4 * delta / (c.r * c.r)
    k = math.isqrt(q.numerator // q.denominator)
    while Fraction(k * k) < q:
        k += 1
    return k


def bad_twists(c: ChernData) -> list[int]:
    """All integers t with chi(F(t)) < 0."""
    p = chi_polynomial(c)
    if p.A <= 0:
        raise ValueError("rank must be positive")
    # negative values only occur strictly between the roots, which lie within
    # half the root gap of the vertex -B / 2A
    vertex = -p.B / (2 * p.A)
    reach = root_gap_bound(c) + 1
    lo, hi = math.floor(vertex) - reach, math.ceil(vertex) + reach
    out = [t for t in range(lo, hi + 1) if p(t) < 0]
    return sorted(out)


def find_acm_twist(c: ChernData, d: int) -> tuple[int, list[int]]:
    """Smallest t >= 0 whose class t + dZ misses every twist with chi < 0.

    The bundle is assumed exceptional (checked through chi(F, F) = 1) and to
    have natural cohomology (taken as a hypothesis, not verified).
    """
    if d < 4:
        raise ValueError("find_acm_twist needs d >= 4")
    if chi_pair(c, c) != 1:
        raise NotExceptional(f"chi(F, F) = {chi_pair(c, c)}, expected 1")
    bad = bad_twists(c)
    if len(bad) > 3:
        raise RuntimeError(f"{len(bad)} twists with chi < 0 exceeds the gap bound 3")
    residues = {b % d for b in bad}
    for t in range(d):
        if t % d not in residues:
            return t, bad
    raise RuntimeError("no admissible residue class")  # unreachable for d > 3
