"""Bounded complexes of sums of line bundles on P^n.

A :class:`FreeComplex` stores, for every cohomological degree p, the list of
twists of its line-bundle summands (one entry per copy of O(d)) and the
differential C^p -> C^{p+1} as a sparse matrix of homogeneous polynomials.
Polynomials are dicts ``{exponent tuple: coefficient}``; entry (i, j) of the
differential in degree p maps summand j of C^p to summand i of C^{p+1} and has
degree ``twist_i - twist_j``.

Every sheaf the package handles (Omega^p(t), F_k, E_k, their twists and duals)
is represented this way, and all cohomology is computed from this form.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from rigidacm.fib import ell_for, fibonacci
from rigidacm.fieldlinalg import QQ, Field, field_from_name
from rigidacm.kron import CertificationError, KroneckerRep, rk_rep

Poly = dict  # {exponent tuple: field element}


# --- polynomials -----------------------------------------------------------

def monomial(n: int, i: int | None = None, coef=1) -> Poly:
    """x_i (or the constant ``coef`` when ``i`` is None) in n+1 variables."""
    e = [0] * (n + 1)
    if i is not None:
        e[i] = 1
    return {tuple(e): coef}


def poly_add(f: Poly, g: Poly, field: Field, scale=1) -> Poly:
    """f + scale * g."""
    out = dict(f)
    for m, c in g.items():
        v = field(out.get(m, 0) + scale * c)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_mul(f: Poly, g: Poly, field: Field) -> Poly:
    out: dict = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: v for m, c in out.items() if (v := field(c))}


def poly_scale(f: Poly, s, field: Field) -> Poly:
    return {m: v for m, c in f.items() if (v := field(c * s))}


def poly_degree(f: Poly) -> int | None:
    return sum(next(iter(f))) if f else None


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total ``degree`` in ``nvars`` variables, lexicographically descending."""
    if degree < 0:
        return ()
    if nvars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        out.extend((first,) + rest for rest in monomials(nvars - 1, degree - first))
    return tuple(out)


# --- complexes -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FreeComplex:
    n: int
    terms: dict  # degree -> tuple of twists
    diffs: dict  # degree p -> {(row in C^{p+1}, col in C^p): Poly}
    field: Field = QQ

    def degrees(self) -> list[int]:
        return sorted(p for p, t in self.terms.items() if t)

    def term(self, p: int) -> tuple[int, ...]:
        return self.terms.get(p, ())

    def diff(self, p: int) -> dict:
        return self.diffs.get(p, {})

    @property
    def euler_rank(self) -> int:
        return sum(-len(t) if p % 2 else len(t) for p, t in self.terms.items())

    def twists(self) -> set[int]:
        return {d for t in self.terms.values() for d in t}

    def is_zero(self) -> bool:
        return not any(self.terms.values())

    def check(self) -> None:
        """Validate shapes, homogeneity and d o d = 0; raise ValueError otherwise."""
        for p, block in self.diffs.items():
            src, dst = self.term(p), self.term(p + 1)
            for (i, j), f in block.items():
                if not (0 <= i < len(dst) and 0 <= j < len(src)):
                    raise ValueError(f"entry ({i},{j}) of d^{p} out of range")
                want = dst[i] - src[j]
                for m in f:
                    if len(m) != self.n + 1 or sum(m) != want or min(m) < 0:
                        raise ValueError(f"entry ({i},{j}) of d^{p} is not homogeneous of degree {want}")
        for p in self.diffs:
            if p + 1 in self.diffs:
                comp = compose(self.diff(p + 1), self.diff(p), self.field)
                if comp:
                    raise ValueError(f"d^{p + 1} o d^{p} is nonzero")

    def normal_form(self) -> "FreeComplex":
        """Summands sorted by twist in each degree, zero entries and empty degrees dropped."""
        perms = {}
        terms = {}
        for p, t in self.terms.items():
            if not t:
                continue
            order = sorted(range(len(t)), key=lambda i: t[i])
            perms[p] = {old: new for new, old in enumerate(order)}
            terms[p] = tuple(t[i] for i in order)
        diffs = {}
        for p, block in self.diffs.items():
            if p not in terms or p + 1 not in terms:
                continue
            nb = {(perms[p + 1][i], perms[p][j]): f for (i, j), f in block.items() if f}
            if nb:
                diffs[p] = dict(sorted(nb.items()))
        return FreeComplex(self.n, terms, diffs, self.field)

    def to_json(self, with_field: bool = True) -> dict:
        nf = self.normal_form()
        fmt = self.field.format
        terms = {}
        for p, t in nf.terms.items():
            runs = []
            for d in t:
                if runs and runs[-1]["twist"] == d:
                    runs[-1]["mult"] += 1
                else:
                    runs.append({"twist": d, "mult": 1})
            terms[str(p)] = runs
        diffs = {}
        for p, block in nf.diffs.items():
            rows, cols = len(nf.term(p + 1)), len(nf.term(p))
            mat = [[[] for _ in range(cols)] for _ in range(rows)]
            for (i, j), f in block.items():
                mat[i][j] = [{"coef": fmt(c), "monomial": list(m)} for m, c in sorted(f.items(), reverse=True)]
            diffs[str(p)] = mat
        out = {"n": self.n, "terms": terms, "diffs": diffs}
        if with_field:
            out["field"] = self.field.name
        return out

    @classmethod
    def from_json(cls, data: dict, field: Field | None = None) -> "FreeComplex":
        if field is None:
            field = field_from_name(data["field"]) if "field" in data else QQ
        n = int(data["n"])
        terms = {}
        for p, runs in data["terms"].items():
            t = []
            for r in runs:
                if int(r["mult"]) < 0:
                    raise ValueError("negative multiplicity")
                t.extend([int(r["twist"])] * int(r["mult"]))
            terms[int(p)] = tuple(t)
        diffs = {}
        for p, mat in data.get("diffs", {}).items():
            block = {}
            for i, row in enumerate(mat):
                for j, entry in enumerate(row):
                    f = {}
                    for term in entry:
                        m = tuple(int(e) for e in term["monomial"])
                        c = field.parse(str(term["coef"]))
                        if c:
                            f[m] = field(f.get(m, 0) + c)
                    f = {m: c for m, c in f.items() if c}
                    if f:
                        block[(i, j)] = f
            diffs[int(p)] = block
        cx = cls(n, terms, diffs, field)
        cx.check()
        return cx

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __eq__(self, other):
        if not isinstance(other, FreeComplex):
            return NotImplemented
        return self.field == other.field and self.dumps() == other.dumps()

    def __hash__(self):
        return hash(self.dumps())


def compose(g: dict, f: dict, field: Field) -> dict:
    """Product of sparse polynomial matrices g o f."""
    by_row: dict = {}
    for (k, j), p in f.items():
        by_row.setdefault(k, []).append((j, p))
    out: dict = {}
    for (i, k), q in g.items():
        for j, p in by_row.get(k, ()):
            out[(i, j)] = poly_add(out.get((i, j), {}), poly_mul(q, p, field), field)
    return {key: v for key, v in out.items() if v}


def line_bundle(n: int, d: int = 0, field: Field = QQ) -> FreeComplex:
    return FreeComplex(n, {0: (d,)}, {}, field)


def koszul_model(n: int, p: int, t: int, field: Field = QQ) -> FreeComplex:
    """Omega^p(t) as the complex wedge^p V (t-p) -> ... -> O(t) in degrees 0..p.

    The summands in degree q are indexed by the (p-q)-subsets of {0..n} in
    lexicographic order, and the differential is the Koszul contraction
    e_{i_1..i_k} -> sum_j (-1)^j x_{i_j} e_{i_1..^i_j..i_k}.
    """
    if not 0 <= p <= n:
        raise ValueError(f"p must lie in 0..{n}, got {p}")
    subsets = {q: list(combinations(range(n + 1), p - q)) for q in range(p + 1)}
    terms = {q: (t - p + q,) * len(subsets[q]) for q in range(p + 1)}
    diffs = {}
    for q in range(p):
        index = {s: i for i, s in enumerate(subsets[q + 1])}
        block = {}
        for col, s in enumerate(subsets[q]):
            for j, v in enumerate(s):
                row = index[s[:j] + s[j + 1:]]
                block[(row, col)] = monomial(n, v, field(-1 if j % 2 else 1))
        diffs[q] = block
    return FreeComplex(n, terms, diffs, field)


def arrow_pairs(n: int) -> list[tuple[int, int]]:
    """Basis e_i ^ e_j (i < j) of H^0(Omega(2)), lexicographic; one per Kronecker arrow."""
    return list(combinations(range(n + 1), 2))


def realize_phi(rep: KroneckerRep, n: int) -> FreeComplex:
    """The cone of O(-1)^a -> Omega(1)^b given by the arrow matrices.

    Arrow (i, j) lifts O(-1) -> O^{n+1} to the vector with x_j in slot i and
    -x_i in slot j, which is killed by the contraction to O(1).  O(-1)^a sits in
    degree -1 and the Koszul model of Omega(1)^b in degrees 0, 1.
    """
    if rep.l != ell_for(n):
        raise ValueError(f"P^{n} needs {ell_for(n)} arrows, representation has {rep.l}")
    field = rep.field
    a, b = rep.dims
    pairs = arrow_pairs(n)
    terms = {-1: (-1,) * a, 0: (0,) * ((n + 1) * b), 1: (1,) * b}
    lift: dict = {}
    for arr, (i, j) in zip(rep.arrays, pairs):
        for (s, c), v in zip(np.ndindex(arr.shape), arr.flat):
            if not v:
                continue
            v = field(v)
            for slot, var, sign in ((i, j, 1), (j, i, -1)):
                key = (s * (n + 1) + slot, c)
                f = poly_add(lift.get(key, {}), monomial(n, var, v), field, sign)
                if f:
                    lift[key] = f
                else:
                    lift.pop(key, None)
    contraction = {(s, s * (n + 1) + v): monomial(n, v, field(1)) for s in range(b) for v in range(n + 1)}
    return FreeComplex(n, terms, {-1: lift, 0: contraction}, field)


def shift(c: FreeComplex, j: int) -> FreeComplex:
    """C[j]: degree p of the result is degree p + j of C, differential times (-1)^j."""
    sign = c.field(-1 if j % 2 else 1)
    terms = {p - j: t for p, t in c.terms.items()}
    diffs = {p - j: {k: poly_scale(f, sign, c.field) for k, f in block.items()} for p, block in c.diffs.items()}
    return FreeComplex(c.n, terms, diffs, c.field)


def twist(c: FreeComplex, s: int) -> FreeComplex:
    terms = {p: tuple(d + s for d in t) for p, t in c.terms.items()}
    return FreeComplex(c.n, terms, c.diffs, c.field)


def dual(c: FreeComplex) -> FreeComplex:
    """Term-wise dual Hom(C, O): twists and degrees negated, differentials transposed."""
    terms = {-p: tuple(-d for d in t) for p, t in c.terms.items()}
    diffs = {-p - 1: {(j, i): f for (i, j), f in block.items()} for p, block in c.diffs.items()}
    return FreeComplex(c.n, terms, diffs, c.field)


def direct_sum(*cs: FreeComplex) -> FreeComplex:
    if not cs:
        raise ValueError("direct_sum needs at least one complex")
    n, field = cs[0].n, cs[0].field
    degrees = sorted({p for c in cs for p in c.terms})
    terms = {p: () for p in degrees}
    diffs: dict = {}
    offsets = {p: 0 for p in degrees}
    for c in cs:
        if c.n != n or c.field != field:
            raise ValueError("summands must live on the same P^n over the same field")
        for p, block in c.diffs.items():
            ro, co = offsets.get(p + 1, 0), offsets[p]
            tgt = diffs.setdefault(p, {})
            for (i, j), f in block.items():
                tgt[(i + ro, j + co)] = f
        for p, t in c.terms.items():
            terms[p] = terms[p] + t
            offsets[p] += len(t)
    return FreeComplex(n, terms, diffs, field)


def tensor(c: FreeComplex, d: FreeComplex) -> FreeComplex:
    """Total complex of C (x) D with d(x (x) y) = dx (x) y + (-1)^p x (x) dy."""
    if c.n != d.n or c.field != d.field:
        raise ValueError("factors must live on the same P^n over the same field")
    field = c.field
    index: dict = {}
    terms: dict = {}
    for p in c.degrees():
        for q in d.degrees():
            deg = p + q
            lst = terms.setdefault(deg, [])
            for i, e in enumerate(c.term(p)):
                for j, f in enumerate(d.term(q)):
                    index[(p, i, q, j)] = len(lst)
                    lst.append(e + f)
    diffs: dict = {}
    for p in c.degrees():
        for q in d.degrees():
            deg = p + q
            block = diffs.setdefault(deg, {})
            for (r, i), f in c.diff(p).items():
                for j in range(len(d.term(q))):
                    block[(index[(p + 1, r, q, j)], index[(p, i, q, j)])] = f
            sign = field(-1 if p % 2 else 1)
            for (r, j), g in d.diff(q).items():
                g = poly_scale(g, sign, field)
                for i in range(len(c.term(p))):
                    block[(index[(p, i, q + 1, r)], index[(p, i, q, j)])] = g
    return FreeComplex(c.n, {k: tuple(v) for k, v in terms.items()}, {k: v for k, v in diffs.items() if v}, field)


def minimize(c: FreeComplex) -> FreeComplex:
    """Cancel every unit (nonzero constant) entry of the differentials.

    If the entry u of d^p joins summand x of C^p to summand y of C^{p+1}, the
    complex is homotopy equivalent to the one without x and y in which d^p
    becomes eps - gamma u^{-1} delta (gamma: column x, delta: row y).
    """
    field = c.field
    terms = {p: list(t) for p, t in c.terms.items()}
    diffs = {p: dict(b) for p, b in c.diffs.items()}
    while True:
        pick = None
        for p in sorted(diffs):
            for (i, j), f in diffs[p].items():
                if terms[p + 1][i] == terms[p][j]:
                    pick = (p, i, j, next(iter(f.values())))
                    break
            if pick:
                break
        if pick is None:
            break
        p, y, x, u = pick
        block = diffs[p]
        gamma = {i: f for (i, j), f in block.items() if j == x and i != y}
        delta = {j: f for (i, j), f in block.items() if i == y and j != x}
        scale = field(-field.inv(u))
        new = {k: f for k, f in block.items() if k[0] != y and k[1] != x}
        for i, g in gamma.items():
            for j, h in delta.items():
                f = poly_add(new.get((i, j), {}), poly_mul(g, h, field), field, scale)
                if f:
                    new[(i, j)] = f
                else:
                    new.pop((i, j), None)
        diffs[p] = _reindex(new, y, x)
        if p - 1 in diffs:
            diffs[p - 1] = _reindex({k: f for k, f in diffs[p - 1].items() if k[0] != x}, x, None)
        if p + 1 in diffs:
            diffs[p + 1] = _reindex({k: f for k, f in diffs[p + 1].items() if k[1] != y}, None, y)
        del terms[p][x]
        del terms[p + 1][y]
    return FreeComplex(
        c.n,
        {p: tuple(t) for p, t in terms.items() if t},
        {p: b for p, b in diffs.items() if b},
        field,
    )


def _reindex(block: dict, row_gone: int | None, col_gone: int | None) -> dict:
    out = {}
    for (i, j), f in block.items():
        if row_gone is not None and i > row_gone:
            i -= 1
        if col_gone is not None and j > col_gone:
            j -= 1
        out[(i, j)] = f
    return out


# --- the bundles F_k and E_k -------------------------------------------------

def fib_bundle(n: int, k: int, field: Field = QQ, seed: int = 0) -> FreeComplex:
    """F_k as Phi(R_k) for k >= 1 and Phi(R_k)[-1] for k <= 0."""
    rep = rk_rep(ell_for(n), k, field, seed)
    c = realize_phi(rep, n)
    return c if k >= 1 else shift(c, -1)


def omega2_map_cone(n: int, coeffs, a_src: int, a_tgt: int, field: Field) -> FreeComplex:
    """Cone of Omega^2(1)^{a_src} -> O(-1)^{a_tgt} in the Koszul model.

    A map Omega^2(1) -> O(-1) is a scalar row on the degree-0 term
    O(-1)^{binom(n+1,2)} of the Koszul model; ``coeffs`` is the
    a_tgt x (binom(n+1,2) * a_src) scalar matrix of all of them.
    """
    k = koszul_model(n, 2, 1, field)
    r0, r1, r2 = (len(k.term(q)) for q in range(3))
    terms = {
        -1: k.term(0) * a_src,
        0: k.term(1) * a_src + (-1,) * a_tgt,
        1: k.term(2) * a_src,
    }
    minus = field(-1)
    d_m1: dict = {}
    d_0: dict = {}
    for s in range(a_src):
        for (i, j), f in k.diff(0).items():
            d_m1[(s * r1 + i, s * r0 + j)] = poly_scale(f, minus, field)
        for (i, j), f in k.diff(1).items():
            d_0[(s * r2 + i, s * r1 + j)] = poly_scale(f, minus, field)
    const = (0,) * (n + 1)
    for t in range(a_tgt):
        for j in range(r0 * a_src):
            v = field(coeffs[t][j])
            if v:
                d_m1[(a_src * r1 + t, j)] = {const: v}
    return FreeComplex(n, terms, {-1: d_m1, 0: d_0}, field)


def ek_bundle(n: int, k: int, field: Field = QQ, seed: int = 0, certify: bool = True,
              retries: int = 4) -> FreeComplex:
    """E_k = coker(Omega^2(1)^{a_{k-1}} -> O(-1)^{a_k}) for a generic map, minimized.

    With ``certify`` the result is checked to be exceptional (self-Ext equal to
    (1, 0, ..., 0)) and to have cohomology sheaves only in degree 0; a new
    random map is tried on failure.
    """
    if k < 1:
        raise ValueError(f"E_k is defined for k >= 1, got {k}")
    l = ell_for(n)
    a_src, a_tgt = fibonacci(l, k - 1), fibonacci(l, k)
    for attempt in range(retries):
        rng = random.Random(f"ek:{n}:{k}:{seed}:{attempt}")
        coeffs = [[field.random(rng) for _ in range(l * a_src)] for _ in range(a_tgt)]
        c = minimize(omega2_map_cone(n, coeffs, a_src, a_tgt, field))
        if not certify or _certify_bundle(c):
            return c
    raise CertificationError(f"E_{k} on P^{n} failed certification after {retries} attempts")


def _certify_bundle(c: FreeComplex) -> bool:
    from rigidacm.cech import ext_groups, is_sheaf_like

    if not is_sheaf_like(c):
        return False
    ext = ext_groups(c, c)
    return ext[0] == 1 and not any(ext[1:])


# --- Chern data ---------------------------------------------------------------

@dataclass(frozen=True)
class ChernData:
    """Rank and Chern classes on P^n (c3 only used when n = 3)."""

    n: int
    r: Fraction
    c1: Fraction
    c2: Fraction
    c3: Fraction = Fraction(0)

    @classmethod
    def from_ch(cls, n: int, ch) -> "ChernData":
        r, ch1, ch2, ch3 = (Fraction(x) for x in (list(ch) + [0, 0, 0])[:4])
        c1 = ch1
        c2 = (c1 * c1 - 2 * ch2) / 2
        c3 = (6 * ch3 - c1 ** 3 + 3 * c1 * c2) / 3 if n >= 3 else Fraction(0)
        return cls(n, r, c1, c2, c3)

    @property
    def ch(self) -> tuple[Fraction, ...]:
        c1, c2, c3 = self.c1, self.c2, self.c3
        ch2 = (c1 * c1 - 2 * c2) / 2
        ch3 = (c1 ** 3 - 3 * c1 * c2 + 3 * c3) / 6 if self.n >= 3 else Fraction(0)
        return (self.r, c1, ch2, ch3)[: self.n + 1]

    def as_tuple(self) -> tuple:
        vals = (self.r, self.c1, self.c2) + ((self.c3,) if self.n >= 3 else ())
        return tuple(int(v) if v.denominator == 1 else v for v in vals)

    def twist(self, t: int) -> "ChernData":
        ch = self.ch
        out = [Fraction(0)] * (self.n + 1)
        # multiply by exp(t h), truncated at h^n
        for i, a in enumerate(ch):
            for j in range(self.n + 1 - i):
                out[i + j] += a * Fraction(t ** j) / _fact(j)
        return ChernData.from_ch(self.n, out)

    def __add__(self, other: "ChernData") -> "ChernData":
        return ChernData.from_ch(self.n, [a + b for a, b in zip(self.ch, other.ch)])


def _fact(j: int) -> int:
    out = 1
    for i in range(2, j + 1):
        out *= i
    return out


def line_bundle_ch(n: int, e: int) -> list[Fraction]:
    return [Fraction(e ** i, _fact(i)) for i in range(n + 1)]


def chern(c: FreeComplex) -> ChernData:
    """Alternating sum of the Chern characters of the terms."""
    ch = [Fraction(0)] * (c.n + 1)
    for p, t in c.terms.items():
        sign = -1 if p % 2 else 1
        for e in t:
            for i, v in enumerate(line_bundle_ch(c.n, e)):
                ch[i] += sign * v
    return ChernData.from_ch(c.n, ch)


def omega_chern(n: int, p: int, t: int = 0) -> ChernData:
    return chern(koszul_model(n, p, t))


__all__ = [
    "ChernData",
    "FreeComplex",
    "chern",
    "compose",
    "direct_sum",
    "dual",
    "ek_bundle",
    "fib_bundle",
    "koszul_model",
    "line_bundle",
    "minimize",
    "realize_phi",
    "shift",
    "tensor",
    "twist",
]
