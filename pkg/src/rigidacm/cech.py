"""Hypercohomology of free complexes on P^n.

Two engines are provided.

``method="cech"`` is the brute-force oracle: the Cech double complex of C(t)
on the standard affine cover, with every localization cut down to Laurent
monomials whose exponents are >= -M on the inverted variables.  For
M = max(0, max_d(-(d+t)) - n) + 1 every H^n class of every term survives the
cut, so each column of the truncated double complex has the same Cech
cohomology as the untruncated one and the total cohomology is unchanged.

``method="graded"`` uses that a line bundle O(e) has cohomology only in
degrees 0 and n.  The hypercohomology spectral sequence then has two rows:
G (global sections, polynomials of degree e+t) and L (top cohomology,
inverse monomials x^{-1-u}, |u| = -(e+t)-n-1, on which a polynomial acts by
lowering u).  The only possible differential goes from H^{j-n}(L) in total
degree j to H^{j+1}(G); if no such pair of groups is simultaneously nonzero,
h^j = h^j(G) + h^{j-n}(L).  ``method="auto"`` uses this and falls back to the
Cech engine when the degeneration test fails.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

from rigidacm.fieldlinalg import Matrix, ResourceError, rank
from rigidacm.sheafcx import FreeComplex, dual, monomials, tensor

# total Cech dimension refused beyond this many basis vectors per degree
MAX_CECH_DIM = 400_000


def truncation_bound(c: FreeComplex, t: int) -> int:
    twists = c.twists()
    if not twists:
        return 1
    return max(0, max(-(d + t) for d in twists) - c.n) + 1


# --- graded engine -----------------------------------------------------------

@lru_cache(maxsize=None)
def _index(nvars: int, degree: int) -> dict:
    return {m: i for i, m in enumerate(monomials(nvars, degree))}


def _graded_rank(c: FreeComplex, p: int, t: int, top: bool) -> int:
    """Rank of d^p on global sections (top=False) or on top cohomology (top=True)."""
    block = c.diff(p)
    if not block:
        return 0
    n, nv = c.n, c.n + 1
    src, dst = c.term(p), c.term(p + 1)

    def basis_degree(e):
        return -(e + t) - n - 1 if top else e + t

    col_off, row_off = _offsets(src, basis_degree, nv), _offsets(dst, basis_degree, nv)
    entries: dict = {}
    for (i, j), f in block.items():
        ds, dt = basis_degree(src[j]), basis_degree(dst[i])
        if ds < 0 or dt < 0:
            continue
        tgt_index = _index(nv, dt)
        for k, m in enumerate(monomials(nv, ds)):
            col = col_off[j] + k
            for a, v in f.items():
                if top:
                    u = tuple(x - y for x, y in zip(m, a))
                    if min(u) < 0:
                        continue
                else:
                    u = tuple(x + y for x, y in zip(m, a))
                key = (row_off[i] + tgt_index[u], col)
                s = entries.get(key, 0) + v
                entries[key] = s
    entries = {k: v for k, v in entries.items() if c.field(v)}
    entries = {k: c.field(v) for k, v in entries.items()}
    return rank(Matrix(row_off[-1], col_off[-1], entries, c.field))


def _offsets(twists, basis_degree, nvars) -> list[int]:
    out = [0]
    for e in twists:
        d = basis_degree(e)
        out.append(out[-1] + (comb(d + nvars - 1, nvars - 1) if d >= 0 else 0))
    return out


def _graded_dims(c: FreeComplex, t: int, top: bool) -> dict[int, int]:
    n = c.n
    degs = c.degrees()
    if not degs:
        return {}
    dim = {}
    for p in degs:
        total = 0
        for e in c.term(p):
            d = -(e + t) - n - 1 if top else e + t
            if d >= 0:
                total += comb(d + n, n)
        dim[p] = total
    rk = {p: _graded_rank(c, p, t, top) if dim.get(p) and dim.get(p + 1) else 0 for p in degs}
    out = {}
    for p in degs:
        h = dim[p] - rk.get(p, 0) - rk.get(p - 1, 0)
        if h:
            out[p] = h
    return out


def _hyper_graded(c: FreeComplex, t: int) -> dict[int, int] | None:
    g = _graded_dims(c, t, top=False)
    l = _graded_dims(c, t, top=True)
    n = c.n
    for p in l:
        if g.get(p + n + 1):
            return None
    out = dict(g)
    for p, h in l.items():
        out[p + n] = out.get(p + n, 0) + h
    return out


# --- Cech engine ---------------------------------------------------------------

def _box_monomials(nvars: int, degree: int, inverted: tuple[int, ...], bound: int):
    """Laurent monomials of total ``degree``, exponent >= -bound on ``inverted``, >= 0 elsewhere."""
    shift_total = degree + bound * len(inverted)
    out = []
    for u in monomials(nvars, shift_total):
        out.append(tuple(x - bound if i in inverted else x for i, x in enumerate(u)))
    return out


def _hyper_cech(c: FreeComplex, t: int, bound: int | None = None) -> dict[int, int]:
    nv, field = c.n + 1, c.field
    m_bound = truncation_bound(c, t) if bound is None else bound
    degs = c.degrees()
    if not degs:
        return {}
    subsets = {q: list(combinations(range(nv), q + 1)) for q in range(nv)}
    # basis of total degree s: blocks (p, I, summand j) each carrying a list of monomials
    blocks: dict[int, list] = {}
    mono_cache: dict = {}
    for p in degs:
        for q in range(nv):
            for inv in subsets[q]:
                for j, e in enumerate(c.term(p)):
                    key = (e + t, inv)
                    if key not in mono_cache:
                        mono_cache[key] = _box_monomials(nv, e + t, inv, m_bound)
                    blocks.setdefault(p + q, []).append((p, inv, j, mono_cache[key]))
    offsets: dict = {}
    dims: dict = {}
    for s, lst in blocks.items():
        off = 0
        for p, inv, j, monos in lst:
            offsets[(p, inv, j)] = off
            off += len(monos)
        dims[s] = off
        if off > MAX_CECH_DIM:
            raise ResourceError(f"Cech complex of dimension {off} in total degree {s} exceeds guard")
    positions: dict = {}

    def pos(monos):
        k = id(monos)
        if k not in positions:
            positions[k] = {m: i for i, m in enumerate(monos)}
        return positions[k]

    ranks = {}
    for s in sorted(blocks):
        if s + 1 not in blocks:
            ranks[s] = 0
            continue
        entries: dict = {}
        for p, inv, j, monos in blocks[s]:
            col0 = offsets[(p, inv, j)]
            # differential of C, applied inside the same chart
            for (i, jj), f in c.diff(p).items():
                if jj != j:
                    continue
                tgt = offsets[(p + 1, inv, i)]
                tmon = mono_cache[(c.term(p + 1)[i] + t, inv)]
                tpos = pos(tmon)
                for k, m in enumerate(monos):
                    for a, v in f.items():
                        r = tgt + tpos[tuple(x + y for x, y in zip(m, a))]
                        entries[(r, col0 + k)] = entries.get((r, col0 + k), 0) + v
            # Cech restriction with sign (-1)^p
            if len(inv) < nv:
                sign = -1 if p % 2 else 1
                for extra in range(nv):
                    if extra in inv:
                        continue
                    bigger = tuple(sorted(inv + (extra,)))
                    eps = sign * (-1 if bigger.index(extra) % 2 else 1)
                    tgt = offsets[(p, bigger, j)]
                    tpos = pos(mono_cache[(c.term(p)[j] + t, bigger)])
                    for k, m in enumerate(monos):
                        r = tgt + tpos[m]
                        entries[(r, col0 + k)] = entries.get((r, col0 + k), 0) + eps
        entries = {k: field(v) for k, v in entries.items() if field(v)}
        ranks[s] = rank(Matrix(dims[s + 1], dims[s], entries, field))
    out = {}
    for s in sorted(blocks):
        h = dims[s] - ranks.get(s, 0) - ranks.get(s - 1, 0)
        if h:
            out[s] = h
    return out


# --- public interface ------------------------------------------------------------

def hyper_dims(c: FreeComplex, t: int = 0, method: str = "auto", bound: int | None = None) -> dict[int, int]:
    """All nonzero hypercohomology dimensions {degree: dim} of C(t)."""
    if method == "cech":
        return _hyper_cech(c, t, bound)
    if method not in ("auto", "graded"):
        raise ValueError(f"unknown method {method!r}")
    out = _hyper_graded(c, t)
    if out is None:
        if method == "graded":
            raise ValueError("two-row spectral sequence does not degenerate visibly; use the Cech engine")
        return _hyper_cech(c, t, bound)
    return out


def hypercohomology(c: FreeComplex, t: int = 0, method: str = "auto", lo: int = 0,
                    hi: int | None = None) -> tuple[int, ...]:
    """(h^lo, ..., h^hi) of C(t); by default the degrees 0..n."""
    hi = c.n if hi is None else hi
    dims = hyper_dims(c, t, method)
    return tuple(dims.get(i, 0) for i in range(lo, hi + 1))


def is_sheaf_like(c: FreeComplex, window: tuple[int, int] = (-4, 4), method: str = "auto") -> bool:
    """Heuristic check that C has a single cohomology sheaf, in degree 0.

    For a sheaf E in degree 0, H^j(C(t)) vanishes outside 0..n for all t and
    H^j(C(t)) = 0 for j > 0 when t >> 0.  A nonzero cohomology sheaf in another
    degree is caught either outside 0..n or in high twists.
    """
    lo, hi = window
    reg = regularity_estimate(c)
    for t in range(lo, max(hi, reg + 1) + 1):
        dims = hyper_dims(c, t, method)
        if any(j < 0 or j > c.n for j in dims):
            return False
    dims = hyper_dims(c, max(hi, reg + c.n + 1), method)
    return not any(j > 0 for j in dims)


def regularity_estimate(c: FreeComplex) -> int:
    """max over summands O(e) in degree p of (p - e); above it higher cohomology of a sheaf-like C vanishes."""
    vals = [p - e for p in c.degrees() for e in c.term(p)]
    return max(vals) if vals else 0


def ext_groups(c: FreeComplex, d: FreeComplex, method: str = "auto") -> tuple[int, ...]:
    """(ext^0, ..., ext^n) of locally free sheaves represented by C and D."""
    if c.n != d.n:
        raise ValueError("complexes live on different projective spaces")
    return hypercohomology(tensor(dual(c), d), 0, method)


@dataclass
class CohomologyTable:
    n: int
    window: tuple[int, int]
    values: dict  # (i, t) -> dim

    def __getitem__(self, key):
        return self.values.get(key, 0)

    def nonzero(self) -> dict:
        return {k: v for k, v in self.values.items() if v}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "window": list(self.window),
            "h": {f"{i},{t}": v for (i, t), v in sorted(self.values.items(), key=lambda kv: (kv[0][1], kv[0][0]))},
        }

    @classmethod
    def from_json(cls, data: dict) -> "CohomologyTable":
        vals = {}
        for key, v in data["h"].items():
            i, t = (int(x) for x in key.split(","))
            vals[(i, t)] = int(v)
        return cls(int(data["n"]), tuple(data["window"]), vals)


def cohomology_table(c: FreeComplex, t_min: int, t_max: int, method: str = "auto",
                     twists=None) -> CohomologyTable:
    """h^i(C(t)) for i = 0..n and t in [t_min, t_max] (or only the given ``twists``)."""
    if t_min > t_max:
        raise ValueError("empty window")
    ts = range(t_min, t_max + 1) if twists is None else twists
    vals = {}
    for t in ts:
        h = hypercohomology(c, t, method)
        for i, v in enumerate(h):
            vals[(i, t)] = v
    return CohomologyTable(c.n, (t_min, t_max), vals)


def line_bundle_h(n: int, d: int) -> tuple[int, ...]:
    """Closed formulas for h^i(O(d)) on P^n."""
    out = [0] * (n + 1)
    if d >= 0:
        out[0] = comb(d + n, n)
    if d <= -n - 1:
        out[n] = comb(-d - 1, n)
    return tuple(out)
