"""Exact scalars and matrix rank over prime fields and the rationals.

Two fields are supported:

* :class:`PrimeField` -- residues modulo a prime ``p < 2**31``.  Products of
  two residues fit in a signed 64-bit word, which is what the compiled
  elimination kernel relies on.
* :class:`RationalField` -- :class:`fractions.Fraction`, eliminated
  fraction-free (Bareiss) on integer rows.

Matrices are stored sparsely as ``{(row, col): value}``.  Rank is computed by
first peeling off rows and columns with a single nonzero entry (each one is a
pivot on its own), then running dense Gaussian elimination on what is left.
"""
from __future__ import annotations

import random
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

try:  # compiled kernel; the numpy fallback below has the same contract
    from rigidacm._rank_kernel import rank_mod_p as _rank_mod_p_compiled
    from rigidacm._rank_kernel import rref_mod_p as _rref_mod_p_compiled
except ImportError:  # pragma: no cover - exercised when the extension is absent
    _rank_mod_p_compiled = None
    _rref_mod_p_compiled = None

PRIME_LOW = 2**30
PRIME_HIGH = 2**31

# dense elimination refuses matrices beyond this many entries
MAX_DENSE_ENTRIES = 60_000_000


class ResourceError(RuntimeError):
    """Raised when a computation would exceed a configured size guard."""


class PrimeField:
    """The field Z/pZ with elements represented by ints in ``[0, p)``."""

    def __init__(self, p: int):
        if not 2 <= p < PRIME_HIGH:
            raise ValueError(f"prime must be below 2**31, got {p}")
        self.p = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    @property
    def name(self) -> str:
        return f"p:{self.p}"

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator % self.p * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def parse(self, s: str) -> int:
        return self(Fraction(s))

    @staticmethod
    def format(x) -> str:
        return str(x)


class RationalField:
    """The rationals, elements are :class:`fractions.Fraction`."""

    # generic entries are drawn from this symmetric integer range
    random_bound = 1000

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    name = "rational"

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, x: Fraction) -> Fraction:
        return 1 / Fraction(x)

    def random(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randint(-self.random_bound, self.random_bound))

    def parse(self, s: str) -> Fraction:
        return Fraction(s)

    @staticmethod
    def format(x) -> str:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


Field = PrimeField | RationalField
QQ = RationalField()


def random_prime(seed: int) -> int:
    """Return a prime in ``[2**30, 2**31)`` chosen deterministically from ``seed``."""
    from sympy import nextprime

    rng = random.Random(seed)
    while True:
        p = int(nextprime(rng.randrange(PRIME_LOW, PRIME_HIGH - 1000)))
        if p < PRIME_HIGH:
            return p


def field_from_name(name: str, seed: int = 0) -> Field:
    """Parse ``"rational"``, ``"prime"`` (random prime from seed) or ``"p:<int>"``."""
    if name in ("rational", "Q"):
        return QQ
    if name == "prime":
        return PrimeField(random_prime(seed))
    if name.startswith("p:"):
        return PrimeField(int(name[2:]))
    raise ValueError(f"unknown field {name!r}")


@dataclass(frozen=True)
class Matrix:
    """Sparse matrix over a field; absent entries are zero."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], object] = dc_field(default_factory=dict)
    field: Field = QQ

    @classmethod
    def from_rows(cls, data: Iterable[Iterable], field: Field = QQ, cols: int | None = None) -> "Matrix":
        data = [list(r) for r in data]
        ncols = cols if cols is not None else (len(data[0]) if data else 0)
        entries = {}
        for i, row in enumerate(data):
            for j, x in enumerate(row):
                v = field(x)
                if v:
                    entries[(i, j)] = v
        return cls(len(data), ncols, entries, field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> "Matrix":
        return cls(rows, cols, {}, field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        return cls(n, n, {(i, i): field(1) for i in range(n)}, field)

    def to_rows(self) -> list[list]:
        out = [[self.field(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols


def _peel_singletons(entries: dict, rows: int, cols: int) -> tuple[int, dict]:
    """Remove rows/columns holding a single nonzero; each contributes one to the rank.

    A column whose only nonzero sits in row ``i`` is a pivot: clearing row ``i``
    against it changes nothing else, so rank(A) = 1 + rank(A minus row i, col j).
    The same holds with rows and columns exchanged.
    """
    row_sets: dict[int, set] = {}
    col_sets: dict[int, set] = {}
    for (i, j) in entries:
        row_sets.setdefault(i, set()).add(j)
        col_sets.setdefault(j, set()).add(i)
    rank = 0
    stack = [("c", j) for j, s in col_sets.items() if len(s) == 1]
    stack += [("r", i) for i, s in row_sets.items() if len(s) == 1]
    while stack:
        kind, k = stack.pop()
        if kind == "c":
            s = col_sets.get(k)
            if not s or len(s) != 1:
                continue
            (i,) = s
            j = k
        else:
            s = row_sets.get(k)
            if not s or len(s) != 1:
                continue
            (j,) = s
            i = k
        rank += 1
        for jj in row_sets.pop(i, ()):
            cs = col_sets[jj]
            cs.discard(i)
            if len(cs) == 1:
                stack.append(("c", jj))
            elif not cs:
                del col_sets[jj]
        for ii in col_sets.pop(j, ()):
            rs = row_sets.get(ii)
            if rs is None:
                continue
            rs.discard(j)
            if len(rs) == 1:
                stack.append(("r", ii))
            elif not rs:
                del row_sets[ii]
    rest = {(i, j): v for (i, j), v in entries.items() if i in row_sets and j in row_sets[i]}
    return rank, rest


def rank_mod_p_dense_numpy(a: np.ndarray, p: int) -> int:
    """Row reduction of an int64 array modulo ``p`` (modified in place)."""
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        col = a[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        below = r + 1 + np.flatnonzero(a[r + 1:, c])
        if below.size:
            jj = np.flatnonzero(a[r])
            f = a[below, c][:, None]
            a[np.ix_(below, jj)] = (a[np.ix_(below, jj)] - f * a[r, jj][None, :]) % p
        r += 1
    return r


def _dense_rank_prime(entries: dict, p: int, use_compiled: bool | None = None) -> int:
    if not entries:
        return 0
    ri = sorted({i for i, _ in entries})
    ci = sorted({j for _, j in entries})
    if len(ri) * len(ci) > MAX_DENSE_ENTRIES:
        raise ResourceError(f"dense elimination of {len(ri)}x{len(ci)} matrix exceeds guard")
    rpos = {i: k for k, i in enumerate(ri)}
    cpos = {j: k for k, j in enumerate(ci)}
    a = np.zeros((len(ri), len(ci)), dtype=np.int64)
    for (i, j), v in entries.items():
        a[rpos[i], cpos[j]] = v
    # fewer rows than columns keeps the pivot loop short
    if a.shape[0] > a.shape[1]:
        a = np.ascontiguousarray(a.T)
    if use_compiled is None:
        use_compiled = _rank_mod_p_compiled is not None
    if use_compiled:
        return int(_rank_mod_p_compiled(a, p))
    return rank_mod_p_dense_numpy(a, p)


def _bareiss_rank(rows: list[list[int]]) -> int:
    """Fraction-free elimination on integer rows."""
    a = [r[:] for r in rows if any(r)]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rank = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(rank, m) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pr = a[rank]
        pc = pr[c]
        for i in range(rank + 1, m):
            row = a[i]
            f = row[c]
            if f:
                a[i] = [(pc * x - f * y) // prev for x, y in zip(row, pr)]
            else:
                a[i] = [pc * x // prev for x in row]
        prev = pc
        rank += 1
        if rank == m:
            break
    return rank


def _rational_rank(entries: dict) -> int:
    if not entries:
        return 0
    ri = sorted({i for i, _ in entries})
    ci = sorted({j for _, j in entries})
    rpos = {i: k for k, i in enumerate(ri)}
    cpos = {j: k for k, j in enumerate(ci)}
    rows = [[Fraction(0)] * len(ci) for _ in ri]
    for (i, j), v in entries.items():
        rows[rpos[i]][cpos[j]] = Fraction(v)
    int_rows = []
    for r in rows:
        den = 1
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
        int_rows.append([int(x * den) for x in r])
    if len(int_rows) > len(ci):
        int_rows = [list(col) for col in zip(*int_rows)]
    return _bareiss_rank(int_rows)


def rank(m: Matrix, use_compiled: bool | None = None) -> int:
    """Exact rank of ``m`` over its field."""
    entries = {k: v for k, v in m.entries.items() if v}
    r, rest = _peel_singletons(entries, m.rows, m.cols)
    if isinstance(m.field, PrimeField):
        return r + _dense_rank_prime(rest, m.field.p, use_compiled)
    return r + _rational_rank(rest)


def kernel_dim(m: Matrix) -> int:
    return m.cols - rank(m)


def cokernel_dim(m: Matrix) -> int:
    return m.rows - rank(m)


def rref_mod_p_dense_numpy(a: np.ndarray, p: int) -> list[int]:
    """Reduced row echelon form modulo ``p`` in place; returns pivot columns."""
    m, n = a.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            jj = np.flatnonzero(a[r])
            f = a[others, c][:, None]
            a[np.ix_(others, jj)] = (a[np.ix_(others, jj)] - f * a[r, jj][None, :]) % p
        pivots.append(c)
        r += 1
    return pivots


def _rref_fraction(rows: list[list[Fraction]]) -> list[int]:
    m = len(rows)
    n = len(rows[0]) if m else 0
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pr = rows[r]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return pivots


def as_array(data, field: Field) -> np.ndarray:
    """Dense array over ``field``: int64 residues for prime fields, Fractions otherwise."""
    if isinstance(field, PrimeField):
        arr = np.asarray(data)
        if arr.dtype == object:
            arr = np.vectorize(lambda x: field(x), otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
        return np.ascontiguousarray(arr.astype(np.int64) % field.p)
    arr = np.asarray(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    out.flat = [Fraction(x) for x in arr.flat]
    return out


def rref_array(a: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Return (reduced row echelon form, pivot columns) of a dense array."""
    if isinstance(field, PrimeField):
        work = np.ascontiguousarray(a, dtype=np.int64).copy()
        if work.size == 0:
            return work, []
        if work.shape[0] * work.shape[1] > MAX_DENSE_ENTRIES:
            raise ResourceError(f"dense elimination of {work.shape} matrix exceeds guard")
        if _rref_mod_p_compiled is not None:
            pivots = list(_rref_mod_p_compiled(work, field.p))
        else:
            pivots = rref_mod_p_dense_numpy(work, field.p)
        return work, pivots
    rows = [[Fraction(x) for x in row] for row in a]
    pivots = _rref_fraction(rows)
    out = np.empty(a.shape, dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out, pivots


def rank_array(a: np.ndarray, field: Field) -> int:
    """Rank of a dense array over ``field``."""
    if a.size == 0:
        return 0
    if isinstance(field, PrimeField):
        work = np.ascontiguousarray(a, dtype=np.int64)
        if work.shape[0] > work.shape[1]:
            work = work.T
        work = np.ascontiguousarray(work).copy()
        if work.shape[0] * work.shape[1] > MAX_DENSE_ENTRIES:
            raise ResourceError(f"dense elimination of {work.shape} matrix exceeds guard")
        if _rank_mod_p_compiled is not None:
            return int(_rank_mod_p_compiled(work, field.p))
        return rank_mod_p_dense_numpy(work, field.p)
    return _rational_rank({(i, j): v for (i, j), v in np.ndenumerate(a) if v})


def nullspace_array(a: np.ndarray, field: Field) -> np.ndarray:
    """Basis of the right kernel of ``a`` as the columns of an (n x k) array."""
    m, n = a.shape
    red, pivots = rref_array(a, field)
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    dtype = np.int64 if isinstance(field, PrimeField) else object
    basis = np.zeros((n, len(free)), dtype=dtype)
    if dtype is object:
        basis[:] = Fraction(0)
    for t, j in enumerate(free):
        basis[j, t] = field(1)
        for r, pc in enumerate(pivots):
            v = red[r, j]
            if v:
                basis[pc, t] = field(-v)
    return basis


def left_nullspace_array(a: np.ndarray, field: Field) -> np.ndarray:
    """Basis of the left kernel of ``a`` as the rows of a (k x m) array."""
    return nullspace_array(np.ascontiguousarray(a.T), field).T


def rank_streaming(chunks, ncols: int, field: Field) -> int:
    """Rank of the matrix whose rows arrive as successive dense chunks.

    Keeps an echelon basis of the rows seen so far and stops as soon as it
    spans all ``ncols`` columns, which certifies full column rank early.
    """
    if ncols == 0:
        return 0
    dtype = np.int64 if isinstance(field, PrimeField) else object
    basis = np.zeros((0, ncols), dtype=dtype)
    for chunk in chunks:
        if chunk.shape[0] == 0:
            continue
        red, pivots = rref_array(np.vstack([basis, chunk]), field)
        basis = np.ascontiguousarray(red[: len(pivots)])
        if len(pivots) == ncols:
            break
    return basis.shape[0]


def compiled_available() -> bool:
    return _rank_mod_p_compiled is not None
