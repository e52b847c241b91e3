"""Representations of the l-th Kronecker quiver.

A representation with dimension vector (a, b) is a list of ``l`` matrices of
shape b x a (maps from the source space k^a to the sink space k^b).

Hom and Ext^1 are read off the two-term complex

    Hom(V0, W0) + Hom(V1, W1) --> sum_i Hom(V0, W1),  (p0, p1) -> (p1 A_i - B_i p0)_i

whose kernel is Hom and whose cokernel is Ext^1.  For large representations
the kernel is computed after shrinking both arguments with one of two exact
linear-algebra reductions (see :func:`_hom_dim`).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from rigidacm.fib import dim_vector, fibonacci
from rigidacm.fieldlinalg import (
    QQ,
    Field,
    Matrix,
    PrimeField,
    ResourceError,
    as_array,
    left_nullspace_array,
    nullspace_array,
    rank_array,
    rank_streaming,
)

# direct Hom-complex matrices larger than this are not attempted
MAX_HOM_ENTRIES = 40_000_000
# generic representations are not generated beyond this many matrix entries
MAX_REP_ENTRIES = 20_000_000
# one-sided Hom computations are refused beyond this many unknowns
MAX_ONE_SIDED_UNKNOWNS = 4_000
# a shift step is refused if a resulting representation has more matrix entries
MAX_STEP_ENTRIES = 10_000_000
# below this size the Hom complex is solved directly without reductions
SMALL_HOM_ENTRIES = 250_000


class CertificationError(RuntimeError):
    """A generic construction failed its exceptionality certificate."""


@dataclass(frozen=True, eq=False)
class KroneckerRep:
    l: int
    dims: tuple[int, int]
    arrays: tuple[np.ndarray, ...]
    field: Field = QQ

    def __post_init__(self):
        if self.l < 2:
            raise ValueError("Kronecker quiver needs at least two arrows")
        if len(self.arrays) != self.l:
            raise ValueError(f"expected {self.l} matrices, got {len(self.arrays)}")
        a, b = self.dims
        for m in self.arrays:
            if m.shape != (b, a):
                raise ValueError(f"arrow matrix has shape {m.shape}, expected {(b, a)}")

    @classmethod
    def from_matrices(cls, l: int, dims, matrices, field: Field = QQ) -> "KroneckerRep":
        a, b = dims
        arrays = []
        for m in matrices:
            rows = m.to_rows() if isinstance(m, Matrix) else m
            arr = as_array(rows, field) if len(rows) else as_array(np.zeros((b, a), dtype=np.int64), field)
            arrays.append(arr.reshape(b, a))
        return cls(l, (a, b), tuple(arrays), field)

    @property
    def matrices(self) -> tuple[Matrix, ...]:
        a, b = self.dims
        return tuple(
            Matrix(b, a, {(i, j): v for (i, j), v in np.ndenumerate(arr) if v}, self.field)
            for arr in self.arrays
        )

    @cached_property
    def _stacked_columns(self) -> np.ndarray:
        """[A_1 | ... | A_l], shape b x la."""
        a, b = self.dims
        if a == 0:
            return np.zeros((b, 0), dtype=self.arrays[0].dtype)
        return np.ascontiguousarray(np.hstack(self.arrays))

    @cached_property
    def _stacked_rows(self) -> np.ndarray:
        """[A_1; ...; A_l], shape lb x a."""
        a, b = self.dims
        if b == 0:
            return np.zeros((0, a), dtype=self.arrays[0].dtype)
        return np.ascontiguousarray(np.vstack(self.arrays))

    @cached_property
    def generated_at_source(self) -> bool:
        """True when sum_i A_i : k^{la} -> k^b is onto."""
        b = self.dims[1]
        return b == 0 or rank_array(self._stacked_columns, self.field) == b

    @cached_property
    def cogenerated_at_sink(self) -> bool:
        """True when (A_i)_i : k^a -> k^{lb} is injective."""
        a = self.dims[0]
        return a == 0 or rank_array(self._stacked_rows, self.field) == a

    @cached_property
    def shift_down(self) -> "KroneckerRep":
        """Representation on (ker of [A_1|...|A_l], k^a); needs generated_at_source."""
        a, b = self.dims
        kern = nullspace_array(self._stacked_columns, self.field)
        m = kern.shape[1]
        arrays = tuple(np.ascontiguousarray(kern[i * a:(i + 1) * a, :]) for i in range(self.l))
        return KroneckerRep(self.l, (m, a), arrays, self.field)

    @cached_property
    def shift_up(self) -> "KroneckerRep":
        """Representation on (k^b, coker of (A_i)_i); needs cogenerated_at_sink."""
        a, b = self.dims
        left = left_nullspace_array(self._stacked_rows, self.field)
        c = left.shape[0]
        arrays = tuple(np.ascontiguousarray(left[:, i * b:(i + 1) * b]) for i in range(self.l))
        return KroneckerRep(self.l, (b, c), arrays, self.field)

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "l": self.l,
            "dims": list(self.dims),
            "matrices": [[[fmt(x) for x in row] for row in arr.tolist()] for arr in self.arrays],
        }

    @classmethod
    def from_json(cls, data: dict, field: Field = QQ) -> "KroneckerRep":
        a, b = (int(x) for x in data["dims"])
        mats = [[[field.parse(str(x)) for x in row] for row in m] for m in data["matrices"]]
        return cls.from_matrices(int(data["l"]), (a, b), mats, field)


def euler_form(l: int, v: tuple[int, int], w: tuple[int, int]) -> int:
    return v[0] * w[0] + v[1] * w[1] - l * v[0] * w[1]


def _hom_complex(r: KroneckerRep, s: KroneckerRep) -> np.ndarray:
    a, b = r.dims
    a2, b2 = s.dims
    n_dom = a2 * a + b2 * b
    n_cod = r.l * b2 * a
    if n_dom * n_cod > MAX_HOM_ENTRIES:
        raise ResourceError(f"Hom complex of size {n_cod}x{n_dom} exceeds guard")
    dtype = np.int64 if isinstance(r.field, PrimeField) else object
    blocks = []
    for A, B in zip(r.arrays, s.arrays):
        # row-major vec: vec(B p0) = (B x I_a) vec p0, vec(p1 A) = (I_b2 x A^T) vec p1
        left = -np.kron(B, np.eye(a, dtype=dtype)) if a2 else np.zeros((b2 * a, 0), dtype=dtype)
        right = np.kron(np.eye(b2, dtype=dtype), A.T) if b else np.zeros((b2 * a, 0), dtype=dtype)
        blocks.append(np.hstack([left.reshape(b2 * a, a2 * a), right.reshape(b2 * a, b2 * b)]))
    mat = np.vstack(blocks) if blocks else np.zeros((0, n_dom), dtype=dtype)
    if dtype is np.int64:
        mat = mat % r.field.p
    return mat


def _hom_size(r: KroneckerRep, s: KroneckerRep) -> int:
    return r.dims[0] * s.dims[0] + r.dims[1] * s.dims[1]


def _hom_dim(r: KroneckerRep, s: KroneckerRep) -> int:
    """dim Hom(R, S), shrinking both arguments while that is possible.

    If both R and S are generated at the source, a morphism is fixed by its
    source component p0, and the conditions on p0 are exactly the Hom
    equations between the representations built from the kernels of
    [A_1|...|A_l] and [B_1|...|B_l].  Dually, if both are cogenerated at the
    sink, p1 fixes the morphism and the cokernels of the stacked maps give the
    smaller pair.  Both steps are bijections of Hom spaces.
    """
    while True:
        a, b = r.dims
        a2, b2 = s.dims
        n_dom = a2 * a + b2 * b
        n_cod = r.l * b2 * a
        if n_dom == 0:
            return 0
        if n_dom * n_cod <= SMALL_HOM_ENTRIES:
            break
        size = _hom_size(r, s)
        options = []
        if r.generated_at_source and s.generated_at_source:
            down = (r.l * a - b) * (r.l * a2 - b2) + a * a2
            options.append((down, "down"))
        if r.cogenerated_at_sink and s.cogenerated_at_sink:
            up = b * b2 + (r.l * b - a) * (r.l * b2 - a2)
            options.append((up, "up"))
        # a step is refused when a resulting representation gets too large
        step_cost = {
            "down": r.l * max((r.l * a - b) * a, (r.l * a2 - b2) * a2),
            "up": r.l * max((r.l * b - a) * b, (r.l * b2 - a2) * b2),
        }
        options = [o for o in options if o[0] < size and step_cost[o[1]] <= MAX_STEP_ENTRIES]
        if not options:
            break
        _, step = min(options)
        if step == "down":
            r, s = r.shift_down, s.shift_down
        else:
            r, s = r.shift_up, s.shift_up
    a, b = r.dims
    a2, b2 = s.dims
    if (a2 * a + b2 * b) * r.l * b2 * a <= SMALL_HOM_ENTRIES or not (
        r.generated_at_source or s.cogenerated_at_sink
    ):
        mat = _hom_complex(r, s)
        return mat.shape[1] - rank_array(mat, r.field)
    return _hom_dim_one_sided(r, s)


def _hom_dim_one_sided(r: KroneckerRep, s: KroneckerRep) -> int:
    """dim Hom(R, S) after eliminating one component of the morphism.

    If [A_1|...|A_l] is onto, p1 is determined by p0 and the remaining
    condition is sum_i B_i p0 K_i = 0 for a kernel basis K of that map.  If
    (B_i)_i is injective, p0 is determined by p1 and the condition is
    sum_i Y_i p1 A_i = 0 for a left-kernel basis Y.  The smaller unknown
    space is used and the conditions are streamed in row chunks.
    """
    a, b = r.dims
    a2, b2 = s.dims
    field = r.field
    l = r.l
    options = []
    # cost: building the kernel basis plus eliminating the condition rows
    if r.generated_at_source:
        n, rows = a2 * a, b2 * (l * a - b)
        options.append((l * a * (l * a - b) + n * min(n, rows), n, "source"))
    if s.cogenerated_at_sink:
        n, rows = b2 * b, (l * b2 - a2) * a
        options.append((l * b2 * (l * b2 - a2) + n * min(n, rows), n, "sink"))
    _, n_unknown, side = min(options)
    if n_unknown == 0:
        return 0
    if n_unknown > MAX_ONE_SIDED_UNKNOWNS:
        raise ResourceError(f"Hom space with {n_unknown} unknowns exceeds guard")
    chunk_rows = max(1, n_unknown)

    def reduce(x):
        return x % field.p if isinstance(field, PrimeField) else x

    if side == "source":
        kern = nullspace_array(r._stacked_columns, field)
        m = kern.shape[1]
        ks = [kern[i * a:(i + 1) * a, :].T for i in range(r.l)]  # m x a

        def chunks():
            step = max(1, chunk_rows // max(m, 1))
            for lo in range(0, b2, step):
                rows = sum(np.kron(B[lo:lo + step, :], K) for B, K in zip(s.arrays, ks))
                yield reduce(rows)
    else:
        left = left_nullspace_array(s._stacked_rows, field)
        ys = [left[:, i * b2:(i + 1) * b2] for i in range(r.l)]  # c2 x b2
        c2 = left.shape[0]

        def chunks():
            step = max(1, chunk_rows // max(a, 1))
            for lo in range(0, c2, step):
                rows = sum(np.kron(Y[lo:lo + step, :], A.T) for Y, A in zip(ys, r.arrays))
                yield reduce(rows)

    return n_unknown - rank_streaming(chunks(), n_unknown, field)


def hom_ext(r: KroneckerRep, s: KroneckerRep) -> tuple[int, int]:
    """(dim Hom(R, S), dim Ext^1(R, S)).

    Ext^1 is the cokernel of the Hom complex, so hom - ext equals the Euler
    form of the dimension vectors.
    """
    if r.l != s.l:
        raise ValueError(f"representations of different quivers: {r.l} vs {s.l}")
    if r.field != s.field:
        raise ValueError("representations over different fields")
    hom = _hom_dim(r, s)
    return hom, hom - euler_form(r.l, r.dims, s.dims)


def generic_rep(l: int, v: tuple[int, int], seed: int = 0, field: Field = QQ) -> KroneckerRep:
    """Representation with pseudo-random entries, deterministic in (seed, l, v)."""
    a, b = v
    if l * a * b > MAX_REP_ENTRIES:
        raise ResourceError(f"representation with {l} matrices of size {b}x{a} exceeds guard")
    if isinstance(field, PrimeField):
        rng = np.random.default_rng([seed & 0xFFFFFFFF, l, a, b])
        arrays = tuple(rng.integers(0, field.p, size=(b, a), dtype=np.int64) for _ in range(l))
    else:
        rnd = random.Random(f"kron:{seed}:{l}:{a}:{b}")
        arrays = tuple(
            as_array([[field.random(rnd) for _ in range(a)] for _ in range(b)], field).reshape(b, a)
            for _ in range(l)
        )
    return KroneckerRep(l, (a, b), arrays, field)


def rk_rep(l: int, k: int, field: Field = QQ, seed: int = 0, retries: int = 8) -> KroneckerRep:
    """A generic representative of R_k, certified by hom = 1 and ext = 0."""
    v = dim_vector(l, k)
    for attempt in range(retries):
        rep = generic_rep(l, v, seed=seed + 7919 * attempt + 31 * (k + 1000), field=field)
        if hom_ext(rep, rep) == (1, 0):
            return rep
    raise CertificationError(f"R_{k} for l={l} not certified after {retries} attempts")


def kac_decompose(l: int, v: tuple[int, int]) -> list[tuple[int, int]] | None:
    """Write v as s*dim R_k + r*dim R_{k+1} with r, s >= 0, or return None.

    Adjacent pairs (R_k, R_{k+1}) have vanishing Ext in both directions except
    across the sign change (R_0, R_1), where Ext^1(R_0, R_1) = l; that pair is
    only used with one multiplicity equal to zero.
    """
    a, b = v
    if a < 0 or b < 0 or (a, b) == (0, 0):
        raise ValueError(f"dimension vector must be nonzero and nonnegative, got {v}")
    total = a + b
    candidates = []
    k = 1
    while fibonacci(l, k - 1) <= total:
        candidates.append(k)
        k += 1
    k = -1
    while fibonacci(l, -k) <= total:
        candidates.append(k)
        k -= 1
    for k in candidates:
        p, q = dim_vector(l, k), dim_vector(l, k + 1)
        det = p[0] * q[1] - q[0] * p[1]
        s = (a * q[1] - q[0] * b) // det
        r = (p[0] * b - a * p[1]) // det
        if s < 0 or r < 0 or (s * p[0] + r * q[0], s * p[1] + r * q[1]) != (a, b):
            continue
        return [(kk, m) for kk, m in ((k, s), (k + 1, r)) if m > 0]
    return None
