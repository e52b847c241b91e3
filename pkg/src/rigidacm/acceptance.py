"""The acceptance suite: nine exact checks, each returning (ok, detail).

Used both by ``rigidacm selftest`` and by the test suite.  Every check is an
exact integer comparison; nothing is tolerance based.
"""
from __future__ import annotations

import json
import os
import random
import tempfile
import time
from dataclasses import dataclass

from rigidacm.cech import ext_groups, hyper_dims, hypercohomology, line_bundle_h, truncation_bound
from rigidacm.classify import acm_check
from rigidacm.fib import ell_for, fibonacci
from rigidacm.fieldlinalg import QQ, Field, ResourceError, field_from_name
from rigidacm.kron import generic_rep, hom_ext, kac_decompose, rk_rep
from rigidacm.sheafcx import (
    chern,
    dual,
    ek_bundle,
    fib_bundle,
    koszul_model,
    line_bundle,
    twist,
)
from rigidacm.veronese4 import bad_twists, chi, discriminant, find_acm_twist

# default Veronese degree per projective space: cubics on P^2, quadrics on P^3
VERONESE_D = {2: 3, 3: 2}
# (n, largest k) for the E_k families
EK_RANGE = ((2, 4), (3, 3))


@dataclass
class Outcome:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title} ({self.seconds:.1f}s) {self.detail}"


def _a(l: int, k: int) -> int:
    return fibonacci(l, k)


def fibonacci_table_check(field: Field, seed: int) -> tuple[bool, str]:
    from click.testing import CliRunner

    from rigidacm.cli import main

    t0 = time.perf_counter()
    res = CliRunner().invoke(main, ["--format", "json", "fib", "--l", "3", "--k-max", "6"])
    dt = time.perf_counter() - t0
    if res.exit_code != 0:
        return False, f"exit code {res.exit_code}: {res.output.strip()}"
    values = json.loads(res.output)["values"]
    ok = values == [0, 1, 3, 8, 21, 55, 144] and dt < 1.0
    return ok, f"values {values} in {dt:.3f}s"


def _intermediate_nonzero(c, window) -> dict:
    out = {}
    for t in range(window[0], window[1] + 1):
        h = hypercohomology(c, t)
        for i in range(1, c.n):
            if h[i]:
                out[(i, t)] = h[i]
    return out


def cohomology_p2_check(field: Field, seed: int) -> tuple[bool, str]:
    """h^1(F_k(-1)) = a_k and h^1(F_k(-2)) = a_{k-1}, nothing else intermediate on [-5, 2]."""
    bad = []
    for k in range(1, 5):
        c = fib_bundle(2, k, field, seed)
        got = _intermediate_nonzero(c, (-5, 2))
        want = {(1, -1): _a(3, k), (1, -2): _a(3, k - 1)}
        want = {key: v for key, v in want.items() if v}
        if got != want:
            bad.append(f"F_{k}: {got} != {want}")
    return not bad, "; ".join(bad) or "assignment h^1(F_k(-1)) = a_k, h^1(F_k(-2)) = a_{k-1} for k = 1..4"


def cohomology_p3_check(field: Field, seed: int) -> tuple[bool, str]:
    """On P^3 the pattern moves to h^1 at t = -1 and h^2 at t = -3; the band 2 <= i <= n-2 is empty."""
    bad = []
    for k in range(1, 3):
        c = fib_bundle(3, k, field, seed)
        got = _intermediate_nonzero(c, (-6, 2))
        want = {(1, -1): _a(6, k), (2, -3): _a(6, k - 1)}
        want = {key: v for key, v in want.items() if v}
        if got != want:
            bad.append(f"F_{k}: {got} != {want}")
    return not bad, "; ".join(bad) or "h^1(F_k(-1)) = a_k, h^2(F_k(-3)) = a_{k-1} for k = 1, 2"


def _expected_quiver(l: int, j: int, k: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """(hom, ext) of (R_j, R_k) and of (R_k, R_j) for k < j."""
    if k <= 0 < j:
        return (_a(l, j - k - 1), 0), (0, _a(l, j - k + 1))
    return (0, _a(l, j - k - 1)), (_a(l, j - k + 1), 0)


def reciprocity_check(field: Field, seed: int) -> tuple[bool, str]:
    bad = []
    fk = {k: fib_bundle(2, k, field, seed) for k in range(-2, 5)}
    for k in range(-2, 5):
        for j in range(k + 1, 5):
            e1 = ext_groups(fk[j], fk[k])
            e0 = ext_groups(fk[k], fk[j])
            w1 = (0, _a(3, j - k - 1), 0)
            w0 = (_a(3, j - k + 1), 0, 0)
            if e1 != w1 or e0 != w0:
                bad.append(f"sheaf l=3 ({j},{k}): {e1},{e0} != {w1},{w0}")
    skipped = []
    for l in (3, 6):
        reps = {}
        for k in range(-5, 6):
            try:
                reps[k] = rk_rep(l, k, field, seed)
            except ResourceError as exc:
                skipped.append(f"l={l} R_{k}: {exc}")
        for k in range(-5, 6):
            for j in range(k + 1, 6):
                if j not in reps or k not in reps:
                    bad.append(f"quiver l={l} ({j},{k}): representation unavailable")
                    continue
                w_jk, w_kj = _expected_quiver(l, j, k)
                try:
                    g_jk, g_kj = hom_ext(reps[j], reps[k]), hom_ext(reps[k], reps[j])
                except ResourceError as exc:
                    bad.append(f"quiver l={l} ({j},{k}): {exc}")
                    continue
                if g_jk != w_jk or g_kj != w_kj:
                    bad.append(f"quiver l={l} ({j},{k}): {g_jk},{g_kj} != {w_jk},{w_kj}")
    detail = "; ".join(skipped + bad) if bad else "all sheaf and quiver pairs match"
    if bad:
        detail = f"{len(bad)} pair(s) failed: " + detail
    return not bad, detail


def exceptional_acm_check(field: Field, seed: int) -> tuple[bool, str]:
    bad = []
    for n, k_max in EK_RANGE:
        d = VERONESE_D[n]
        for k in range(1, k_max + 1):
            e = ek_bundle(n, k, field, seed)
            ext = ext_groups(e, e)
            if ext != (1,) + (0,) * n:
                bad.append(f"E_{k} on P^{n}: self-ext {ext}")
            for label, c in (("E", e), ("E^*", dual(e))):
                ok, cert = acm_check(c, d)
                if not ok:
                    bad.append(f"{label}_{k} on P^{n} not ACM: {cert.failures}")
    return not bad, "; ".join(bad) or "E_k and E_k^* exceptional and ACM"


def classification_round_trip_check(field: Field, seed: int) -> tuple[bool, str]:
    from click.testing import CliRunner

    from rigidacm.cli import main

    bad = []
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmp:
        for n, k_max in EK_RANGE:
            l = ell_for(n)
            for k in range(1, k_max + 1):
                e = ek_bundle(n, k, field, seed)
                for s in range(-2, 3):
                    path = os.path.join(tmp, f"e_{n}_{k}_{s}.json")
                    with open(path, "w") as fh:
                        fh.write(twist(e, s).dumps())
                    res = runner.invoke(main, ["--format", "json", "classify", path])
                    if res.exit_code != 0:
                        bad.append(f"n={n} k={k} s={s}: exit {res.exit_code}")
                        continue
                    out = json.loads(res.output)
                    got = (out["a"], out["b"], out["rigid"], out["s"])
                    # E_k(s) normalizes by twisting with 1 - s
                    want = (_a(l, k), _a(l, k - 1), [[k, 1]], 1 - s)
                    if got != want:
                        bad.append(f"n={n} k={k} s={s}: {got} != {want}")
    return not bad, "; ".join(bad) or "(a, b), rigid part and twist recovered for s in [-2, 2]"


def kac_property_check(field: Field, seed: int, samples: int = 200) -> tuple[bool, str]:
    rng = random.Random(f"kac:{seed}")
    bad = []
    for l in (3, 6):
        for i in range(samples):
            total = rng.randint(1, 12)
            a = rng.randint(0, total)
            v = (a, total - a)
            rep = generic_rep(l, v, seed=seed + i, field=field)
            _, ext = hom_ext(rep, rep)
            present = kac_decompose(l, v) is not None
            if present != (ext == 0):
                bad.append(f"l={l} v={v}: kac {present}, generic ext {ext}")
    return not bad, "; ".join(bad) or f"{2 * samples} vectors agree"


def _veronese_suite(field: Field, seed: int) -> list:
    """(label, complex) for the exceptional objects probed by the twist finder."""
    return [
        ("O", line_bundle(2, 0, field)),
        ("O(1)", line_bundle(2, 1, field)),
        ("Omega(1)", koszul_model(2, 1, 1, field)),
        ("F_2", fib_bundle(2, 2, field, seed)),
        ("F_3", fib_bundle(2, 3, field, seed)),
        ("E_2", ek_bundle(2, 2, field, seed)),
        ("E_3", ek_bundle(2, 3, field, seed)),
    ]


def veronese_check(field: Field, seed: int) -> tuple[bool, str]:
    bad = []
    for label, c in _veronese_suite(field, seed):
        cd = chern(c)
        delta = discriminant(cd)
        if delta != 5 * cd.r * cd.r / 4 - 1:
            bad.append(f"{label}: Delta = {delta}")
        if len(bad_twists(cd)) > 3:
            bad.append(f"{label}: bad twists {bad_twists(cd)}")
        for d in (4, 5):
            t, _ = find_acm_twist(cd, d)
            ok, cert = acm_check(twist(c, t), d)
            if not ok:
                bad.append(f"{label} d={d} t={t}: {cert.failures}")
    return not bad, "; ".join(bad) or "discriminants, bad-twist counts and twists confirmed"


def _suite_objects(field: Field, seed: int) -> list:
    out = [(f"F_{k} on P^2", fib_bundle(2, k, field, seed)) for k in range(-1, 4)]
    out += [(f"F_{k} on P^3", fib_bundle(3, k, field, seed)) for k in (1, 2)]
    out += [(f"E_{k} on P^2", ek_bundle(2, k, field, seed)) for k in (2, 3)]
    out += [("E_2 on P^3", ek_bundle(3, 2, field, seed))]
    return out


def oracle_consistency_check(field: Field, seed: int) -> tuple[bool, str]:
    bad = []
    for n in (2, 3):
        for d in range(-8, 9):
            lb = line_bundle(n, d, field)
            for method in ("graded", "cech"):
                if hypercohomology(lb, 0, method) != line_bundle_h(n, d):
                    bad.append(f"O({d}) on P^{n} via {method}")
    objects = _suite_objects(field, seed)
    for label, c in objects:
        cd = chern(c)
        cv = dual(c)
        n = c.n
        for t in range(-4, 3):
            h = hypercohomology(c, t)
            hv = hypercohomology(cv, -t - n - 1)
            if h != tuple(reversed(hv)):
                bad.append(f"Serre duality {label} t={t}: {h} vs {hv}")
            if sum((-1) ** i * x for i, x in enumerate(h)) != chi(cd, t):
                bad.append(f"Riemann-Roch {label} t={t}")
    # truncation bound M versus M + 1, and the graded engine against the Cech engine
    rng = random.Random(f"oracle:{seed}")
    sample = rng.sample(objects[:7], 4)
    for label, c in sample:
        for t in (-3, -1, 0):
            try:
                m = truncation_bound(c, t)
                hm = hyper_dims(c, t, "cech", m)
                hm1 = hyper_dims(c, t, "cech", m + 1)
            except ResourceError:
                continue
            if hm != hm1:
                bad.append(f"truncation {label} t={t}: {hm} vs {hm1}")
            if hm != hyper_dims(c, t, "auto"):
                bad.append(f"engines disagree {label} t={t}")
    # prime field against the rationals on the small P^2 objects
    if field == QQ:
        other = field_from_name("prime", seed)
    else:
        other = QQ
    small = [(f"F_{k}", lambda f, k=k: fib_bundle(2, k, f, seed)) for k in (1, 2)]
    small += [(f"E_{k}", lambda f, k=k: ek_bundle(2, k, f, seed)) for k in (1, 2)]
    for label, make in small:
        c1, c2 = make(field), make(other)
        for t in range(-4, 2):
            if hypercohomology(c1, t) != hypercohomology(c2, t):
                bad.append(f"{field.name} vs {other.name} on {label} t={t}")
    return not bad, "; ".join(bad) or f"{len(objects)} objects consistent"


CRITERIA = [
    (1, "Fibonacci table", fibonacci_table_check),
    (2, "cohomology of F_k on P^2", cohomology_p2_check),
    (3, "cohomology of F_k on P^3", cohomology_p3_check),
    (4, "reciprocity of Hom and Ext", reciprocity_check),
    (5, "E_k exceptional and ACM", exceptional_acm_check),
    (6, "classification round trip", classification_round_trip_check),
    (7, "Kac decomposition property", kac_property_check),
    (8, "twists on higher Veronese surfaces", veronese_check),
    (9, "oracle self-consistency", oracle_consistency_check),
]


def run_criterion(number: int, field: Field | None = None, seed: int = 0) -> Outcome:
    field = field_from_name("prime", seed) if field is None else field
    for num, title, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            try:
                ok, detail = fn(field, seed)
            except Exception as exc:  # a crash is a failed criterion, reported with its cause
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            return Outcome(num, title, ok, detail, time.perf_counter() - t0)
    raise ValueError(f"no criterion {number}")


def run_all(field: Field | None = None, seed: int = 0, only=None, echo=None) -> list[Outcome]:
    out = []
    for num, _, _ in CRITERIA:
        if only and num not in only:
            continue
        res = run_criterion(num, field, seed)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
