"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 a verification failed, 4 a size
guard refused the computation.
"""
from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from rigidacm.cech import cohomology_table, ext_groups
from rigidacm.classify import ClassificationError, acm_check, classify
from rigidacm.fib import fibonacci_table
from rigidacm.fieldlinalg import ResourceError, field_from_name
from rigidacm.kron import CertificationError, generic_rep, hom_ext, kac_decompose
from rigidacm.sheafcx import (
    ChernData,
    FreeComplex,
    chern,
    dual,
    ek_bundle,
    fib_bundle,
    koszul_model,
    line_bundle,
    twist,
)
from rigidacm.veronese4 import discriminant, find_acm_twist

EXIT_INVALID = 2
EXIT_VERIFY = 3
EXIT_RESOURCE = 4

DEFAULT_WINDOW = (-5, 2)


class VerificationFailed(RuntimeError):
    pass


class _Main(click.Group):
    """Maps library exceptions onto the exit code contract."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except ResourceError as exc:
            _die(EXIT_RESOURCE, f"resource guard: {exc}")
        except (VerificationFailed, CertificationError, ClassificationError) as exc:
            _die(EXIT_VERIFY, f"verification failed: {exc}")
        except (ValueError, KeyError, TypeError, OSError) as exc:
            _die(EXIT_INVALID, f"invalid input: {exc}")


def _die(code: int, msg: str):
    click.echo(msg, err=True)
    raise click.exceptions.Exit(code)


class Config:
    def __init__(self, field_name: str, seed: int, fmt: str, window):
        self.seed = seed
        self.fmt = fmt
        self.window = window
        self.field = field_from_name(field_name, seed)

    def run_info(self) -> dict:
        info = {"field": self.field.name, "seed": self.seed}
        if self.window is not None:
            info["window"] = list(self.window)
        return info

    def emit(self, data: dict, table: str | None = None):
        if self.fmt == "json" or table is None:
            data = dict(data)
            data["run"] = self.run_info()
            click.echo(json.dumps(data, sort_keys=True, default=_json_default))
        else:
            click.echo(table)


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _parse_window(ctx, param, value):
    if value is None:
        return None
    try:
        lo, hi = (int(x) for x in value.split(":"))
    except ValueError:
        raise click.BadParameter("expected a:b with integers a <= b")
    if lo > hi:
        raise click.BadParameter("expected a:b with a <= b")
    return lo, hi


def _parse_ints(value: str, count: int | None, what: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in value.split(","))
    except ValueError:
        raise click.BadParameter(f"{what} must be comma separated integers")
    if count is not None and len(out) != count:
        raise click.BadParameter(f"{what} needs {count} entries")
    return out


def _align(header: list[str], rows: list[list]) -> str:
    cols = [header] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(header))]
    return "\n".join("  ".join(s.rjust(w) for s, w in zip(r, widths)) for r in cols)


pass_config = click.make_pass_decorator(Config)


@click.group(cls=_Main)
@click.option("--field", "field_name", type=click.Choice(["prime", "rational"]), default="prime",
              show_default=True, help="Coefficient field; the prime is drawn from the seed.")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="table", show_default=True)
@click.option("--window", callback=_parse_window, default=None, help="Twist window a:b.")
@click.pass_context
def main(ctx, field_name, seed, fmt, window):
    """Rigid ACM bundles on Veronese embeddings of P^2 and P^3."""
    ctx.obj = Config(field_name, seed, fmt, window)


# --- fib -------------------------------------------------------------------------

@main.command("fib")
@click.option("--l", "l", type=click.IntRange(min=2), required=True)
@click.option("--k-max", type=click.IntRange(min=0), required=True)
@pass_config
def fib_cmd(cfg: Config, l: int, k_max: int):
    """Fibonacci numbers a_{l,0}, ..., a_{l,k_max}."""
    values = fibonacci_table(l, k_max)
    rows = [[k, values[k - 1] if k else "-", values[k]] for k in range(k_max + 1)]
    cfg.emit({"l": l, "values": values}, _align(["k", f"a_{{{l},k-1}}", f"a_{{{l},k}}"], rows))


# --- kron ------------------------------------------------------------------------

@main.group("kron")
def kron_cmd():
    """Kronecker quiver representations."""


def _rep_label(parts) -> str:
    return " + ".join(f"R_{k}" if m == 1 else f"{m} R_{k}" for k, m in parts)


@kron_cmd.command("decompose")
@click.option("--l", "l", type=click.IntRange(min=2), required=True)
@click.option("--dim", required=True, help="Dimension vector a,b (source, sink).")
@click.option("--verify/--no-verify", default=True, help="Cross-check with a generic representation.")
@pass_config
def kron_decompose(cfg: Config, l: int, dim: str, verify: bool):
    """Rigid decomposition of a dimension vector, or 'not rigid'."""
    v = _parse_ints(dim, 2, "--dim")
    parts = kac_decompose(l, v)
    data = {"l": l, "dim": list(v), "rigid": parts is not None,
            "summands": [[k, m] for k, m in parts] if parts else []}
    if verify:
        rep = generic_rep(l, v, seed=cfg.seed, field=cfg.field)
        hom, ext = hom_ext(rep, rep)
        data["generic"] = {"hom": hom, "ext": ext}
        if (ext == 0) != (parts is not None):
            raise VerificationFailed(f"generic ext {ext} disagrees with decomposition {parts}")
    cfg.emit(data, _rep_label(parts) if parts else "not rigid")


@kron_cmd.command("ext")
@click.option("--l", "l", type=click.IntRange(min=2), required=True)
@click.option("--dim", required=True)
@click.option("--self", "self_", is_flag=True, help="Pair the representation with itself.")
@click.option("--other-dim", default=None, help="Second dimension vector (generic representation).")
@pass_config
def kron_ext(cfg: Config, l: int, dim: str, self_: bool, other_dim: str | None):
    """dim Hom and dim Ext^1 between generic representations."""
    v = _parse_ints(dim, 2, "--dim")
    r = generic_rep(l, v, seed=cfg.seed, field=cfg.field)
    if self_ == (other_dim is not None):
        raise click.UsageError("give exactly one of --self and --other-dim")
    if self_:
        w, s = v, r
    else:
        w = _parse_ints(other_dim, 2, "--other-dim")
        s = generic_rep(l, w, seed=cfg.seed + 1, field=cfg.field)
    hom, ext = hom_ext(r, s)
    cfg.emit({"l": l, "dim": list(v), "other_dim": list(w), "hom": hom, "ext": ext},
             _align(["hom", "ext"], [[hom, ext]]))


# --- bundles ---------------------------------------------------------------------

FAMILIES = ("fib", "ek", "omega", "line")


def build_bundle(family: str, n: int, k: int, s: int, field, seed: int) -> FreeComplex:
    """F_k, E_k, Omega^k(k) or O(k) on P^n, twisted by s."""
    if n not in (2, 3) and family in ("fib", "ek"):
        raise ValueError(f"{family} bundles are built on P^2 and P^3, not P^{n}")
    if n < 1:
        raise ValueError("n must be positive")
    if family == "fib":
        c = fib_bundle(n, k, field, seed)
    elif family == "ek":
        c = ek_bundle(n, k, field, seed)
    elif family == "omega":
        if not 0 <= k <= n:
            raise ValueError(f"Omega^{k} needs 0 <= k <= {n}")
        c = koszul_model(n, k, k, field)
    elif family == "line":
        c = line_bundle(n, k, field)
    else:
        raise ValueError(f"unknown family {family!r}")
    return twist(c, s) if s else c


def _parse_object(text: str, field, seed: int) -> FreeComplex:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise click.BadParameter("expected family:n:k or family:n:k:s")
    family = parts[0]
    try:
        n, k, *rest = (int(x) for x in parts[1:])
    except ValueError:
        raise click.BadParameter("n, k and s must be integers")
    return build_bundle(family, n, k, rest[0] if rest else 0, field, seed)


def _default_d(n: int) -> int:
    return {2: 3, 3: 2}.get(n, 2)


def _cohomology_rows(table, n):
    lo, hi = table.window
    return [[t] + [table[(i, t)] for i in range(n + 1)] for t in range(lo, hi + 1)]


@main.command("bundle")
@click.option("--family", type=click.Choice(FAMILIES), required=True)
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--s", type=int, default=0, show_default=True, help="Twist.")
@click.option("--action", type=click.Choice(["cohomology", "ext", "acm", "classify", "chern", "json"]),
              required=True)
@click.option("--other", default=None, help="Second object for ext, e.g. fib:2:1.")
@click.option("--d", type=click.IntRange(min=1), default=None, help="Veronese degree for acm.")
@pass_config
def bundle_cmd(cfg: Config, family, n, k, s, action, other, d):
    """Build a bundle and analyse it."""
    c = build_bundle(family, n, k, s, cfg.field, cfg.seed)
    label = f"{family}:{n}:{k}:{s}"
    if action == "json":
        click.echo(c.dumps())
    elif action == "chern":
        cd = chern(c)
        cfg.emit({"object": label, "chern": list(cd.as_tuple())},
                 "(" + ", ".join(str(x) for x in cd.as_tuple()) + ")")
    elif action == "cohomology":
        lo, hi = cfg.window or DEFAULT_WINDOW
        table = cohomology_table(c, lo, hi)
        cfg.emit({"object": label, "cohomology": table.to_json()},
                 _align(["t"] + [f"h^{i}" for i in range(n + 1)], _cohomology_rows(table, n)))
    elif action == "ext":
        target = _parse_object(other, cfg.field, cfg.seed) if other else c
        ext = ext_groups(c, target)
        cfg.emit({"object": label, "other": other or label, "ext": list(ext)},
                 _align([f"ext^{i}" for i in range(len(ext))], [list(ext)]))
    elif action == "acm":
        d = d or _default_d(n)
        ok, cert = acm_check(c, d)
        ok_dual, cert_dual = acm_check(dual(c), d)
        cfg.emit({"object": label, "d": d, "acm": ok, "dual_acm": ok_dual,
                  "certificate": cert.to_json(), "dual_certificate": cert_dual.to_json()},
                 f"ACM for d={d}: {'ok' if ok else 'FAILED'}; dual: {'ok' if ok_dual else 'FAILED'}")
        if not (ok and ok_dual):
            raise VerificationFailed(f"{label} is not ACM: {cert.failures + cert_dual.failures}")
    elif action == "classify":
        _emit_classification(cfg, c, d)


def _emit_classification(cfg: Config, c: FreeComplex, d: int | None):
    res = classify(c)
    data = res.to_json()
    data["components"] = [list(x) for x in res.components()]
    lines = [f"case {res.case}: a={res.a} b={res.b} normalized by twist {res.s}"]
    if res.rigid is not None:
        lines.append("rigid part: " + " + ".join(
            f"{lab}({tw})" if m == 1 else f"{m} {lab}({tw})" for lab, m, tw in res.components()))
    lines += [f"warning: {w}" for w in res.warnings]
    if d is not None:
        ok, cert = acm_check(c, d)
        data["acm"] = cert.to_json()
        lines.append(f"ACM for d={d}: {'ok' if ok else 'FAILED'}")
    cfg.emit(data, "\n".join(lines))
    if d is not None and not data["acm"]["ok"]:
        raise VerificationFailed("input is not ACM")


def _load_complex(path: str, cfg: Config) -> FreeComplex:
    with open(path) as fh:
        data = json.load(fh)
    field = None if "field" in data else cfg.field
    return FreeComplex.from_json(data, field)


@main.command("classify")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--d", type=click.IntRange(min=1), default=None, help="Also check ACM for this degree.")
@pass_config
def classify_cmd(cfg: Config, path, d):
    """Classify the complex stored in PATH (JSON)."""
    _emit_classification(cfg, _load_complex(path, cfg), d)


@main.command("acm-check")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--d", type=click.IntRange(min=1), required=True)
@pass_config
def acm_check_cmd(cfg: Config, path, d):
    """Check h^i(E(dt)) = 0 for 0 < i < n and all t."""
    c = _load_complex(path, cfg)
    ok, cert = acm_check(c, d)
    cfg.emit({"acm": ok, "certificate": cert.to_json()},
             f"ACM for d={d}: {'ok' if ok else 'FAILED'} (window {cert.window[0]}:{cert.window[1]})")
    if not ok:
        raise VerificationFailed(f"nonzero intermediate cohomology at {cert.failures}")


@main.command("veronese4")
@click.option("--chern", "chern_str", required=True, help="r,c1,c2 of a bundle on P^2.")
@click.option("--d", type=click.IntRange(min=4), required=True)
@pass_config
def veronese4_cmd(cfg: Config, chern_str, d):
    """ACM twist of an exceptional bundle for the d-fold Veronese surface."""
    r, c1, c2 = _parse_ints(chern_str, 3, "--chern")
    if r <= 0:
        raise click.BadParameter("rank must be positive")
    cd = ChernData(2, Fraction(r), Fraction(c1), Fraction(c2))
    t, bad = find_acm_twist(cd, d)
    delta = discriminant(cd)
    cfg.emit({"t": t, "bad_twists": bad, "delta": str(delta)},
             f"t = {t}  bad twists {bad}  Delta = {delta}")


@main.command("selftest")
@click.option("--only", default=None, help="Comma separated criterion numbers.")
@pass_config
def selftest_cmd(cfg: Config, only):
    """Run the acceptance suite; exit 3 on any failure."""
    from rigidacm.acceptance import run_all

    wanted = set(_parse_ints(only, None, "--only")) if only else None
    results = run_all(cfg.field, cfg.seed, wanted, echo=click.echo)
    failed = [r.number for r in results if not r.ok]
    if failed:
        raise VerificationFailed(f"criteria {failed} failed")


if __name__ == "__main__":
    sys.exit(main())
