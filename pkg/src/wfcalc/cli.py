"""Batch command line: series, classes, identity checks, and coefficient tables.

Exit codes: 0 success, 1 failed check, 2 malformed input, 3 precision error.
"""

from __future__ import annotations

import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import click

from . import charclasses, clifford, modforms, qseries, superconn
from .formalcdga import AlgebraElement, AlgebraSignature
from .qseries import PrecisionError, QSeries

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3


def default_order() -> int:
    raw = os.environ.get("WF_DEFAULT_ORDER", "10")
    try:
        n = int(raw)
    except ValueError:
        raise click.BadParameter(f"WF_DEFAULT_ORDER must be an integer, got {raw!r}") from None
    if n < 0:
        raise click.BadParameter("WF_DEFAULT_ORDER must be nonnegative")
    return n


@dataclass
class CliConfig:
    command: str
    fmt: str = "text"
    output: Path | None = None
    orders: dict[str, int] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self) -> None:
        for k, v in self.orders.items():
            if v is not None and v < 0:
                raise click.BadParameter(f"{k} must be nonnegative")


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (QSeries, AlgebraElement, modforms.MFBasis, modforms.ClassOrder)):
        return x.to_json()
    if isinstance(x, qseries.FracPowerSeries):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def _emit(cfg: CliConfig, text: str, payload: dict) -> None:
    out = json.dumps(_jsonable(payload), indent=2, sort_keys=True) if cfg.fmt == "json" else text
    if cfg.output is not None:
        cfg.output.write_text(out + "\n")
    click.echo(out)


def _run(fn: Callable[[], int]) -> None:
    """Map library failures onto exit codes."""
    try:
        code = fn()
    except PrecisionError as exc:
        click.echo(f"precision error: {exc}", err=True)
        sys.exit(EXIT_PRECISION)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError, OSError) as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    sys.exit(code)


def _load_json(path: str) -> Any:
    return json.loads(Path(path).read_text())


fmt_option = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
                          show_default=True)
out_option = click.option("--output", type=click.Path(dir_okay=False, writable=True), default=None,
                          help="Also write the artifact to this file.")


def _order_option(name: str = "--order") -> Callable:
    return click.option(name, type=int, default=None, help="Truncation order (default: WF_DEFAULT_ORDER or 10).")


def _cfg(command: str, fmt: str, output: str | None, **orders: Any) -> CliConfig:
    return CliConfig(command, fmt, Path(output) if output else None,
                     {k: (default_order() if v is None else v) for k, v in orders.items()})


@click.group()
def main() -> None:
    """Exact q-series, Witten classes, superconnection traces and torsion orders."""


# ---------------------------------------------------------------------------
# series and classes
# ---------------------------------------------------------------------------


@main.command()
@click.option("--weight", type=int, required=True)
@_order_option()
@fmt_option
@out_option
def eis(weight: int, order: int | None, fmt: str, output: str | None) -> None:
    """Normalized Eisenstein series of the given weight."""
    def go() -> int:
        cfg = _cfg("eis", fmt, output, order=order)
        s = qseries.eisenstein_q(weight, cfg.orders["order"])
        _emit(cfg, str(s), {"weight": weight, "series": s})
        return EXIT_OK
    _run(go)


@main.command()
@_order_option()
@fmt_option
@out_option
def eta(order: int | None, fmt: str, output: str | None) -> None:
    """Dedekind eta with its q^{1/24} prefactor."""
    def go() -> int:
        cfg = _cfg("eta", fmt, output, order=order)
        s = qseries.dedekind_eta(cfg.orders["order"])
        _emit(cfg, s.format(), {"eta": s})
        return EXIT_OK
    _run(go)


@main.command()
@_order_option()
@fmt_option
@out_option
def phi(order: int | None, fmt: str, output: str | None) -> None:
    """Euler product prod (1 - q^n)."""
    def go() -> int:
        cfg = _cfg("phi", fmt, output, order=order)
        s = qseries.phi_product(cfg.orders["order"])
        _emit(cfg, str(s), {"phi": s})
        return EXIT_OK
    _run(go)


@main.command()
@_order_option()
@fmt_option
@out_option
def delta(order: int | None, fmt: str, output: str | None) -> None:
    """Weight-12 cusp form, cross-checked against (E4^3 - E6^2)/1728."""
    def go() -> int:
        cfg = _cfg("delta", fmt, output, order=order)
        N = cfg.orders["order"]
        s = qseries.delta_series(N)
        other = modforms.delta(N).series if N >= 1 else QSeries.zero(N)
        agree = s == other
        _emit(cfg, str(s), {"delta": s, "agrees_with_eisenstein": agree})
        return EXIT_OK if agree else EXIT_FAIL
    _run(go)


@main.command()
@click.option("--manifest", type=click.Path(exists=True, dir_okay=False), required=True)
@_order_option()
@fmt_option
@out_option
def witten(manifest: str, order: int | None, fmt: str, output: str | None) -> None:
    """Witten genus of a manifest given by Pontryagin numbers."""
    def go() -> int:
        cfg = _cfg("witten", fmt, output, order=order)
        m = charclasses.Manifest.load(manifest)
        s = charclasses.witten_genus(m, cfg.orders["order"])
        _emit(cfg, str(s), {"dimension": m.dimension, "genus": s})
        return EXIT_OK
    _run(go)


@main.command("euler-char")
@click.option("--rank", type=int, required=True)
@click.option("--dim", type=int, required=True)
@_order_option()
@fmt_option
@out_option
def euler_char(rank: int, dim: int, order: int | None, fmt: str, output: str | None) -> None:
    """Chern character of the Euler-class module, Pf / Wit."""
    def go() -> int:
        cfg = _cfg("euler-char", fmt, output, order=order)
        res = charclasses.euler_character_check(rank, dim, cfg.orders["order"])
        _emit(cfg, str(res.lhs), {"character": res.lhs, "matches_pf_over_wit": res.equal})
        return EXIT_OK if res.equal else EXIT_FAIL
    _run(go)


@main.command("dirac-ramond")
@click.option("--rank", type=int, required=True)
@click.option("--dim", type=int, required=True)
@_order_option()
@fmt_option
@out_option
def dirac_ramond(rank: int, dim: int, order: int | None, fmt: str, output: str | None) -> None:
    """Dirac-Ramond character phi^n A-hat prod Ch(Sym)."""
    def go() -> int:
        cfg = _cfg("dirac-ramond", fmt, output, order=order)
        N = cfg.orders["order"]
        sig = AlgebraSignature(roots=rank // 2, dim=dim, N=N)
        ch = charclasses.dirac_ramond_character(sig, N)
        _emit(cfg, str(ch), {"character": ch})
        return EXIT_OK
    _run(go)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    precision: dict[str, Any]
    certificate: Any = None
    seconds: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    def line(self) -> str:
        prec = ", ".join(f"{k}={v}" for k, v in self.precision.items())
        tail = "" if self.passed else f"; first failure: {self.certificate}"
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} ({prec}){tail}"


def _report(cfg: CliConfig, results: list[CheckResult]) -> int:
    ok = all(r.passed for r in results)
    payload = {"command": cfg.command, "passed": ok,
               "checks": [{"name": r.name, "passed": r.passed, "precision": r.precision,
                           "certificate": r.certificate, "seconds": round(r.seconds, 3),
                           **r.details} for r in results]}
    _emit(cfg, "\n".join(r.line() for r in results), payload)
    return EXIT_OK if ok else EXIT_FAIL


def _timed(name: str, precision: dict, fn: Callable[[], tuple[bool, Any]]) -> CheckResult:
    t0 = time.perf_counter()
    ok, cert = fn()
    return CheckResult(name, ok, precision, cert, time.perf_counter() - t0)


@main.group()
def check() -> None:
    """Identity and property checks; exit 1 on any failure."""


@check.command("weierstrass")
@click.option("--qorder", type=int, default=None)
@click.option("--zorder", type=int, default=None)
@fmt_option
@out_option
def check_weierstrass(qorder: int | None, zorder: int | None, fmt: str, output: str | None) -> None:
    def go() -> int:
        cfg = _cfg("check weierstrass", fmt, output, qorder=qorder, zorder=zorder)
        nq, mz = cfg.orders["qorder"], cfg.orders["zorder"]

        def run() -> tuple[bool, Any]:
            a = qseries.weierstrass_sigma("product", nq, mz)
            b = qseries.weierstrass_sigma("exponential", nq, mz)
            return a == b, a.first_difference(b)
        return _report(cfg, [_timed("weierstrass", {"q": nq, "z": mz}, run)])
    _run(go)


@check.command("euler-char")
@click.option("--rank", type=int, required=True)
@click.option("--dim", type=int, required=True)
@_order_option()
@fmt_option
@out_option
def check_euler_char(rank: int, dim: int, order: int | None, fmt: str, output: str | None) -> None:
    def go() -> int:
        cfg = _cfg("check euler-char", fmt, output, order=order)
        N = cfg.orders["order"]

        def run() -> tuple[bool, Any]:
            res = charclasses.euler_character_check(rank, dim, N)
            return res.equal, res.certificate
        return _report(cfg, [_timed("euler-char", {"rank": rank, "dim": dim, "q": N}, run)])
    _run(go)


@check.command("eta-h")
@click.option("--dim", type=int, required=True)
@click.option("--rank", type=int, default=None, help="Even bundle rank (default: enough roots for dim).")
@click.option("--variant", type=click.Choice(["plain", "star", "both"]), default="both")
@_order_option()
@fmt_option
@out_option
def check_eta_h(dim: int, rank: int | None, variant: str, order: int | None, fmt: str,
                output: str | None) -> None:
    def go() -> int:
        cfg = _cfg("check eta-h", fmt, output, order=order)
        N = cfg.orders["order"]
        sig = charclasses.euler_signature(rank if rank else 2 * max(1, dim // 4), dim, N)
        variants = ["plain", "star"] if variant == "both" else [variant]
        results = []
        for v in variants:
            def run(v: str = v) -> tuple[bool, Any]:
                _, ok = charclasses.eta_h_transgression(sig, v, N)
                return ok, None
            results.append(_timed(f"eta-h/{v}", {"dim": dim, "q": N}, run))
        return _report(cfg, results)
    _run(go)


@check.command("anomaly")
@click.option("--rank", type=int, required=True)
@click.option("--dim", type=int, required=True)
@_order_option()
@fmt_option
@out_option
def check_anomaly(rank: int, dim: int, order: int | None, fmt: str, output: str | None) -> None:
    def go() -> int:
        cfg = _cfg("check anomaly", fmt, output, order=order)
        N = cfg.orders["order"]

        def run() -> tuple[bool, Any]:
            Z, Zv, Ztb = charclasses.euler_anomaly_data(rank, dim, N)
            rep = superconn.eft_verify(superconn.EftData(Z, Zv, Ztb, rank))
            return rep.anti_holomorphic and rep.volume, rep.certificates or None
        return _report(cfg, [_timed("anomaly", {"rank": rank, "dim": dim, "q": N}, run)])
    _run(go)


@check.command("semigroup")
@click.option("--seed", type=int, required=True)
@click.option("--trials", type=int, default=50, show_default=True)
@click.option("--grassmann", type=int, default=4, show_default=True, help="Number of odd generators.")
@fmt_option
@out_option
def check_semigroup(seed: int, trials: int, grassmann: int, fmt: str, output: str | None) -> None:
    def go() -> int:
        cfg = _cfg("check semigroup", fmt, output)
        cfg.seed = seed
        rng = random.Random(seed)
        sig = superconn.grassmann_signature(grassmann)

        def run() -> tuple[bool, Any]:
            for i in range(trials):
                rep = superconn.random_semigroup_rep(rng, sig)
                odd = i % 4 == 0
                g = superconn.random_super_point(rng, sig, odd)
                h = superconn.random_super_point(rng, sig, odd)
                if not superconn.semigroup_law_check(rep, g, h):
                    return False, {"trial": i}
            return True, None
        return _report(cfg, [_timed("semigroup", {"trials": trials, "seed": seed}, run)])
    _run(go)


@check.command("mckean-singer")
@click.option("--seed", type=int, required=True)
@click.option("--trials", type=int, default=20, show_default=True)
@fmt_option
@out_option
def check_mckean_singer(seed: int, trials: int, fmt: str, output: str | None) -> None:
    def go() -> int:
        cfg = _cfg("check mckean-singer", fmt, output)
        cfg.seed = seed
        rng = random.Random(seed)

        def run() -> tuple[bool, Any]:
            for i in range(trials):
                n = rng.choice([0, 1, 2, -2, 3, 4])
                D = clifford.random_dirac(rng, n, rng.randint(0, 3), rng.randint(0, 3))
                res = clifford.mckean_singer_check(D)
                if not res.ok:
                    return False, {"trial": i, "n": n, "value": str(res.value), "superdim": str(res.superdim)}
            return True, None
        return _report(cfg, [_timed("mckean-singer", {"trials": trials, "seed": seed}, run)])
    _run(go)


@check.command("eft")
@click.option("--rank", type=int, required=True)
@click.option("--dim", type=int, required=True)
@_order_option()
@fmt_option
@out_option
def check_eft(rank: int, dim: int, order: int | None, fmt: str, output: str | None) -> None:
    """Euler representation: partition trace against Pf / Wit*, then the three field conditions."""
    def go() -> int:
        cfg = _cfg("check eft", fmt, output, order=order)
        N = cfg.orders["order"]
        prec = {"rank": rank, "dim": dim, "q": N}
        data: dict = {}

        def trace() -> tuple[bool, Any]:
            data["eft"] = superconn.euler_eft_data(rank, dim, N)
            Z, _, _ = charclasses.euler_anomaly_data(rank, dim, N)
            diff = data["eft"].Z - Z
            return diff.is_zero(), diff.first_term()

        def conditions() -> tuple[bool, Any]:
            rep = superconn.eft_verify(data["eft"])
            return rep.ok, rep.certificates or None
        return _report(cfg, [_timed("partition-trace", prec, trace), _timed("eft", prec, conditions)])
    _run(go)


# ---------------------------------------------------------------------------
# tables and torsion orders
# ---------------------------------------------------------------------------


@main.command()
@click.option("--degree", type=int, default=None)
@click.option("--table", is_flag=True, help="Print the eight residue rows.")
@fmt_option
@out_option
def komf(degree: int | None, table: bool, fmt: str, output: str | None) -> None:
    """Coefficient group of KO_MF in a degree."""
    def go() -> int:
        cfg = _cfg("komf", fmt, output)
        if table or degree is None:
            rows = list(modforms.KOMF_ROWS)
            _emit(cfg, "\n".join(f"{r}: {d}" for r, d in rows), {"rows": [list(r) for r in rows]})
        else:
            d = modforms.komf_descriptor(degree)
            _emit(cfg, d, {"degree": degree, "group": d})
        return EXIT_OK
    _run(go)


@main.command("bn-order")
@click.option("--series", "series_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--weight", type=int, required=True)
@click.option("--lattice-scale", type=int, default=1, show_default=True)
@click.option("--pole", type=int, default=0, show_default=True)
@_order_option()
@click.option("--max-d", type=int, default=100, show_default=True)
@fmt_option
@out_option
def bn_order(series_path: str, weight: int, lattice_scale: int, pole: int, order: int | None,
             max_d: int, fmt: str, output: str | None) -> None:
    """Order of a q-series class in C((q)) / (c Z((q)) + MF_w)."""
    def go() -> int:
        cfg = _cfg("bn-order", fmt, output, order=order)
        s = QSeries.from_json(_load_json(series_path))
        x = modforms.QuotientClass(s, weight, lattice_scale, pole, cfg.orders["order"])
        res = modforms.class_order(x, max_d)
        text = str(res.order) if res.order is not None else f"none up to {max_d}"
        _emit(cfg, text, res.to_json())
        return EXIT_OK
    _run(go)


@main.command("mf-basis")
@click.option("--weight", type=int, required=True)
@_order_option()
@fmt_option
@out_option
def mf_basis_cmd(weight: int, order: int | None, fmt: str, output: str | None) -> None:
    """Row-reduced basis of holomorphic modular forms."""
    def go() -> int:
        cfg = _cfg("mf-basis", fmt, output, order=order)
        b = modforms.mf_basis(weight, cfg.orders["order"])
        _emit(cfg, "\n".join(str(f.series) for f in b.forms) or "(empty)", b.to_json())
        return EXIT_OK
    _run(go)


@main.command("wh-basis")
@click.option("--weight", type=int, required=True)
@click.option("--pole", type=int, required=True)
@_order_option()
@fmt_option
@out_option
def wh_basis_cmd(weight: int, pole: int, order: int | None, fmt: str, output: str | None) -> None:
    """Row-reduced basis of weakly holomorphic forms with bounded pole order."""
    def go() -> int:
        cfg = _cfg("wh-basis", fmt, output, order=order)
        b = modforms.weakly_holo_basis(weight, pole, cfg.orders["order"])
        _emit(cfg, "\n".join(str(f.series) for f in b.forms) or "(empty)", b.to_json())
        return EXIT_OK
    _run(go)


if __name__ == "__main__":
    main()
