"""Witten classes, A-hat, q-power characters, and the Euler/anomaly identities.

Classes are built from formal Chern roots ``x_i`` of a rank ``2r`` bundle;
``p1 = sum x_i^2`` and ``Pf = prod x_i``.  Products over roots are assembled
from univariate series in ``x`` whose coefficients are q-series.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Any, Mapping

from .formalcdga import (AlgebraElement, AlgebraSignature, OddGenerator, apply_d, apply_dbar,
                         apply_dv, exp_nilpotent, pair_with_pontryagin, parse_partition,
                         root_product)
from .qseries import IotaRat, QSeries, eisenstein_geometric, phi_product


class WittenVariant(str, Enum):
    PLAIN = "plain"
    MODULAR = "modular"
    STAR = "star"


class NotStringError(ValueError):
    pass


def _variant(v: Any) -> WittenVariant:
    return v if isinstance(v, WittenVariant) else WittenVariant(v)


def _N(sig: AlgebraSignature, N: int | None) -> int:
    return sig.N if N is None else N


def witten_exponent(sig: AlgebraSignature, variant: Any = "plain", N: int | None = None) -> AlgebraElement:
    """sum_k D_{2k} s_k / (2k), with D_2 dropped (modular) or replaced by D_2 - W (star)."""
    variant = _variant(variant)
    N = _N(sig, N)
    if variant is WittenVariant.STAR and not sig.include_W:
        raise ValueError("the star variant needs W in the signature")
    out = sig.zero()
    start = 2 if variant is WittenVariant.MODULAR else 1
    for k in range(start, sig.dim // 4 + 1):
        c = sig.scalar(eisenstein_geometric(2 * k, N))
        if k == 1 and variant is WittenVariant.STAR:
            c = c - sig.gen("W")
        out = out + (c * sig.power_sum(k)).scale(Fraction(1, 2 * k))
    return out


def witten_class(sig: AlgebraSignature, variant: Any = "plain", N: int | None = None) -> AlgebraElement:
    return exp_nilpotent(witten_exponent(sig, variant, N))


def witten_class_inverse(sig: AlgebraSignature, variant: Any = "plain", N: int | None = None) -> AlgebraElement:
    return exp_nilpotent(-witten_exponent(sig, variant, N))


# ---------------------------------------------------------------------------
# univariate helpers: lists c[j] of coefficients of x^j
# ---------------------------------------------------------------------------


def _umul(a: list, b: list, deg: int) -> list:
    out: list = [Fraction(0)] * (deg + 1)
    for i, x in enumerate(a[:deg + 1]):
        if not x:
            continue
        for j, y in enumerate(b[:deg + 1 - i]):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _uinv(a: list, deg: int) -> list:
    inv0 = a[0].inverse() if isinstance(a[0], QSeries) else 1 / Fraction(a[0])
    out = [inv0]
    for j in range(1, deg + 1):
        acc: Any = Fraction(0)
        for i in range(1, j + 1):
            if i < len(a) and a[i]:
                acc = acc + a[i] * out[j - i]
        out.append(-(acc * inv0) if acc else Fraction(0))
    return out


def _lambda_root(k: int, N: int, deg: int) -> list:
    """(1 - q^k e^x)(1 - q^k e^-x) as x-coefficients."""
    qk = QSeries.monomial(1, k, N)
    out: list = [QSeries.constant(1, N) - qk.scale(2) + QSeries.monomial(1, 2 * k, N)]
    for j in range(1, deg + 1):
        out.append(qk.scale(Fraction(-2, factorial(j))) if j % 2 == 0 else Fraction(0))
    return out


def _spinor_root(deg: int) -> list:
    """e^{x/2} - e^{-x/2}."""
    return [Fraction(2, 2 ** j * factorial(j)) if j % 2 else Fraction(0) for j in range(deg + 1)]


def _ahat_root(deg: int) -> list:
    sinhc = [Fraction(1, 4 ** (j // 2) * factorial(j + 1)) if j % 2 == 0 else Fraction(0)
             for j in range(deg + 1)]
    return _uinv(sinhc, deg)


def a_hat_class(sig: AlgebraSignature, M: int | None = None) -> AlgebraElement:
    """prod_i (x_i/2)/sinh(x_i/2)."""
    deg = sig.dim // 2 if M is None else M
    return root_product(sig, _ahat_root(deg))


def sym_lambda_character(kind: str, k: int, sig: AlgebraSignature, N: int | None = None) -> AlgebraElement:
    N = _N(sig, N)
    deg = sig.dim // 2
    if kind == "lambda":
        return root_product(sig, _lambda_root(k, N, deg))
    if kind == "sym":
        if k < 1:
            raise ValueError("the symmetric-power character needs level k >= 1")
        return root_product(sig, _uinv(_lambda_root(k, N, deg), deg))
    raise ValueError(f"unknown kind {kind!r}")


def _lambda_tower_root(N: int, deg: int) -> list:
    acc: list = [QSeries.constant(1, N)] + [Fraction(0)] * deg
    for k in range(1, N + 1):
        acc = _umul(acc, _lambda_root(k, N, deg), deg)
    return acc


@dataclass
class IdentityCheck:
    lhs: AlgebraElement
    rhs: AlgebraElement
    equal: bool
    certificate: tuple[str, Any] | None = None


def _compare(lhs: AlgebraElement, rhs: AlgebraElement) -> IdentityCheck:
    diff = lhs - rhs
    return IdentityCheck(lhs, rhs, diff.is_zero(), diff.first_term())


def euler_character_check(n: int, dim: int, N: int) -> IdentityCheck:
    """phi^{-n} prod_i (e^{x/2}-e^{-x/2}) prod_k (1-q^k e^{x})(1-q^k e^{-x})  vs  Pf / Wit."""
    if n % 2:
        raise ValueError("odd rank is unsupported: the Pfaffian needs even rank")
    sig = AlgebraSignature(roots=n // 2, dim=dim, N=N)
    deg = dim // 2
    phi_m2 = phi_product(N).power(-2, N)
    root = _umul(_spinor_root(deg), _lambda_tower_root(N, deg), deg)
    root = [phi_m2 * c if c else c for c in root]
    lhs = root_product(sig, root)
    rhs = sig.pfaffian() * witten_class_inverse(sig, "plain", N)
    return _compare(lhs, rhs)


def dirac_ramond_character(sig: AlgebraSignature, N: int | None = None) -> AlgebraElement:
    """phi^{2r} * A-hat * prod_{k>=1} Ch(Sym_{q^k}) over the complexified roots."""
    N = _N(sig, N)
    deg = sig.dim // 2
    root = _umul(_ahat_root(deg), _uinv(_lambda_tower_root(N, deg), deg), deg)
    phi2 = phi_product(N) ** 2
    root = [phi2 * c if c else c for c in root]
    return root_product(sig, root)


def dirac_ramond_check(n: int, dim: int, N: int) -> IdentityCheck:
    sig = AlgebraSignature(roots=n // 2, dim=dim, N=N)
    return _compare(dirac_ramond_character(sig, N), witten_class(sig, "plain", N))


def _h_signature(sig: AlgebraSignature) -> None:
    if "H" not in sig.odd_names:
        raise ValueError("signature needs the odd 3-form H")


def eta_h_transgression(sig: AlgebraSignature, variant: Any = "plain",
                        N: int | None = None) -> tuple[AlgebraElement, bool]:
    """eta_H = H * Wit * (e^{c p1} - 1)/p1 with c = -D_2/2 (or -(D_2 - W)/2 for star).

    The check is d(eta_H) == Wit(modular) - Wit(variant).
    """
    variant = _variant(variant)
    if variant is WittenVariant.MODULAR:
        raise ValueError("variant must be plain or star")
    _h_signature(sig)
    N = _N(sig, N)
    c = sig.scalar(eisenstein_geometric(2, N))
    if variant is WittenVariant.STAR:
        c = c - sig.gen("W")
    c = c.scale(Fraction(-1, 2))
    p1 = sig.p1()
    quot = sig.zero()
    term = sig.one()  # c^{j-1} p1^{j-1} / (j-1)!
    j = 1
    while True:
        piece = (term * c).scale(Fraction(1, j))
        if piece.is_zero():
            break
        quot = quot + piece
        term = (term * c * p1).scale(Fraction(1, j))
        j += 1
    wit = witten_class(sig, variant, N)
    eta = sig.gen("H") * wit * quot
    ok = apply_d(eta) == witten_class(sig, "modular", N) - wit
    return eta, ok


def euler_signature(n: int, dim: int, N: int, u_grading: bool = False) -> AlgebraSignature:
    return AlgebraSignature(roots=n // 2, dim=dim, odd=(OddGenerator("H", 3, "p1"),),
                            include_W=True, W_bound=dim // 4 + 2, include_v=True, N=N,
                            u_grading=u_grading)


def euler_anomaly_data(n: int, dim: int, N: int) -> tuple[AlgebraElement, AlgebraElement, AlgebraElement]:
    """(Z, Z_v, Z_taubar) with Z = Pf / Wit* and Z_taubar = (iota/2) W^2 H Z."""
    if n % 2:
        raise ValueError("odd rank is unsupported: the Pfaffian needs even rank")
    sig = euler_signature(n, dim, N)
    Z = sig.pfaffian() * witten_class_inverse(sig, "star", N)
    Ztb = sig.gen("W", 2, IotaRat.iota(1, Fraction(1, 2))) * sig.gen("H") * Z
    return Z, sig.zero(), Ztb


def euler_anomaly_check(n: int, dim: int, N: int) -> bool:
    Z, Zv, Ztb = euler_anomaly_data(n, dim, N)
    return apply_dbar(Z) == apply_d(Ztb) and apply_dv(Z) == apply_d(Zv)


@dataclass
class Manifest:
    dimension: int
    pontryagin_numbers: dict[tuple[int, ...], int] = field(default_factory=dict)

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> Manifest:
        try:
            dim = int(obj["dimension"])
            nums = {parse_partition(k): int(v) for k, v in obj.get("pontryagin_numbers", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed manifest: {exc}") from exc
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        return cls(dim, nums)

    @classmethod
    def load(cls, path: str | Path) -> Manifest:
        return cls.from_json(json.loads(Path(path).read_text()))

    def is_string(self) -> bool:
        return all(v == 0 for p, v in self.pontryagin_numbers.items() if 1 in p)


def witten_genus(manifest: Manifest | Mapping[str, Any], N: int) -> QSeries:
    """Pairing of the Witten class with the manifest's Pontryagin numbers."""
    if not isinstance(manifest, Manifest):
        manifest = Manifest.from_json(manifest)
    dim = manifest.dimension
    if dim % 4:
        return QSeries.zero(N)
    if not manifest.is_string():
        raise NotStringError("a Pontryagin number involving p1 is nonzero")
    if dim == 0:
        return QSeries.constant(manifest.pontryagin_numbers.get((), 1), N)
    sig = AlgebraSignature(roots=dim // 4, dim=dim, N=N)
    val = pair_with_pontryagin(witten_class(sig, "plain", N), manifest.pontryagin_numbers,
                               dim, missing_ok=lambda part: 1 in part)
    return val if isinstance(val, QSeries) else QSeries.constant(val, N)
