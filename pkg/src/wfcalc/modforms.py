"""Modular forms as weight-tagged q-series and quotient-class orders."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .qseries import PrecisionError, QSeries, eisenstein_q, phi_product


@dataclass(frozen=True)
class ModularForm:
    weight: int
    series: QSeries
    pole_order: int = 0

    def __post_init__(self) -> None:
        if self.weight % 2:
            raise ValueError("only even weights are in scope")
        if not self.series.is_zero() and self.series.valuation < -self.pole_order:
            raise ValueError("series has a pole beyond the declared order")

    @property
    def pivot(self) -> int:
        return self.series.valuation

    def to_json(self) -> dict:
        return {"weight": self.weight, "pole_order": self.pole_order, **self.series.to_json()}


@dataclass(frozen=True)
class MFBasis:
    weight: int
    pole_bound: int
    truncation: int
    forms: tuple[ModularForm, ...] = field(default_factory=tuple)

    @property
    def pivots(self) -> list[int]:
        return [f.pivot for f in self.forms]

    def __len__(self) -> int:
        return len(self.forms)

    def to_json(self) -> dict:
        return {"weight": self.weight, "pole_order": self.pole_bound,
                "truncation": self.truncation, "forms": [f.to_json() for f in self.forms]}


@dataclass(frozen=True)
class QuotientClass:
    """Class of ``representative`` in C((q)) / (c Z((q)) + MF_w)."""
    representative: QSeries
    weight: int
    lattice_scale: int = 1
    pole_bound: int = 0
    truncation: int = 20

    def __post_init__(self) -> None:
        t = self.representative.truncation
        if t is not None and t < self.truncation:
            raise PrecisionError("representative truncation below the class truncation")
        if self.lattice_scale < 1:
            raise ValueError("lattice scale must be a positive integer")


@dataclass(frozen=True)
class ClassOrder:
    order: int | None
    pole_bound: int
    truncation: int
    max_d: int
    remainder: QSeries

    def to_json(self) -> dict:
        if self.order is None:
            return {"order": None, "none_up_to": self.max_d,
                    "P": self.pole_bound, "N": self.truncation}
        return {"order": self.order, "P": self.pole_bound, "N": self.truncation}


def dim_mf(w: int) -> int:
    if w < 0 or w % 2:
        return 0
    return w // 12 if w % 12 == 2 else w // 12 + 1


def _row_reduce(rows: list[QSeries]) -> list[QSeries]:
    """Reduced echelon form by leading exponent, pivots normalized to 1."""
    basis: list[QSeries] = []
    for r in rows:
        for b in basis:
            c = r.coeff(b.valuation)
            if c:
                r = r - b.scale(c)
        if r.is_zero():
            continue
        r = r.scale(1 / r.coeffs[0])
        p = r.valuation
        basis = [b - r.scale(b.coeff(p)) if b.coeff(p) else b for b in basis]
        basis.append(r)
    return sorted(basis, key=lambda s: s.valuation)


def mf_basis(w: int, N: int) -> MFBasis:
    if not isinstance(w, int) or w < 0 or w % 2:
        raise ValueError(f"weight must be even and nonnegative, got {w!r}")
    e4, e6 = eisenstein_q(4, N), eisenstein_q(6, N)
    mons = []
    for a in range(w // 4 + 1):
        rest = w - 4 * a
        if rest % 6 == 0:
            mons.append((e4 ** a) * (e6 ** (rest // 6)))
    mons = [m.truncate(N) if m.truncation is None or m.truncation > N else m for m in mons]
    rows = _row_reduce(mons)
    if len(rows) != dim_mf(w):
        raise PrecisionError(f"truncation {N} too small to separate weight-{w} forms")
    return MFBasis(w, 0, N, tuple(ModularForm(w, r, 0) for r in rows))


def delta(N: int) -> ModularForm:
    if N < 1:
        raise ValueError("delta needs N >= 1")
    e4, e6 = eisenstein_q(4, N), eisenstein_q(6, N)
    return ModularForm(12, (e4 ** 3 - e6 ** 2).scale(Fraction(1, 1728)), 0)


def weakly_holo_basis(w: int, P: int, N: int) -> MFBasis:
    """Row-reduced basis of weight-w forms with pole order at most P, known to q^N."""
    if w % 2 or P < 0 or w + 12 * P < 0:
        raise ValueError("need even w, P >= 0 and w + 12P >= 0")
    if P == 0:
        return mf_basis(w, N)
    hi = mf_basis(w + 12 * P, N + P)
    inv = phi_product(N + P).power(-24 * P, N + P).shift(-P)
    rows = _row_reduce([(f.series * inv).truncate(N) for f in hi.forms])
    return MFBasis(w, P, N, tuple(ModularForm(w, r, P) for r in rows))


def reduce_against_basis(f: QSeries, basis: MFBasis) -> tuple[QSeries, list[Fraction]]:
    if f.truncation is not None and f.truncation < basis.truncation:
        raise PrecisionError("series truncation below basis truncation")
    rem = f.truncate(basis.truncation)
    coords = []
    for form in basis.forms:
        c = rem.coeff(form.pivot)
        coords.append(c)
        if c:
            rem = rem - form.series.scale(c)
    return rem, coords


def is_integral(f: QSeries) -> bool:
    return all(isinstance(c, Fraction) and c.denominator == 1 for c in f.coeffs)


def class_order(x: QuotientClass, max_d: int) -> ClassOrder:
    """Smallest d <= max_d with d*x trivial, certified at precision (P, N)."""
    basis = weakly_holo_basis(x.weight, x.pole_bound, x.truncation)
    rep = x.representative
    if not rep.is_rational():
        raise ValueError("representative must have rational coefficients")
    rem, _ = reduce_against_basis(rep, basis)
    c = x.lattice_scale
    for d in range(1, max_d + 1):
        if all((d * v / c).denominator == 1 for v in rem.coeffs):
            return ClassOrder(d, x.pole_bound, x.truncation, max_d, rem)
    return ClassOrder(None, x.pole_bound, x.truncation, max_d, rem)


# ---------------------------------------------------------------------------
# coefficient-group descriptors
# ---------------------------------------------------------------------------

KOMF_ROWS: tuple[tuple[str, str], ...] = (
    ("8k", "MF^Z_{4k}"),
    ("8k+1", "Z/2((q))"),
    ("8k+2", "Z/2((q))"),
    ("8k+3", "C((q))/(2Z((q))+MF_{4k+2})"),
    ("8k+4", "MF^Z_{4k+2}"),
    ("8k+5", "0"),
    ("8k+6", "0"),
    ("8k-1", "C((q))/(Z((q))+MF_{4k})"),
)

KMF_ROWS: tuple[tuple[str, str], ...] = (
    ("2k", "MF^Z_{k}"),
    ("2k-1", "C((q))/(Z((q))+MF_{k})"),
)


def _sub(w: int) -> str:
    return str(w) if 0 <= w < 10 else "{" + str(w) + "}"


def komf_descriptor(degree: int) -> str:
    """Group descriptor for the degree-``degree`` coefficient of KO_MF."""
    k, r = divmod(degree, 8)
    if r == 0:
        return f"MF^Z_{_sub(4 * k)}"
    if r in (1, 2):
        return "Z/2((q))"
    if r == 3:
        return f"C((q))/(2Z((q))+MF_{_sub(4 * k + 2)})"
    if r == 4:
        return f"MF^Z_{_sub(4 * k + 2)}"
    if r in (5, 6):
        return "0"
    return f"C((q))/(Z((q))+MF_{_sub(4 * (k + 1))})"


def kmf_descriptor(degree: int) -> str:
    if degree % 2 == 0:
        return f"MF^Z_{_sub(degree // 2)}"
    return f"C((q))/(Z((q))+MF_{_sub((degree + 1) // 2)})"
