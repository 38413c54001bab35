"""Finite-rank superconnections over the formal algebra, and their traces.

A superconnection is stored as its components ``A^[j]`` (matrices of
degree-``j`` forms, ``j = 1`` being the connection form) together with an
optional background curvature for the reference connection.  Operators act
on sections with basis vectors on the left, so composition is the plain
matrix product and ``[d, M]`` is the row-signed matrix ``sigma(dM)``.

Heat kernels ``exp(-t X)`` split ``X = S + N`` into a constant degree-0 block
``S`` (diagonalized over the rationals) and a nilpotent remainder, and are
assembled by the finite Duhamel expansion with divided differences of
``exp(-t x)``.  With ``t`` left symbolic the coefficients are ``HeatCoeff``
sums ``c t^a e^{-mu t}``; improper t-integrals of those land in ``GammaSum``,
which adjoins the incomplete-gamma values that have no closed form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, isqrt
from typing import Any, Mapping, Sequence

from .clifford import (CliffordModule, NotCliffordLinear, kernel_projector, spectral_projectors,
                       trivial_module)
from .formalcdga import (AlgebraElement, AlgebraSignature, OddGenerator, SignatureMismatch,
                         apply_d, apply_dbar, apply_dv, apply_param_derivative, exp_nilpotent)
from .linalg import GradedMatrix, inverse, matmul_dense, nullspace
from .qseries import IotaRat, QSeries, phi_product
from .scalars import ExpPoly, GaussRat, Sqrt2Scaled
from .charclasses import euler_signature


class NonConstantSpectrum(ArithmeticError):
    pass


class DivergentIntegral(ArithmeticError):
    pass


def _real(x: Any) -> Any:
    if isinstance(x, GaussRat) and not x.im:
        return x.re
    if isinstance(x, int):
        return Fraction(x)
    return x


def _exact_sqrt(x: Fraction) -> Fraction | None:
    x = Fraction(x)
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    return Fraction(a, b) if a * a == x.numerator and b * b == x.denominator else None


# ---------------------------------------------------------------------------
# heat coefficients and incomplete-gamma sums
# ---------------------------------------------------------------------------

_PLAIN = (int, Fraction, GaussRat, IotaRat, ExpPoly, Sqrt2Scaled)


def _hc(terms: dict) -> Any:
    terms = {k: v for k, v in terms.items() if v}
    if not terms:
        return Fraction(0)
    if len(terms) == 1:
        (k, v), = terms.items()
        if not k[0] and not k[1]:
            return v
    return HeatCoeff(terms)


class HeatCoeff:
    """Finite sum sum c * t^a * e^{-mu t}, a in (1/2)Z, mu rational; keys (a, mu)."""

    __slots__ = ("terms",)
    _is_scalar = True

    def __init__(self, terms: dict[tuple[Fraction, Fraction], Any]) -> None:
        self.terms = terms

    @staticmethod
    def power(a: Any, coeff: Any = Fraction(1)) -> Any:
        return _hc({(Fraction(a), Fraction(0)): coeff})

    @staticmethod
    def _terms_of(x: Any) -> dict | None:
        if isinstance(x, HeatCoeff):
            return x.terms
        if isinstance(x, _PLAIN):
            return {(Fraction(0), Fraction(0)): x} if x else {}
        return None

    def __add__(self, other: Any) -> Any:
        o = HeatCoeff._terms_of(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.items():
            out[k] = out[k] + v if k in out else v
        return _hc(out)

    __radd__ = __add__

    def __neg__(self) -> HeatCoeff:
        return HeatCoeff({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: Any) -> Any:
        o = HeatCoeff._terms_of(other)
        if o is None:
            return NotImplemented
        return self + _hc({k: -v for k, v in o.items()})

    def __rsub__(self, other: Any) -> Any:
        return (-self) + other

    def __mul__(self, other: Any) -> Any:
        o = HeatCoeff._terms_of(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for (a, m), x in self.terms.items():
            for (b, n), y in o.items():
                k = (a + b, m + n)
                v = x * y
                out[k] = out[k] + v if k in out else v
        return _hc(out)

    def __rmul__(self, other: Any) -> Any:
        o = HeatCoeff._terms_of(other)
        if o is None:
            return NotImplemented
        return _hc({k: other * v for k, v in self.terms.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: Any) -> bool:
        o = HeatCoeff._terms_of(other)
        if o is None:
            return NotImplemented
        return not (self - _hc(dict(o)))

    def __hash__(self) -> int:
        return hash(frozenset(self.terms))

    def conjugate(self) -> Any:
        return _hc({k: (v.conjugate() if hasattr(v, "conjugate") else v) for k, v in self.terms.items()})

    def evaluate(self, t0: Any) -> Any:
        """Value at a positive rational time, as an exponential polynomial."""
        t0 = Fraction(t0)
        if t0 <= 0:
            raise ValueError("evaluation time must be positive")
        out: Any = Fraction(0)
        for (a, mu), c in self.terms.items():
            out = out + ExpPoly.exp(-mu * t0, c * _rational_power(t0, a))
        return out

    def __repr__(self) -> str:
        return f"HeatCoeff({self})"

    def __str__(self) -> str:
        parts = []
        for (a, mu) in sorted(self.terms):
            f = [f"({self.terms[(a, mu)]})"]
            if a:
                f.append(f"t^({a})")
            if mu:
                f.append(f"e^(-{mu}t)")
            parts.append("*".join(f))
        return " + ".join(parts)


def _rational_power(x: Fraction, a: Fraction) -> Fraction:
    if a.denominator == 1:
        return x ** int(a)
    r = _exact_sqrt(x)
    if r is None:
        raise ValueError(f"{x} has no exact square root")
    return r ** int(2 * a)


def _gs(terms: dict) -> Any:
    terms = {k: v for k, v in terms.items() if v}
    if not terms:
        return Fraction(0)
    if list(terms) == [None]:
        return terms[None]
    return GammaSum(terms)


_SYMBOL_TEXT = {"E1": "E1({mu})", "Uh": "Ui({mu})", "Lh": "Li({mu})", "Ein": "Ein({mu})"}


class GammaSum:
    """plain + sum c * symbol; symbols are the irreducible incomplete-gamma values

    E1(mu) = int_1^inf t^-1 e^{-mu t} dt,  Ui(mu) = int_1^inf t^-1/2 e^{-mu t} dt,
    Li(mu) = int_0^1 t^-1/2 e^{-mu t} dt,  Ein(mu) = int_0^1 (1 - e^{-mu t}) t^-1 dt.
    Keys are None for the plain part or (symbol, mu).
    """

    __slots__ = ("terms",)
    _is_scalar = True

    def __init__(self, terms: dict) -> None:
        self.terms = terms

    @staticmethod
    def symbol(kind: str, mu: Fraction) -> GammaSum:
        return GammaSum({(kind, Fraction(mu)): Fraction(1)})

    @staticmethod
    def _terms_of(x: Any) -> dict | None:
        if isinstance(x, GammaSum):
            return x.terms
        if isinstance(x, _PLAIN):
            return {None: x} if x else {}
        return None

    def __add__(self, other: Any) -> Any:
        o = GammaSum._terms_of(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.items():
            out[k] = out[k] + v if k in out else v
        return _gs(out)

    __radd__ = __add__

    def __neg__(self) -> GammaSum:
        return GammaSum({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: Any) -> Any:
        o = GammaSum._terms_of(other)
        if o is None:
            return NotImplemented
        return self + _gs({k: -v for k, v in o.items()})

    def __rsub__(self, other: Any) -> Any:
        return (-self) + other

    def __mul__(self, other: Any) -> Any:
        if isinstance(other, GammaSum):
            raise TypeError("products of incomplete-gamma symbols are not represented")
        if not isinstance(other, _PLAIN):
            return NotImplemented
        return _gs({k: v * other for k, v in self.terms.items()})

    def __rmul__(self, other: Any) -> Any:
        if not isinstance(other, _PLAIN):
            return NotImplemented
        return _gs({k: other * v for k, v in self.terms.items()})

    def __truediv__(self, other: Any) -> Any:
        return self * (1 / Fraction(other))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: Any) -> bool:
        o = GammaSum._terms_of(other)
        if o is None:
            return NotImplemented
        return not (self - _gs(dict(o)))

    def __hash__(self) -> int:
        return hash(frozenset(k for k in self.terms))

    def symbols(self) -> list[tuple[str, Fraction]]:
        return sorted((k for k in self.terms if k is not None), key=str)

    def __repr__(self) -> str:
        return f"GammaSum({self})"

    def __str__(self) -> str:
        parts = []
        if None in self.terms:
            parts.append(f"({self.terms[None]})")
        for k in self.symbols():
            parts.append(f"({self.terms[k]})*" + _SYMBOL_TEXT[k[0]].format(mu=k[1]))
        return " + ".join(parts)


@lru_cache(maxsize=None)
def _upper(a: Fraction, mu: Fraction) -> Any:
    """int_1^inf t^{a-1} e^{-mu t} dt."""
    if mu < 0:
        raise DivergentIntegral("growing exponential on [1, inf)")
    if mu == 0:
        if a < 0:
            return -1 / a
        raise DivergentIntegral(f"t^{a - 1} is not integrable on [1, inf)")
    em = ExpPoly.exp(-mu)
    half = a.denominator == 2
    base = Fraction(1, 2) if half else Fraction(1)
    if a == base:
        return GammaSum.symbol("Uh", mu) if half else em * (1 / mu)
    if not half and a == 0:
        return GammaSum.symbol("E1", mu)
    if a > base:
        return (em + (a - 1) * _upper(a - 1, mu)) * (1 / mu)
    return (mu * _upper(a + 1, mu) - em) * (1 / a)


@lru_cache(maxsize=None)
def _lower(a: Fraction, mu: Fraction) -> Any:
    """Finite part of int_0^1 t^{a-1} e^{-mu t} dt.

    For a <= 0 single terms diverge at 0; the Hadamard finite part is linear
    and equals the integral on convergent combinations, which is all that
    the transgression integrands produce.
    """
    if mu == 0:
        return 1 / a if a else Fraction(0)
    em = ExpPoly.exp(-mu)
    if a == Fraction(1, 2):
        return GammaSum.symbol("Lh", mu)
    if a == 0:
        return -GammaSum.symbol("Ein", mu)
    if a == 1:
        return (1 - em) * (1 / mu)
    if a > 1:
        return ((a - 1) * _lower(a - 1, mu) - em) * (1 / mu)
    return (em + mu * _lower(a + 1, mu)) * (1 / a)


def integrate_heat(c: Any, lo: str, hi: str) -> Any:
    """Integrate a HeatCoeff over (0, 1], [1, inf) or (0, inf); ends given as '0', '1', 'inf'."""
    spans = {("0", "1"): ("lower",), ("1", "inf"): ("upper",), ("0", "inf"): ("lower", "upper")}
    if (lo, hi) not in spans:
        raise ValueError("supported ranges: (0,1], [1,inf), (0,inf)")
    terms = HeatCoeff._terms_of(c)
    if terms is None:
        raise TypeError("not a heat coefficient")
    out: Any = Fraction(0)
    for (a, mu), v in terms.items():
        for piece in spans[(lo, hi)]:
            f = _lower if piece == "lower" else _upper
            out = out + v * f(a + 1, mu)
    return out


# ---------------------------------------------------------------------------
# helpers on matrices of forms
# ---------------------------------------------------------------------------


def _lift_entry(sig: AlgebraSignature, v: Any) -> AlgebraElement:
    if isinstance(v, AlgebraElement):
        if v.sig != sig:
            raise SignatureMismatch("matrix entry lives in another signature")
        return v
    return sig.scalar(_real(v))


def lift(M: GradedMatrix, sig: AlgebraSignature) -> GradedMatrix:
    return GradedMatrix(M.parities, {k: _lift_entry(sig, v) for k, v in M.entries.items()})


def _const_matrix(M: GradedMatrix) -> GradedMatrix:
    """Entries of a constant form matrix as plain scalars; raises otherwise."""
    out = {}
    for k, v in M.entries.items():
        if isinstance(v, AlgebraElement):
            unit = v.sig.unit_key()
            if set(v.terms) - {unit}:
                raise NonConstantSpectrum("matrix entry is not a constant")
            v = v.terms.get(unit, Fraction(0))
        out[k] = _real(v)
    return GradedMatrix(M.parities, out)


def _left_scalar(M: GradedMatrix, c: AlgebraElement) -> GradedMatrix:
    """Matrix of (left multiplication by the homogeneous scalar c) o M."""
    odd = c.parity() == 1
    return GradedMatrix(M.parities, {(i, j): (-(c * v) if odd and M.parities[i] else c * v)
                                     for (i, j), v in M.entries.items()})


def _entry_map(M: GradedMatrix, f) -> GradedMatrix:
    return GradedMatrix(M.parities, {k: f(v) for k, v in M.entries.items()})


def _split_body(X: GradedMatrix, sig: AlgebraSignature) -> tuple[GradedMatrix, GradedMatrix]:
    """X = S + N with S the constant degree-0 even part and N nilpotent."""
    unit = sig.unit_key()
    s_ent: dict = {}
    n_ent: dict = {}
    for ij, e in X.entries.items():
        rest = {}
        for k, c in e.terms.items():
            if k[2] == 0 and sig.degree(k) == 0 and not k[1]:
                if k != unit:
                    raise NonConstantSpectrum("degree-0 part of the curvature is not constant")
                s_ent[ij] = _real(c)
            else:
                rest[k] = c
        if rest:
            n_ent[ij] = AlgebraElement(sig, rest, _clean=True)
    return GradedMatrix(X.parities, s_ent), GradedMatrix(X.parities, n_ent)


def _projectors(S: GradedMatrix) -> dict[Fraction, GradedMatrix]:
    if S.is_zero():
        return {Fraction(0): GradedMatrix.identity(S.parities)}
    return {mu: _entry_map(P, _real) for mu, P in spectral_projectors(S).items()}


@lru_cache(maxsize=None)
def _divided_difference(nodes: tuple[Fraction, ...]) -> Any:
    """[x_0..x_m] of x -> exp(-t x) as a HeatCoeff; nodes sorted."""
    m = len(nodes) - 1
    if nodes[0] == nodes[-1]:
        return _hc({(Fraction(m), nodes[0]): Fraction((-1) ** m, factorial(m))})
    hi = _divided_difference(nodes[1:])
    lo = _divided_difference(nodes[:-1])
    return (hi - lo) * (1 / (nodes[-1] - nodes[0]))


SYMBOLIC = None


def heat_kernel(X: GradedMatrix, sig: AlgebraSignature, t: Any = Fraction(1)) -> GradedMatrix:
    """exp(-t X) for an even form-valued X; t rational or SYMBOLIC."""
    S, N = _split_body(X, sig)
    projs = {mu: lift(P, sig) for mu, P in _projectors(S).items()}
    parities = X.parities
    total = GradedMatrix.zeros(parities)
    level = {(mu,): P for mu, P in projs.items()}
    while level:
        nxt: dict = {}
        for seq, M in level.items():
            c = _divided_difference(tuple(sorted(seq)))
            if t is not SYMBOLIC and isinstance(c, HeatCoeff):
                c = c.evaluate(t)
            total = total + M.scale_right(c)
            MN = M @ N
            if MN.is_zero():
                continue
            for mu, P in projs.items():
                M2 = MN @ P
                if not M2.is_zero():
                    key = seq + (mu,)
                    nxt[key] = nxt[key] + M2 if key in nxt else M2
        level = nxt
    return total


_SCALAR_HEAT: dict = {}


def _scalar_heat(e: AlgebraElement, t: Any) -> AlgebraElement:
    key = (e.sig, e.canonical(), t if t is SYMBOLIC else Fraction(t))
    hit = _SCALAR_HEAT.get(key)
    if hit is None:
        hit = heat_kernel(GradedMatrix((0,), {(0, 0): e}), e.sig, t).get(0, 0, e.sig.zero())
        if len(_SCALAR_HEAT) > 50000:
            _SCALAR_HEAT.clear()
        _SCALAR_HEAT[key] = hit
    return hit


def _delta_t(a: AlgebraElement, shift: Fraction = Fraction(0)) -> AlgebraElement:
    """Multiply the form-degree-j part by t^{shift - j/2}."""
    sig = a.sig
    out = {}
    for k, c in a.terms.items():
        p = shift - Fraction(sig.degree(k), 2)
        out[k] = c * HeatCoeff.power(p) if p else c
    return AlgebraElement(sig, out)


# ---------------------------------------------------------------------------
# superconnections
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SuperConnection:
    """A = sum_j A^[j] on a Clifford module, over the signature's base.

    ``components[1]`` is the connection form of the reference connection,
    whose own curvature (a closed even 2-form matrix) is ``background``.
    ``multiplicity`` groups identical lines of a diagonal, Clifford-trivial
    superconnection: line i stands for ``multiplicity[i]`` copies.
    """

    sig: AlgebraSignature
    module: CliffordModule
    components: Mapping[int, GradedMatrix]
    background: GradedMatrix | None = None
    multiplicity: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        par = self.module.parities
        comps = {}
        for j, M in self.components.items():
            if j < 0:
                raise ValueError("component degrees are nonnegative")
            if M.parities != par:
                raise ValueError(f"component {j} grading does not match the module")
            M = lift(M, self.sig)
            if M.is_zero():
                continue
            for e in M.entries.values():
                if any(self.sig.degree(k) != j for k in e.terms):
                    raise ValueError(f"component {j} has entries of the wrong form degree")
            if M.op_parity() != 1:
                raise ValueError(f"component {j} is not an odd operator")
            for c in self.module.generators:
                if not (c @ M + M @ c).is_zero():
                    raise NotCliffordLinear(f"component {j} does not anticommute with the Clifford action")
            comps[j] = M
        object.__setattr__(self, "components", dict(sorted(comps.items())))
        if self.background is not None:
            bg = lift(self.background, self.sig)
            if bg.parities != par:
                raise ValueError("background grading does not match the module")
            for e in bg.entries.values():
                if any(self.sig.degree(k) != 2 for k in e.terms):
                    raise ValueError("background curvature must be a 2-form matrix")
            if bg.op_parity() not in (0, None):
                raise ValueError("background curvature must be even")
            object.__setattr__(self, "background", bg if bg else None)
        if self.multiplicity is not None:
            if len(self.multiplicity) != len(par):
                raise ValueError("one multiplicity per line")
            if self.module.n:
                raise ValueError("grouped lines need a Clifford-trivial module")
            if not self.is_diagonal():
                raise ValueError("grouped lines need a diagonal superconnection")
            object.__setattr__(self, "multiplicity", tuple(int(m) for m in self.multiplicity))

    @classmethod
    def build(cls, sig: AlgebraSignature, module: CliffordModule | Sequence[int],
              components: Mapping[int, Any], background: Any = None,
              multiplicity: Sequence[int] | None = None) -> SuperConnection:
        """Accepts row lists or GradedMatrix values; a parity list means a Clifford-trivial module."""
        mod = module if isinstance(module, CliffordModule) else trivial_module(tuple(module))

        def mat(x: Any) -> GradedMatrix:
            return x if isinstance(x, GradedMatrix) else GradedMatrix.from_rows(x, mod.parities)
        bg = None if background is None else mat(background)
        return cls(sig, mod, {j: mat(m) for j, m in components.items()}, bg,
                   None if multiplicity is None else tuple(multiplicity))

    @property
    def parities(self) -> tuple[int, ...]:
        return self.module.parities

    @property
    def n(self) -> int:
        return self.module.n

    def component(self, j: int) -> GradedMatrix:
        return self.components.get(j, GradedMatrix.zeros(self.parities))

    def total(self) -> GradedMatrix:
        out = GradedMatrix.zeros(self.parities)
        for M in self.components.values():
            out = out + M
        return out

    def curvature(self) -> GradedMatrix:
        """A^2 = F_bg + sigma(dM) + M^2 for M the sum of the matrix components."""
        M = self.total()
        out = _entry_map(M, apply_d).sigma() + M @ M
        if self.background is not None:
            out = out + self.background
        return out

    def is_diagonal(self) -> bool:
        mats = list(self.components.values()) + ([self.background] if self.background else [])
        return all(i == j for m in mats for (i, j) in m.entries)

    def replace(self, components: Mapping[int, GradedMatrix] | None = None,
                background: Any = "keep") -> SuperConnection:
        bg = self.background if isinstance(background, str) else background
        return SuperConnection(self.sig, self.module, self.components if components is None else components,
                               bg, self.multiplicity)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SuperConnection):
            return NotImplemented
        z = GradedMatrix.zeros(self.parities)
        keys = set(self.components) | set(other.components)
        return (self.sig == other.sig and self.module == other.module
                and self.multiplicity == other.multiplicity
                and all(self.components.get(j, z) == other.components.get(j, z) for j in keys)
                and (self.background or z) == (other.background or z))

    __hash__ = None  # type: ignore[assignment]


def rescale(A: SuperConnection, t: Any) -> SuperConnection:
    """Scale A^[j] by t^{(1-j)/2}.

    ``t`` is a nonzero rational whose square root is exact, or the name of a
    signature parameter ``s`` standing for ``t = s^2``.
    """
    sig = A.sig
    if isinstance(t, str):
        if t not in sig.even_names:
            raise KeyError(f"unknown parameter {t!r}")
        return A.replace({j: _entry_map(M, lambda e, j=j: e * sig.gen(t, 1 - j))
                          for j, M in A.components.items()})
    t = Fraction(t)
    if t == 0:
        raise ZeroDivisionError("rescaling needs an invertible t")
    r = _exact_sqrt(t)
    if r is None:
        raise ValueError(f"{t} has no exact square root; pass a parameter name for a formal root")
    return A.replace({j: M.scale_right(r ** (1 - j)) for j, M in A.components.items()})


def _gamma_raw(module: CliffordModule) -> GradedMatrix | None:
    if not module.n:
        return None
    g, _ = module.gamma_matrix()
    return _entry_map(g, _real)


def _trace_raw(A: SuperConnection, X: GradedMatrix, parity: int) -> AlgebraElement:
    """str(Gamma_raw X) without the 2^{-|n|/2} normalization; X of operator parity ``parity``."""
    sig = A.sig
    if A.multiplicity is not None:
        acc = sig.zero()
        signs = [(-1) ** (p * (1 + parity)) for p in A.parities]
        for i, m in enumerate(A.multiplicity):
            v = X.entries.get((i, i))
            if v is not None and m:
                acc = acc + v.scale(Fraction(signs[i] * m))
        return acc
    g = _gamma_raw(A.module)
    Y = X if g is None else lift(g, sig) @ X
    val = Y.supertrace((parity + A.n) % 2)
    return val if isinstance(val, AlgebraElement) else sig.scalar(val)


def _normalize(a: AlgebraElement, n: int) -> AlgebraElement:
    if n % 2 == 0:
        return a.scale(Fraction(1, 2 ** (abs(n) // 2)))
    return a.scale(Sqrt2Scaled(Fraction(1), -abs(n)))


def _heat(A: SuperConnection, X: GradedMatrix, t: Any) -> GradedMatrix:
    if A.is_diagonal() and all(i == j for (i, j) in X.entries):
        ent = {(i, i): _scalar_heat(X.get(i, i, A.sig.zero()), t) for i in range(len(A.parities))}
        return GradedMatrix(A.parities, ent)
    return heat_kernel(X, A.sig, t)


def _heat_trace_raw(A: SuperConnection, t: Any) -> AlgebraElement:
    """str(Gamma_raw exp(-t A^2)), grouped by identical lines when diagonal."""
    X = A.curvature()
    if A.is_diagonal() and all(i == j for (i, j) in X.entries):
        sig = A.sig
        weights: dict = {}
        reps: dict = {}
        mult = A.multiplicity or (1,) * len(A.parities)
        g = _gamma_raw(A.module)
        if g is not None:
            return _trace_raw(A, _heat(A, X, t), 0)
        for i, p in enumerate(A.parities):
            e = X.get(i, i, sig.zero())
            key = e.canonical()
            reps[key] = e
            weights[key] = weights.get(key, 0) + (-1) ** p * mult[i]
        acc = sig.zero()
        for key, w in weights.items():
            if w:
                acc = acc + _scalar_heat(reps[key], t).scale(Fraction(w))
        return acc
    return _trace_raw(A, heat_kernel(X, A.sig, t), 0)


def chern_form(A: SuperConnection, u: bool = False, normalized: bool = True) -> AlgebraElement:
    """sTr_{Cl_n}(exp(-A^2)); with ``u`` the degree-j part carries u^{(j-n)/2}."""
    val = _heat_trace_raw(A, Fraction(1))
    if normalized:
        val = _normalize(val, A.n)
    return val.u_graded(A.n) if u else val


def chern_simons(family: SuperConnection, param: str, s0: Any, s1: Any,
                 normalized: bool = True) -> AlgebraElement:
    """Transgression form with d(CS) = Ch(A(s1)) - Ch(A(s0)) for a family polynomial in ``param``."""
    sig = family.sig
    X = family.curvature()
    S, _ = _split_body(X, sig)
    if S and any(apply_param_derivative(v, param) for v in lift(S, sig).entries.values()):
        raise NonConstantSpectrum("the constant block of the curvature depends on the parameter")
    dA = _entry_map(family.total(), lambda e: apply_param_derivative(e, param))
    if dA.is_zero() or Fraction(s0) == Fraction(s1):
        return sig.zero()
    integrand = _trace_raw(family, dA @ heat_kernel(X, sig, Fraction(1)), 1)
    val = -integrand.integrate_param(param, s0, s1)
    return _normalize(val, family.n) if normalized else val


def rescaling_transgression(A: SuperConnection, lo: str, hi: str, normalized: bool = False) -> AlgebraElement:
    """CS over the rescaling family A_t for t in (0,1], [1,inf) or (0,inf).

    The integrand is (1/2) t^{-1/2} delta_t str(Gamma N_A exp(-t A^2)) with
    N_A = sum (1 - j) A^[j]; the result has d(CS) = Ch(A_hi) - Ch(A_lo).
    """
    sig = A.sig
    N_A = GradedMatrix.zeros(A.parities)
    for j, M in A.components.items():
        if j != 1:
            N_A = N_A + M.scale_right(Fraction(1 - j))
    if N_A.is_zero():
        return sig.zero()
    raw = _trace_raw(A, N_A @ heat_kernel(A.curvature(), sig, SYMBOLIC), 1)
    alpha = _delta_t(raw, Fraction(-1, 2)).scale(Fraction(1, 2))
    val = -alpha.map_coeffs(lambda c: integrate_heat(c, lo, hi))
    return _normalize(val, A.n) if normalized else val


def transgression_check(A: SuperConnection, t: Any, param: str) -> bool:
    """Ch(rescale(A, t)) - Ch(A) == d CS over the family s -> rescale(A, s^2), s in [1, sqrt t].

    Needs (A^[0])^2 nilpotent; otherwise use ``spectral_cutoff``.
    """
    r = _exact_sqrt(Fraction(t))
    if r is None:
        raise ValueError("t needs an exact square root")
    fam = rescale(A, param)
    cs = chern_simons(fam, param, 1, r, normalized=False)
    return apply_d(cs) == _heat_trace_raw(rescale(A, t), 1) - _heat_trace_raw(A, 1)


# ---------------------------------------------------------------------------
# spectral cutoffs
# ---------------------------------------------------------------------------


@dataclass
class CutoffResult:
    subconnection: SuperConnection | None
    eta: AlgebraElement
    check: bool
    rank: int
    doubled: SuperConnection | None = None

    @property
    def ok(self) -> bool:
        return self.check


def _image_basis(p: GradedMatrix) -> tuple[list[list[Any]], list[list[Any]], list[int]]:
    """Homogeneous basis K of im p (columns), orthogonal left inverse L, and parities."""
    n = p.size
    one = GaussRat(1)
    rows = [[GaussRat(int(i == j)) - GaussRat.coerce(p.get(i, j, 0)) for j in range(n)] for i in range(n)]
    ker = nullspace(rows, GaussRat(0), one) if n else []
    ker.sort(key=lambda v: next(p.parities[i] for i in range(n) if v[i]))
    par = [next(p.parities[i] for i in range(n) if v[i]) for v in ker]
    if not ker:
        return [], [], []
    K = [[v[i] for v in ker] for i in range(n)]
    Kh = [[v[i].conjugate() for i in range(n)] for v in ker]
    L = matmul_dense(inverse(matmul_dense(Kh, K, GaussRat(0)), one, GaussRat(0)), Kh, GaussRat(0))
    if GradedMatrix.from_rows(matmul_dense(K, L, GaussRat(0)), p.parities) != _entry_map(p, GaussRat.coerce):
        raise ValueError("the cutoff projector is not orthogonal: A^[0] must be self-adjoint")
    return [[_real(x) for x in v] for v in ker], [[_real(x) for x in r] for r in L], par


def _restrict(M: GradedMatrix, cols: list, L: list, par: list[int], sig: AlgebraSignature) -> GradedMatrix:
    out = M.restrict(cols=cols, left_inverse=L, parities=par)
    return _entry_map(out, lambda v: _lift_entry(sig, _real(v)) if not isinstance(v, AlgebraElement)
                      else v.map_coeffs(_real))


def spectral_cutoff(A: SuperConnection, lam: Any, param: str | None = None) -> CutoffResult:
    """Index-bundle data below ``lam`` for (A^[0])^2.

    eta = CS_{(0,inf)}(A') - CS_{[1,inf)}(A) with A' = p A^[0] p + p nabla p on
    H = im p, so that d eta = Ch(A) - Ch(p nabla p).  With ``param`` the
    doubled family on E + Pi H is also returned.
    """
    sig = A.sig
    if A.multiplicity is not None:
        raise ValueError("expand grouped lines before taking a cutoff")
    lam = Fraction(lam)
    A0 = _const_matrix(A.component(0))
    S = A0 @ A0
    projs = _projectors(S)
    if lam in projs:
        raise ValueError(f"cutoff {lam} is an eigenvalue of (A^[0])^2")
    p = GradedMatrix.zeros(A.parities)
    for mu, P in projs.items():
        if mu < lam:
            p = p + P
    if A.background is not None:
        bg = A.background
        pl = lift(p, sig)
        if not (bg @ pl - pl @ bg).is_zero():
            raise ValueError("background curvature must preserve the cutoff subbundle")
    cols, L, par = _image_basis(p)
    ch_A = _heat_trace_raw(A, 1)
    cs_A = rescaling_transgression(A, "1", "inf")
    if not cols:
        eta = -cs_A
        ok = apply_d(eta) == ch_A
        return CutoffResult(None, _normalize(eta, A.n), ok, 0)
    gens = tuple(_restrict(lift(c, sig), cols, L, par, sig).map(
        lambda e: e.constant_term() if isinstance(e, AlgebraElement) else e) for c in A.module.generators)
    gens = tuple(GradedMatrix(g.parities, {k: GaussRat(v) if not isinstance(v, GaussRat) else v
                                           for k, v in g.entries.items()}) for g in gens)
    sub_mod = CliffordModule(A.n, tuple(par), gens)
    comps = {}
    if 1 in A.components:
        comps[1] = _restrict(A.components[1], cols, L, par, sig)
    bg = None if A.background is None else _restrict(A.background, cols, L, par, sig)
    nabla = SuperConnection(sig, sub_mod, comps, bg)
    prime = nabla.replace({**comps, 0: _restrict(lift(A0, sig), cols, L, par, sig)})
    eta = rescaling_transgression(prime, "0", "inf") - cs_A
    ok = apply_d(eta) == ch_A - _heat_trace_raw(nabla, 1)
    doubled = doubled_family(A, cols, L, par, nabla, param) if param else None
    return CutoffResult(nabla, _normalize(eta, A.n), ok, len(cols), doubled)


def doubled_family(A: SuperConnection, cols: list, L: list, par: list[int],
                   nabla: SuperConnection, param: str) -> SuperConnection:
    """s -> [[A^[0], s i], [s p, 0]] + (A^[>=1] + p nabla p) on E + Pi H."""
    sig = A.sig
    n, k = len(A.parities), len(par)
    flip = [1 - q for q in par]
    parities = tuple(A.parities) + tuple(flip)
    s = sig.gen(param)

    def embed_blocks(top: GradedMatrix | None, bottom: GradedMatrix | None) -> dict:
        ent = {}
        if top is not None:
            ent.update(top.entries)
        if bottom is not None:
            ent.update({(i + n, j + n): v for (i, j), v in bottom.entries.items()})
        return ent
    comps: dict[int, GradedMatrix] = {}
    a0 = dict(embed_blocks(A.component(0), None))
    for b in range(k):
        for i in range(n):
            if cols[b][i]:
                a0[(i, n + b)] = s.scale(cols[b][i])
            if L[b][i]:
                a0[(n + b, i)] = s.scale(L[b][i])
    comps[0] = GradedMatrix(parities, a0)
    for j, M in A.components.items():
        if j == 0:
            continue
        comps[j] = GradedMatrix(parities, embed_blocks(M, nabla.component(1) if j == 1 else None))
    gens = []
    for c, c2 in zip(A.module.generators, nabla.module.generators):
        gens.append(GradedMatrix(parities, embed_blocks(c, -c2)))
    bg = None
    if A.background is not None or nabla.background is not None:
        bg = GradedMatrix(parities, embed_blocks(A.background, nabla.background))
    return SuperConnection(sig, CliffordModule(A.n, parities, tuple(gens)), comps, bg)


# ---------------------------------------------------------------------------
# the E^{2|1} supersemigroup
# ---------------------------------------------------------------------------


def grassmann_signature(m: int, params: tuple[str, ...] = ()) -> AlgebraSignature:
    return AlgebraSignature(odd=tuple(OddGenerator(f"th{i + 1}", 0) for i in range(m)), params=params)


@dataclass(frozen=True, eq=False)
class SuperPoint:
    tau: AlgebraElement
    taubar: AlgebraElement
    eta: AlgebraElement
    ell: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        sig = self.tau.sig
        if self.taubar.sig != sig or self.eta.sig != sig:
            raise SignatureMismatch("point coordinates live in different rings")
        if self.tau.parity() != 0 or self.taubar.parity() != 0:
            raise ValueError("tau and taubar must be even")
        if self.eta and self.eta.parity() != 1:
            raise ValueError("eta must be odd")
        if Fraction(self.ell) <= 0:
            raise ValueError("ell must be positive")
        object.__setattr__(self, "ell", Fraction(self.ell))

    @property
    def sig(self) -> AlgebraSignature:
        return self.tau.sig

    @classmethod
    def unit(cls, sig: AlgebraSignature, ell: Any = 1) -> SuperPoint:
        return cls(sig.zero(), sig.zero(), sig.zero(), Fraction(ell))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SuperPoint):
            return NotImplemented
        return (self.tau == other.tau and self.taubar == other.taubar
                and self.eta == other.eta and self.ell == other.ell)

    __hash__ = None  # type: ignore[assignment]


def super_point_multiply(g: SuperPoint, h: SuperPoint) -> SuperPoint:
    """(tau, taubar, eta)(tau', taubar', eta') = (tau + tau', taubar + taubar' + eta eta', eta + eta')."""
    if g.sig != h.sig:
        raise SignatureMismatch("points live in different Grassmann rings")
    if g.ell != h.ell:
        raise ValueError("points carry different ell")
    return SuperPoint(g.tau + h.tau, g.taubar + h.taubar + g.eta * h.eta, g.eta + h.eta, g.ell)


@dataclass(frozen=True)
class SuperSemigroupRep:
    """Blocks k -> A_k; ``clifford_rank`` is the n of the normalized trace."""

    sig: AlgebraSignature
    clifford_rank: int
    blocks: Mapping[int, SuperConnection] = field(hash=False)

    def __post_init__(self) -> None:
        for k, A in self.blocks.items():
            if not isinstance(k, int):
                raise TypeError("weights must be integers")
            if A.sig != self.sig:
                raise SignatureMismatch(f"block {k} lives in another signature")
        object.__setattr__(self, "blocks", dict(sorted(self.blocks.items())))

    @property
    def min_weight(self) -> int:
        return min(self.blocks) if self.blocks else 0


def _endomorphism(A: SuperConnection) -> GradedMatrix:
    if set(A.components) - {0} or A.background is not None:
        raise ValueError("semigroup blocks must be constant odd endomorphisms")
    return _const_matrix(A.component(0))


def _split_const(a: AlgebraElement) -> tuple[Fraction, AlgebraElement]:
    c = a.constant_term()
    if isinstance(c, GaussRat):
        if c.im:
            raise ValueError("reduced parts must be rational")
        c = c.re
    return Fraction(c), a - a.sig.scalar(c)


def _block_operator(A: GradedMatrix, k: int, g: SuperPoint) -> GradedMatrix:
    sig = g.sig
    par = A.parities
    ident = lift(GradedMatrix.identity(par), sig)
    tau0, tau_n = _split_const(g.tau)
    # t = taubar - tau; the opposite sign breaks the law on the eta eta' term
    t0, t_n = _split_const(g.taubar - g.tau)
    phase = exp_nilpotent(tau_n.scale(IotaRat.iota(1, Fraction(k) / g.ell)))
    if k and tau0:
        phase = phase.scale(ExpPoly.exp(IotaRat.iota(1, k * tau0 / g.ell)))
    A2 = A @ A
    E = GradedMatrix.zeros(par)
    for mu, P in _projectors(A2).items():
        E = E + P.scale_right(ExpPoly.exp(-t0 * mu))
    E = lift(E, sig)
    step = _left_scalar(lift(A2, sig), -t_n)
    series = ident
    term = ident
    m = 1
    while True:
        term = (term @ step).scale_right(Fraction(1, m))
        if term.is_zero():
            break
        series = series + term
        m += 1
    eta_a = _left_scalar(lift(A, sig), g.eta) if g.eta else GradedMatrix.zeros(par)
    return _left_scalar(E @ series @ (ident + eta_a), phase)


def semigroup_evaluate(rep: SuperSemigroupRep, g: SuperPoint) -> dict[int, GradedMatrix]:
    """rho(tau, taubar, eta) = (+)_k e^{iota k tau/ell} exp(-t A_k^2)(1 + eta A_k), t = taubar - tau."""
    if g.sig != rep.sig:
        raise SignatureMismatch("point and representation use different Grassmann rings")
    return {k: _block_operator(_endomorphism(A), k, g) for k, A in rep.blocks.items()}


def semigroup_law_check(rep: SuperSemigroupRep, g: SuperPoint, h: SuperPoint) -> bool:
    left = semigroup_evaluate(rep, g)
    right = semigroup_evaluate(rep, h)
    prod = semigroup_evaluate(rep, super_point_multiply(g, h))
    return all(left[k] @ right[k] == prod[k] for k in rep.blocks)


@dataclass
class LOperators:
    L0: dict[int, GradedMatrix]
    Lbar0: dict[int, GradedMatrix]
    Gbar0: dict[int, GradedMatrix]
    sig: AlgebraSignature
    ell: Fraction

    def checks(self) -> dict[str, bool]:
        sq = all(self.Gbar0[k] @ self.Gbar0[k] == self.Lbar0[k] for k in self.L0)
        comm = all((self.L0[k] @ self.Lbar0[k]) == (self.Lbar0[k] @ self.L0[k]) for k in self.L0)
        weights = all(self.L0[k] - self.Lbar0[k] == lift(GradedMatrix.identity(self.L0[k].parities), self.sig)
                      .scale_right(Fraction(k)) for k in self.L0)
        return {"gbar_squared": sq, "commute": comm, "integer_weights": weights}


def l_operators(rep: SuperSemigroupRep, ell: Any = 1) -> LOperators:
    """L0 = k + kappa^2 A_k^2, Lbar0 = kappa^2 A_k^2, Gbar0 = kappa A_k with kappa^2 = ell/(2 pi)."""
    sig = AlgebraSignature(params=("kappa",))
    kappa = sig.gen("kappa")
    L0, Lb, Gb = {}, {}, {}
    for k, A in rep.blocks.items():
        M = lift(_endomorphism(A), sig)
        ident = lift(GradedMatrix.identity(M.parities), sig)
        Gb[k] = M.scale_right(kappa)
        Lb[k] = (M @ M).scale_right(kappa * kappa)
        L0[k] = ident.scale_right(Fraction(k)) + Lb[k]
    return LOperators(L0, Lb, Gb, sig, Fraction(ell))


# ---------------------------------------------------------------------------
# partition traces and the field-theory datum
# ---------------------------------------------------------------------------


def block_heat_trace(A: SuperConnection, normalized: bool = True) -> AlgebraElement:
    """sTr_{Cl_n}(exp(-A(t)^2)) with t symbolic (HeatCoeff coefficients)."""
    val = _delta_t(_heat_trace_raw(A, SYMBOLIC))
    return _normalize(val, A.n) if normalized else val


def _t_to_W(a: AlgebraElement) -> AlgebraElement:
    """Replace t^{-b} by W^b; any other t-dependence is an error."""
    sig = a.sig
    out = sig.zero()
    for k, c in a.terms.items():
        terms = HeatCoeff._terms_of(c)
        if terms is None:
            terms = {(Fraction(0), Fraction(0)): c}
        unit = AlgebraElement(sig, {k: Fraction(1)}, _clean=True)
        for (p, mu), v in terms.items():
            if mu or p > 0 or p.denominator != 1:
                raise ValueError("block trace is not polynomial in 1/t; use block_heat_trace")
            if p and not sig.include_W:
                raise ValueError("the signature has no W symbol for powers of 1/t")
            out = out + (unit * sig.gen("W", int(-p)) if p else unit).scale(v)
    return out


def partition_trace(rep: SuperSemigroupRep, n: int | None = None, ell: Any = 1) -> AlgebraElement:
    """phi^{-n} sum_k q^k sTr(exp(-A_k(t)^2)) with t^{-1} -> W.

    ``ell`` only labels the q = e^{2 pi i tau/ell} parameterization.
    """
    n = rep.clifford_rank if n is None else n
    sig = rep.sig
    N = sig.N
    if rep.blocks and rep.min_weight < -N:
        raise ValueError("weights below the truncation window")
    total = sig.zero()
    for k, A in rep.blocks.items():
        if k > N:
            continue
        tr = _t_to_W(block_heat_trace(A))
        total = total + tr * QSeries.monomial(1, k, N)
    return total * phi_product(N).power(-n, N) if n else total


def rep_mckean_singer(rep: SuperSemigroupRep) -> dict[int, bool]:
    """Per block: the heat supertrace is constant in t and equals the kernel superdimension."""
    out = {}
    for k, A in rep.blocks.items():
        D = _endomorphism(A)
        if D.conj_transpose() != D:
            raise ValueError(f"block {k} is not self-adjoint")
        h = block_heat_trace(A).constant_term()
        terms = HeatCoeff._terms_of(h) or {}
        const = all(not v for (a, mu), v in terms.items() if a or mu)
        sd = _normalize(_trace_raw(A, lift(kernel_projector(D), A.sig), 0), A.n).constant_term()
        out[k] = const and terms.get((Fraction(0), Fraction(0)), Fraction(0)) == sd
    return out


@dataclass
class EftData:
    Z: AlgebraElement
    Z_v: AlgebraElement
    Z_taubar: AlgebraElement
    n: int = 0


@dataclass
class EftReport:
    closed: bool
    anti_holomorphic: bool
    volume: bool
    certificates: dict[str, Any]

    @property
    def ok(self) -> bool:
        return self.closed and self.anti_holomorphic and self.volume


def eft_verify(data: EftData) -> EftReport:
    """dZ = 0, d/dtaubar Z = d Z_taubar, d/dv Z = d Z_v."""
    dz = apply_d(data.Z)
    tb = apply_dbar(data.Z) - apply_d(data.Z_taubar)
    vv = apply_dv(data.Z) - apply_d(data.Z_v)
    certs = {name: diff.first_term() for name, diff in (("closed", dz), ("taubar", tb), ("volume", vv))
             if not diff.is_zero()}
    return EftReport(dz.is_zero(), tb.is_zero(), vv.is_zero(), certs)


@dataclass(frozen=True)
class FermionCharacter:
    series: QSeries
    ell_half_power: int

    def __str__(self) -> str:
        if not self.ell_half_power:
            return str(self.series)
        h = self.ell_half_power
        ell = f"ℓ^{{{h}/2}}" if h % 2 else (f"ℓ^{h // 2}" if h != 2 else "ℓ")
        return f"({self.series})·{ell}"


def fermion_trace_normalization(n: int, N: int) -> FermionCharacter:
    """phi(q)^n with the ell^{n/2} prefactor kept as metadata."""
    if N < 0:
        raise ValueError("truncation must be nonnegative")
    if n < 0:
        raise ValueError("fermion count must be nonnegative")
    return FermionCharacter(phi_product(N).power(n, N) if n else QSeries.constant(1, N), n)


# ---------------------------------------------------------------------------
# the Euler-class representation
# ---------------------------------------------------------------------------

_H_SCALE = Fraction(-1, 2)


def _root_lines(N: int) -> dict[tuple[int, Fraction, int], int]:
    """Lines (weight, character exponent, parity) of one complex root: spinor times fermion levels."""
    lines = {(0, Fraction(1, 2), 0): 1, (0, Fraction(-1, 2), 1): 1}
    for j in range(1, N + 1):
        level = {(0, Fraction(0), 0): 1, (j, Fraction(1), 1): 1, (j, Fraction(-1), 1): 1,
                 (2 * j, Fraction(0), 0): 1}
        nxt: dict = {}
        for (k, e, p), m in lines.items():
            for (k2, e2, p2), m2 in level.items():
                if k + k2 > N:
                    continue
                key = (k + k2, e + e2, (p + p2) % 2)
                nxt[key] = nxt.get(key, 0) + m * m2
        lines = nxt
    return lines


def euler_rep(n: int, dim: int, N: int) -> SuperSemigroupRep:
    """Blocks A_k = nabla_k - H/2 on the weight-k lines of the rank-n Euler module."""
    if n % 2 or n <= 0:
        raise ValueError("the Euler representation needs a positive even rank")
    sig = euler_signature(n, dim, N)
    r = n // 2
    per_root = _root_lines(N)
    combined: dict = {(0, (), 0): 1}
    for _ in range(r):
        nxt: dict = {}
        for (k, es, p), m in combined.items():
            for (k2, e2, p2), m2 in per_root.items():
                if k + k2 > N:
                    continue
                key = (k + k2, es + (e2,), (p + p2) % 2)
                nxt[key] = nxt.get(key, 0) + m * m2
        combined = nxt
    by_k: dict[int, list] = {}
    for (k, es, p), m in sorted(combined.items()):
        by_k.setdefault(k, []).append((es, p, m))
    H = sig.gen("H", 1, _H_SCALE)
    blocks = {}
    for k, lines in by_k.items():
        par = tuple(p for _, p, _ in lines)
        comp = {(i, i): (-H if p else H) for i, (_, p, _) in enumerate(lines)}
        bg = {}
        for i, (es, _, _) in enumerate(lines):
            f = sig.zero()
            for a, e in enumerate(es):
                if e:
                    f = f - sig.root(a).scale(e)
            if f:
                bg[(i, i)] = f
        blocks[k] = SuperConnection(sig, trivial_module(par), {3: GradedMatrix(par, comp)},
                                    GradedMatrix(par, bg), tuple(m for _, _, m in lines))
    return SuperSemigroupRep(sig, n, blocks)


def euler_eft_data(n: int, dim: int, N: int) -> EftData:
    """(Z, Z_v, Z_taubar) from the Euler representation's partition trace."""
    rep = euler_rep(n, dim, N)
    Z = partition_trace(rep, n)
    sig = rep.sig
    Ztb = sig.gen("W", 2, IotaRat.iota(1, Fraction(1, 2))) * sig.gen("H") * Z
    return EftData(Z, sig.zero(), Ztb, n)


# ---------------------------------------------------------------------------
# super hermitian pairings
# ---------------------------------------------------------------------------


def _conj(x: Any) -> Any:
    return x.conjugate() if hasattr(x, "conjugate") else x


def pairing_adjunction_check(A: SuperConnection, beta: GradedMatrix | Sequence[Sequence[Any]]) -> bool:
    """Adjunction of A against the constant super hermitian pairing ``beta``.

    beta_ij = <e_i, e_j> must satisfy beta_ij = (-1)^{p_i p_j} conj(beta_ji) and vanish
    between opposite parities.  The connection form satisfies
    <nabla e_i, e_j> + (-1)^{p_i} <e_i, nabla e_j> = 0 with
    <e_i w, e_j v> = (-1)^{|w| p_i} conj(w) beta_ij v.  Every other component
    obeys the degree-k rule M^dagger = (-1)^{k(k-1)/2} M for the associated
    positive pairing (beta on even vectors, -i beta on odd ones).
    """
    par = A.parities
    B = beta if isinstance(beta, GradedMatrix) else GradedMatrix.from_rows(beta, par)
    B = _entry_map(B, GaussRat.coerce)
    if B.parities != par:
        raise ValueError("pairing grading does not match")
    n = len(par)
    for i in range(n):
        for j in range(n):
            b = B.get(i, j, GaussRat(0))
            if b and par[i] != par[j]:
                raise ValueError("pairing must be even")
            want = B.get(j, i, GaussRat(0)).conjugate()
            if par[i] and par[j]:
                want = -want
            if b != want:
                raise ValueError("pairing is not super hermitian")
    sig = A.sig
    M = A.component(1)
    for i in range(n):
        for j in range(n):
            acc = sig.zero()
            for k in range(n):
                mki = M.entries.get((k, i))
                bkj = B.get(k, j, GaussRat(0))
                if mki is not None and bkj:
                    term = mki.conjugate() * bkj
                    acc = acc + (-term if par[k] else term)
                mkj = M.entries.get((k, j))
                bik = B.get(i, k, GaussRat(0))
                if mkj is not None and bik:
                    term = mkj * bik
                    acc = acc + (-term if par[i] else term)
            if acc:
                return False
    G = GradedMatrix(par, {(i, j): (v * GaussRat(0, -1) if par[i] else v) for (i, j), v in B.entries.items()})
    rows = G.to_rows(GaussRat(0))
    try:
        Ginv = GradedMatrix.from_rows(inverse(rows, GaussRat(1), GaussRat(0)), par)
    except ZeroDivisionError:
        raise ValueError("pairing is degenerate") from None
    Gl, Ginvl = lift(_entry_map(G, _real), sig), lift(_entry_map(Ginv, _real), sig)
    for k, Mk in A.components.items():
        if k == 1:
            continue
        adj = Ginvl @ _entry_map(Mk.transpose(), lambda e: e.conjugate()) @ Gl
        sign = -1 if (k * (k - 1) // 2) % 2 else 1
        if adj != (Mk if sign > 0 else -Mk):
            return False
    return True


# ---------------------------------------------------------------------------
# random test objects
# ---------------------------------------------------------------------------


def random_orthogonal(rng: random.Random, k: int) -> list[list[Fraction]]:
    """Cayley transform of a random rational skew-symmetric matrix."""
    K = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            x = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            K[i][j], K[j][i] = x, -x
    ident = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    a = [[ident[i][j] - K[i][j] for j in range(k)] for i in range(k)]
    b = [[ident[i][j] + K[i][j] for j in range(k)] for i in range(k)]
    return matmul_dense(a, inverse(b))


def random_odd_symmetric(rng: random.Random, p: int, q: int, kernel_bias: float = 0.3) -> GradedMatrix:
    """[[0, B^T], [B, 0]] with B = U Sigma V over Q, so the square has rational spectrum."""
    U, V = random_orthogonal(rng, q), random_orthogonal(rng, p)
    Sig = [[Fraction(0)] * p for _ in range(q)]
    for i in range(min(p, q)):
        if rng.random() > kernel_bias:
            Sig[i][i] = Fraction(rng.randint(1, 3))
    B = matmul_dense(matmul_dense(U, Sig), V) if p and q else [[Fraction(0)] * p for _ in range(q)]
    ent = {}
    for i in range(q):
        for j in range(p):
            if B[i][j]:
                ent[(p + i, j)] = B[i][j]
                ent[(j, p + i)] = B[i][j]
    return GradedMatrix((0,) * p + (1,) * q, ent)


def random_odd_nilpotent(rng: random.Random, p: int, q: int) -> GradedMatrix:
    """Odd matrix mapping even to odd only, so its square vanishes."""
    ent = {(p + i, j): Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for i in range(q) for j in range(p)}
    return GradedMatrix((0,) * p + (1,) * q, ent)


def random_semigroup_rep(rng: random.Random, sig: AlgebraSignature, max_blocks: int = 3) -> SuperSemigroupRep:
    blocks = {}
    for k in rng.sample(range(-1, 4), rng.randint(1, max_blocks)):
        p, q = rng.randint(1, 2), rng.randint(1, 2)
        M = random_odd_symmetric(rng, p, q) if rng.random() < 0.6 else random_odd_nilpotent(rng, p, q)
        blocks[k] = SuperConnection(sig, trivial_module(M.parities), {0: M})
    return SuperSemigroupRep(sig, 0, blocks)


def _random_grassmann(rng: random.Random, sig: AlgebraSignature, odd: bool) -> AlgebraElement:
    m = len(sig.odd)
    gens = [sig.gen(g.name) for g in sig.odd]
    out = sig.zero()
    if odd:
        for g in gens:
            out = out + g.scale(Fraction(rng.randint(-2, 2)))
        if m >= 3 and rng.random() < 0.5:
            out = out + (gens[0] * gens[1] * gens[2]).scale(Fraction(rng.randint(-2, 2)))
        return out
    for a in range(m):
        for b in range(a + 1, m):
            if rng.random() < 0.5:
                out = out + (gens[a] * gens[b]).scale(Fraction(rng.randint(-2, 2)))
    return out


def random_super_point(rng: random.Random, sig: AlgebraSignature, odd_only: bool = False) -> SuperPoint:
    def even() -> AlgebraElement:
        c = Fraction(0) if odd_only else Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        return sig.scalar(c) + (sig.zero() if odd_only else _random_grassmann(rng, sig, False))
    return SuperPoint(even(), even(), _random_grassmann(rng, sig, True))


def random_form_matrix(rng: random.Random, sig: AlgebraSignature, parities: Sequence[int], degree: int,
                       density: float = 0.5, param: str | None = None) -> GradedMatrix:
    """Random odd operator of form degree ``degree`` built from dt's and polynomial coefficients."""
    dts = [sig.gen(f"dt{a + 1}") for a in range(sig.coords)]
    ts = [sig.gen(f"t{a + 1}") for a in range(sig.coords)]
    from itertools import combinations
    forms = [sig.one()] if degree == 0 else []
    for combo in combinations(range(sig.coords), degree) if degree else []:
        f = sig.one()
        for a in combo:
            f = f * dts[a]
        forms.append(f)
    ent = {}
    for i, pi in enumerate(parities):
        for j, pj in enumerate(parities):
            if (degree + pi + pj) % 2 != 1 or rng.random() > density or not forms:
                continue
            e = sig.zero()
            for f in forms:
                c = sig.scalar(Fraction(rng.randint(-2, 2)))
                if ts and rng.random() < 0.5:
                    c = c + rng.choice(ts).scale(Fraction(rng.randint(-2, 2)))
                if param and rng.random() < 0.6:
                    c = c * sig.gen(param)
                e = e + c * f
            if e:
                ent[(i, j)] = e
    return GradedMatrix(parities, ent)


def random_nilpotent_family(rng: random.Random, sig: AlgebraSignature, param: str,
                            parities: Sequence[int]) -> SuperConnection:
    """Family with s-independent A^[0] (nilpotent square) and s-polynomial higher components."""
    p = sum(1 for x in parities if x == 0)
    q = len(parities) - p
    comps: dict[int, GradedMatrix] = {}
    if rng.random() < 0.5:
        comps[0] = random_odd_nilpotent(rng, p, q)
    for j in (1, 2, 3):
        if j <= sig.dim:
            comps[j] = random_form_matrix(rng, sig, parities, j, param=param)
    return SuperConnection(sig, trivial_module(tuple(parities)), comps)


def load_rep(obj: Mapping[str, Any], sig: AlgebraSignature | None = None) -> SuperSemigroupRep:
    """Rep manifest: {"clifford_rank": n, "blocks": [{"k", "parities", "components": {"A0": rows,
    "A1": [per-coordinate rows], "A2": [[a, b, rows], ...]}}]}."""
    from .qseries import scalar_from_json
    try:
        n = int(obj.get("clifford_rank", 0))
        blocks_in = obj["blocks"]
        coords = 0
        for b in blocks_in:
            comps = b.get("components", {})
            coords = max(coords, len(comps.get("A1", [])))
            for a, c, _ in comps.get("A2", []):
                coords = max(coords, int(a) + 1, int(c) + 1)
        if sig is None:
            sig = AlgebraSignature(coords=coords, dim=max(coords, 0))
        blocks = {}
        for b in blocks_in:
            k = int(b["k"])
            par = tuple(int(x) for x in b["parities"])
            comps = b.get("components", {})

            def rows(m: Any) -> GradedMatrix:
                return GradedMatrix.from_rows([[_real(scalar_from_json(x)) for x in r] for r in m], par)
            out: dict[int, GradedMatrix] = {}
            if "A0" in comps:
                out[0] = rows(comps["A0"])
            if comps.get("A1"):
                acc = GradedMatrix.zeros(par)
                for a, m in enumerate(comps["A1"]):
                    acc = acc + lift(rows(m), sig).scale_right(sig.gen(f"dt{a + 1}"))
                out[1] = acc
            if comps.get("A2"):
                acc = GradedMatrix.zeros(par)
                for a, c, m in comps["A2"]:
                    form = sig.gen(f"dt{int(a) + 1}") * sig.gen(f"dt{int(c) + 1}")
                    acc = acc + lift(rows(m), sig).scale_right(form)
                out[2] = acc
            blocks[k] = SuperConnection(sig, trivial_module(par), out)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed rep manifest: {exc}") from exc
    if n:
        raise ValueError("rep manifests describe multiplicity spaces; use clifford_rank 0 blocks")
    return SuperSemigroupRep(sig, n, blocks)


__all__ = [
    "CutoffResult", "DivergentIntegral", "EftData", "EftReport", "FermionCharacter", "GammaSum",
    "HeatCoeff", "LOperators", "NonConstantSpectrum", "SYMBOLIC", "SuperConnection", "SuperPoint",
    "SuperSemigroupRep", "block_heat_trace", "chern_form", "chern_simons", "doubled_family",
    "eft_verify", "euler_eft_data", "euler_rep", "fermion_trace_normalization", "grassmann_signature",
    "heat_kernel", "integrate_heat", "l_operators", "lift", "load_rep", "pairing_adjunction_check",
    "partition_trace", "random_form_matrix", "random_nilpotent_family", "random_odd_nilpotent",
    "random_odd_symmetric",
    "random_semigroup_rep", "random_super_point", "rep_mckean_singer", "rescale",
    "rescaling_transgression", "semigroup_evaluate", "semigroup_law_check", "spectral_cutoff",
    "super_point_multiply", "transgression_check",
]
