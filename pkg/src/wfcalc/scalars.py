"""Exact scalar rings used beside the rationals.

``GaussRat`` is Q(i).  ``ExpPoly`` is the ring of finite sums c * e^a with
exponents a in Q[iota] and exact coefficients, multiplied by adding
exponents.  ``Sqrt2Scaled`` is a value times a half-integer power of 2.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .qseries import IotaRat


class GaussRat:
    __slots__ = ("re", "im")
    _is_scalar = True

    def __init__(self, re: Any = 0, im: Any = 0) -> None:
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def i() -> GaussRat:
        return GaussRat(0, 1)

    @staticmethod
    def coerce(x: Any) -> GaussRat | None:
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x, 0)
        if isinstance(x, IotaRat):
            raise TypeError("Gaussian rationals do not mix with iota-rationals")
        return None

    def __add__(self, other: Any) -> GaussRat:
        o = GaussRat.coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> GaussRat:
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other: Any) -> GaussRat:
        o = GaussRat.coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Any) -> GaussRat:
        o = GaussRat.coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> Any:
        o = GaussRat.coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> GaussRat:
        return GaussRat(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> GaussRat:
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other: Any) -> GaussRat:
        o = GaussRat.coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> GaussRat:
        o = GaussRat.coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> GaussRat:
        if k < 0:
            return self.inverse() ** (-k)
        out = GaussRat(1)
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other: Any) -> bool:
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return False
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash(self.re) if not self.im else hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re} {sign} {abs(self.im)}i"


def _exp_key(a: Any) -> Any:
    if isinstance(a, int):
        return Fraction(a)
    if isinstance(a, (Fraction, IotaRat)):
        return a
    raise TypeError(f"exponent must lie in Q[iota], got {a!r}")


def _exp_make(terms: dict) -> Any:
    terms = {k: v for k, v in terms.items() if v}
    if not terms:
        return Fraction(0)
    if len(terms) == 1:
        (k, v), = terms.items()
        if not k:
            return v
    return ExpPoly(terms, _trusted=True)


class ExpPoly:
    """Finite sum sum_a c_a e^{a}."""

    __slots__ = ("terms",)
    _is_scalar = True

    def __init__(self, terms: dict[Any, Any], _trusted: bool = False) -> None:
        if _trusted:
            self.terms = terms
        else:
            out: dict = {}
            for k, v in terms.items():
                k = _exp_key(k)
                out[k] = out.get(k, 0) + v
            self.terms = {k: v for k, v in out.items() if v}

    @staticmethod
    def exp(a: Any, coeff: Any = Fraction(1)) -> Any:
        """coeff * e^a as a ring element (a plain scalar when a = 0)."""
        return _exp_make({_exp_key(a): coeff})

    @staticmethod
    def _terms_of(x: Any) -> dict | None:
        if isinstance(x, ExpPoly):
            return x.terms
        if isinstance(x, (int, Fraction, IotaRat, GaussRat)):
            return {Fraction(0): x} if x else {}
        return None

    def __add__(self, other: Any) -> Any:
        o = ExpPoly._terms_of(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.items():
            out[k] = out[k] + v if k in out else v
        return _exp_make(out)

    __radd__ = __add__

    def __neg__(self) -> ExpPoly:
        return ExpPoly({k: -v for k, v in self.terms.items()}, _trusted=True)

    def __sub__(self, other: Any) -> Any:
        o = ExpPoly._terms_of(other)
        if o is None:
            return NotImplemented
        return self + _exp_make({k: -v for k, v in o.items()})

    def __rsub__(self, other: Any) -> Any:
        return (-self) + other

    def __mul__(self, other: Any) -> Any:
        o = ExpPoly._terms_of(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for a, x in self.terms.items():
            for b, y in o.items():
                k = a + b
                out[k] = out[k] + x * y if k in out else x * y
        return _exp_make(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Any:
        if isinstance(other, (int, Fraction, GaussRat)) or isinstance(other, IotaRat):
            inv = 1 / Fraction(other) if isinstance(other, (int, Fraction)) else other.inverse()
            return self * inv
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: Any) -> bool:
        o = ExpPoly._terms_of(other)
        if o is None:
            return NotImplemented
        return self.terms == o

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def conjugate(self) -> Any:
        out: dict = {}
        for k, v in self.terms.items():
            kc = k.conjugate() if isinstance(k, IotaRat) else k
            vc = v.conjugate() if hasattr(v, "conjugate") and not isinstance(v, Fraction) else v
            out[kc] = out[kc] + vc if kc in out else vc
        return _exp_make(out)

    def __repr__(self) -> str:
        return f"ExpPoly({self})"

    def __str__(self) -> str:
        parts = []
        for k in sorted(self.terms, key=str):
            parts.append(f"({self.terms[k]})e^({k})")
        return " + ".join(parts)


class Sqrt2Scaled:
    """value * 2^(half_exp/2) with half_exp reduced to 0 or 1."""

    __slots__ = ("value", "half_exp")
    _is_scalar = True

    def __init__(self, value: Any, half_exp: int = 0) -> None:
        shift, r = divmod(half_exp, 2)
        self.value = value * (Fraction(2) ** shift) if shift else value
        self.half_exp = r

    def folded(self) -> Any:
        """Plain value when no odd power of sqrt(2) remains."""
        return self.value if self.half_exp == 0 or not self.value else self

    def __mul__(self, other: Any) -> Sqrt2Scaled:
        if isinstance(other, Sqrt2Scaled):
            return Sqrt2Scaled(self.value * other.value, self.half_exp + other.half_exp)
        return Sqrt2Scaled(self.value * other, self.half_exp)

    def __rmul__(self, other: Any) -> Sqrt2Scaled:
        return Sqrt2Scaled(other * self.value, self.half_exp)

    def conjugate(self) -> Sqrt2Scaled:
        v = self.value.conjugate() if hasattr(self.value, "conjugate") else self.value
        return Sqrt2Scaled(v, self.half_exp)

    def __add__(self, other: Any) -> Sqrt2Scaled:
        o = other if isinstance(other, Sqrt2Scaled) else Sqrt2Scaled(other, 0)
        if not o.value:
            return self
        if not self.value:
            return o
        if o.half_exp != self.half_exp:
            raise ValueError("cannot add values with different sqrt(2) parity")
        return Sqrt2Scaled(self.value + o.value, self.half_exp)

    __radd__ = __add__

    def __neg__(self) -> Sqrt2Scaled:
        return Sqrt2Scaled(-self.value, self.half_exp)

    def __sub__(self, other: Any) -> Sqrt2Scaled:
        o = other if isinstance(other, Sqrt2Scaled) else Sqrt2Scaled(other, 0)
        return self + (-o)

    def __rsub__(self, other: Any) -> Sqrt2Scaled:
        return (-self) + other

    def __bool__(self) -> bool:
        return bool(self.value)

    def __eq__(self, other: Any) -> bool:
        o = other if isinstance(other, Sqrt2Scaled) else Sqrt2Scaled(other, 0)
        if not self.value and not o.value:
            return True
        return self.half_exp == o.half_exp and self.value == o.value

    def __hash__(self) -> int:
        return hash((self.half_exp, self.value))

    def __complex__(self) -> complex:
        return complex(self.value) * (2 ** 0.5 if self.half_exp else 1.0)

    def __repr__(self) -> str:
        return f"Sqrt2Scaled({self.value!r}, {self.half_exp})"

    def __str__(self) -> str:
        return f"{self.value}" + ("*sqrt(2)" if self.half_exp else "")
