"""Exact truncated Laurent series in q.

Coefficients are exact: plain ``Fraction`` values on the fast path, or
``IotaRat`` values when the free symbol iota (standing for 2*pi*i) is
present.  Any coefficient type supporting ``+``, ``-``, ``*`` and truthiness
for zero works, which lets the characteristic-class layer put symbolic
exponentials in the same container.

A series knows its coefficients up to and including ``truncation``; beyond
that nothing is claimed.  ``truncation=None`` marks an exact Laurent
polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lcm
from typing import Any, Callable, Iterable, Sequence


class PrecisionError(ArithmeticError):
    """Raised when a requested coefficient lies beyond the certified order."""


def _frac(x: Any) -> Any:
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


# ---------------------------------------------------------------------------
# Laurent polynomials in iota
# ---------------------------------------------------------------------------


def _iota_make(terms: dict[int, Fraction]) -> Any:
    terms = {k: v for k, v in terms.items() if v}
    if not terms:
        return Fraction(0)
    if len(terms) == 1 and 0 in terms:
        return terms[0]
    return IotaRat(terms, _trusted=True)


class IotaRat:
    """Laurent polynomial in the central symbol iota with rational coefficients.

    Values free of iota collapse to ``Fraction`` so that rational arithmetic
    stays on the fast path.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Any], _trusted: bool = False) -> None:
        if _trusted:
            self.terms = terms
        else:
            self.terms = {int(k): Fraction(v) for k, v in terms.items() if v}

    @staticmethod
    def iota(power: int = 1, coeff: Any = 1) -> Any:
        return _iota_make({power: Fraction(coeff)})

    @staticmethod
    def _terms_of(x: Any) -> dict[int, Fraction] | None:
        if isinstance(x, IotaRat):
            return x.terms
        if isinstance(x, (int, Fraction)):
            return {0: Fraction(x)} if x else {}
        return None

    def __add__(self, other: Any) -> Any:
        o = IotaRat._terms_of(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.items():
            out[k] = out.get(k, 0) + v
        return _iota_make(out)

    __radd__ = __add__

    def __neg__(self) -> IotaRat:
        return IotaRat({k: -v for k, v in self.terms.items()}, _trusted=True)

    def __sub__(self, other: Any) -> Any:
        o = IotaRat._terms_of(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.items():
            out[k] = out.get(k, 0) - v
        return _iota_make(out)

    def __rsub__(self, other: Any) -> Any:
        return (-self) + other

    def __mul__(self, other: Any) -> Any:
        o = IotaRat._terms_of(other)
        if o is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for a, x in self.terms.items():
            for b, y in o.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return _iota_make(out)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> Any:
        if not self.is_unit():
            raise ZeroDivisionError("only iota-monomials are invertible")
        (k, v), = self.terms.items()
        return _iota_make({-k: 1 / v})

    def __truediv__(self, other: Any) -> Any:
        if isinstance(other, (int, Fraction)):
            return _iota_make({k: v / other for k, v in self.terms.items()})
        if isinstance(other, IotaRat):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other: Any) -> Any:
        return other * self.inverse()

    def __pow__(self, n: int) -> Any:
        if n < 0:
            return self.inverse() ** (-n)
        out: Any = Fraction(1)
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: Any) -> bool:
        o = IotaRat._terms_of(other)
        if o is None:
            return NotImplemented
        return self.terms == o

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def conjugate(self) -> Any:
        # iota is purely imaginary
        return _iota_make({k: (-v if k % 2 else v) for k, v in self.terms.items()})

    def __repr__(self) -> str:
        return f"IotaRat({self.terms!r})"

    def __str__(self) -> str:
        parts = []
        for k in sorted(self.terms, reverse=True):
            v = self.terms[k]
            sym = "" if k == 0 else ("ι" if k == 1 else f"ι^{k}" if k > 0 else f"ι^{{{k}}}")
            if sym and v == 1:
                parts.append(sym)
            elif sym and v == -1:
                parts.append("-" + sym)
            else:
                parts.append(f"{v}{sym}")
        return " + ".join(parts).replace("+ -", "- ")


def iota_parts(c: Any) -> dict[int, Fraction]:
    """Map a scalar coefficient to its {iota power: rational} decomposition."""
    t = IotaRat._terms_of(c)
    if t is None:
        raise TypeError(f"not an iota-rational scalar: {c!r}")
    return dict(t)


def inverse_scalar(c: Any) -> Any:
    if isinstance(c, (int, Fraction)):
        if not c:
            raise ZeroDivisionError("leading coefficient is zero")
        return 1 / Fraction(c)
    if hasattr(c, "inverse"):
        return c.inverse()
    raise ZeroDivisionError(f"cannot invert {c!r}")


# ---------------------------------------------------------------------------
# QSeries
# ---------------------------------------------------------------------------


def _all_rational(xs: Sequence[Any]) -> bool:
    return all(type(x) is Fraction for x in xs)


def _convolve(a: Sequence[Any], b: Sequence[Any], length: int) -> list[Any]:
    """First ``length`` coefficients of the product of two dense lists."""
    if not a or not b or length <= 0:
        return [Fraction(0)] * max(length, 0)
    a = a[:length]
    b = b[:length]
    if _all_rational(a) and _all_rational(b):
        da = lcm(*(x.denominator for x in a))
        db = lcm(*(x.denominator for x in b))
        ia = [x.numerator * (da // x.denominator) for x in a]
        ib = [x.numerator * (db // x.denominator) for x in b]
        out = [0] * length
        for i, x in enumerate(ia):
            if x:
                lim = min(len(ib), length - i)
                for j in range(lim):
                    out[i + j] += x * ib[j]
        den = da * db
        return [Fraction(v, den) for v in out]
    out = [Fraction(0)] * length
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(min(len(b), length - i)):
            y = b[j]
            if y:
                out[i + j] = out[i + j] + x * y
    return out


class QSeries:
    """Truncated Laurent series sum_n c_n q^n with exact coefficients.

    ``coeffs[i]`` is the coefficient of ``q^(valuation + i)``.  For a
    truncated series the dense list runs up to ``truncation``; for an exact
    one it runs to the last nonzero term.
    """

    __slots__ = ("valuation", "coeffs", "truncation")

    def __init__(self, coeffs: Iterable[Any], valuation: int = 0,
                 truncation: int | None = None) -> None:
        cs = [_frac(c) for c in coeffs]
        if truncation is not None:
            keep = truncation - valuation + 1
            if keep <= 0:
                cs = []
            else:
                cs = cs[:keep] + [Fraction(0)] * (keep - len(cs))
        lead = 0
        while lead < len(cs) and not cs[lead]:
            lead += 1
        cs = cs[lead:]
        valuation += lead
        if truncation is None:
            while cs and not cs[-1]:
                cs.pop()
            if not cs:
                valuation = 0
        elif not cs:
            valuation = truncation + 1
        self.valuation = valuation
        self.coeffs = tuple(cs)
        self.truncation = truncation

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c: Any, truncation: int | None = None) -> QSeries:
        return cls([c], 0, truncation)

    @classmethod
    def monomial(cls, c: Any, n: int, truncation: int | None = None) -> QSeries:
        return cls([c], n, truncation)

    @classmethod
    def zero(cls, truncation: int | None = None) -> QSeries:
        return cls([], 0, truncation)

    @classmethod
    def from_dict(cls, d: dict[int, Any], truncation: int | None = None) -> QSeries:
        if not d:
            return cls.zero(truncation)
        lo, hi = min(d), max(d)
        if truncation is not None:
            hi = max(hi, truncation)
        return cls([d.get(n, 0) for n in range(lo, hi + 1)], lo, truncation)

    # -- inspection --------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.truncation is None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, n: int) -> Any:
        if self.truncation is not None and n > self.truncation:
            raise PrecisionError(f"q^{n} beyond truncation {self.truncation}")
        i = n - self.valuation
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __getitem__(self, n: int) -> Any:
        return self.coeff(n)

    def top(self) -> int:
        """Largest exponent with a known coefficient (degree if exact)."""
        if self.truncation is not None:
            return self.truncation
        return self.valuation + len(self.coeffs) - 1

    def items(self) -> list[tuple[int, Any]]:
        return [(self.valuation + i, c) for i, c in enumerate(self.coeffs) if c]

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    # -- structural --------------------------------------------------------

    def truncate(self, n: int) -> QSeries:
        if self.truncation is not None and n > self.truncation:
            raise PrecisionError(f"cannot extend truncation {self.truncation} to {n}")
        return QSeries(self.coeffs, self.valuation, n)

    def shift(self, k: int) -> QSeries:
        """Multiply by q^k."""
        t = None if self.truncation is None else self.truncation + k
        return QSeries(self.coeffs, self.valuation + k, t)

    def map_coeffs(self, f: Callable[[Any], Any]) -> QSeries:
        return QSeries([f(c) for c in self.coeffs], self.valuation, self.truncation)

    def derivative_qddq(self) -> QSeries:
        return QSeries([(self.valuation + i) * c for i, c in enumerate(self.coeffs)],
                       self.valuation, self.truncation)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _lift(x: Any) -> QSeries | None:
        if isinstance(x, QSeries):
            return x
        if isinstance(x, (int, Fraction, IotaRat)) or hasattr(x, "_is_scalar"):
            return QSeries.constant(x)
        return None

    def _add(self, other: QSeries, sign: int) -> QSeries:
        ts = [t for t in (self.truncation, other.truncation) if t is not None]
        trunc = min(ts) if ts else None
        if self.is_zero() and other.is_zero():
            return QSeries.zero(trunc)
        lo = min(s.valuation for s in (self, other) if not s.is_zero())
        hi = trunc if trunc is not None else max(self.top(), other.top())
        out = []
        for n in range(lo, hi + 1):
            a = self.coeff(n) if self.truncation is None or n <= self.truncation else 0
            b = other.coeff(n) if other.truncation is None or n <= other.truncation else 0
            out.append(a + b if sign > 0 else a - b)
        return QSeries(out, lo, trunc)

    def __add__(self, other: Any) -> QSeries:
        o = QSeries._lift(other)
        if o is None:
            return NotImplemented
        return self._add(o, 1)

    __radd__ = __add__

    def __sub__(self, other: Any) -> QSeries:
        o = QSeries._lift(other)
        if o is None:
            return NotImplemented
        return self._add(o, -1)

    def __rsub__(self, other: Any) -> QSeries:
        o = QSeries._lift(other)
        if o is None:
            return NotImplemented
        return o._add(self, -1)

    def __neg__(self) -> QSeries:
        return QSeries([-c for c in self.coeffs], self.valuation, self.truncation)

    def scale(self, c: Any) -> QSeries:
        if not c:
            return QSeries.zero(self.truncation)
        return QSeries([c * x for x in self.coeffs], self.valuation, self.truncation)

    def __mul__(self, other: Any) -> QSeries:
        if isinstance(other, QSeries):
            return self._mul(other)
        if isinstance(other, (int, Fraction, IotaRat)) or hasattr(other, "_is_scalar"):
            return self.scale(_frac(other))
        return NotImplemented

    def __rmul__(self, other: Any) -> QSeries:
        if isinstance(other, (int, Fraction, IotaRat)) or hasattr(other, "_is_scalar"):
            return self.scale(_frac(other))
        return NotImplemented

    def __truediv__(self, other: Any) -> QSeries:
        if isinstance(other, QSeries):
            return self * other.inverse()
        return self.scale(inverse_scalar(_frac(other)))

    def _mul(self, other: QSeries) -> QSeries:
        va, vb = self.valuation, other.valuation
        bounds = []
        if self.truncation is not None:
            bounds.append(self.truncation + (vb if not other.is_zero() else other.truncation + 1))
        if other.truncation is not None:
            bounds.append(other.truncation + (va if not self.is_zero() else self.truncation + 1))
        trunc = min(bounds) if bounds else None
        if self.is_zero() or other.is_zero():
            return QSeries.zero(trunc)
        v = va + vb
        if trunc is None:
            length = len(self.coeffs) + len(other.coeffs) - 1
        else:
            length = trunc - v + 1
        return QSeries(_convolve(self.coeffs, other.coeffs, length), v, trunc)

    def inverse(self, order: int | None = None) -> QSeries:
        """Multiplicative inverse.

        Exact inputs that are not monomials need ``order``; truncated inputs
        yield truncation ``N - 2v`` (capped by ``order`` when given).
        """
        if self.is_zero():
            raise ZeroDivisionError("series is zero to its known order")
        v = self.valuation
        inv0 = inverse_scalar(self.coeffs[0])
        if self.truncation is None:
            if len(self.coeffs) == 1:
                return QSeries([inv0], -v, order)
            if order is None:
                raise PrecisionError("inverse of an exact non-monomial needs an order")
            trunc = order
        else:
            trunc = self.truncation - 2 * v
            if order is not None:
                trunc = min(trunc, order)
        length = trunc + v + 1
        if length <= 0:
            return QSeries.zero(trunc)
        u = self.coeffs
        out = [inv0]
        for n in range(1, length):
            acc: Any = Fraction(0)
            for j in range(1, min(n, len(u) - 1) + 1):
                if u[j]:
                    acc = acc + u[j] * out[n - j]
            out.append(-(inv0 * acc) if acc else Fraction(0))
        return QSeries(out, -v, trunc)

    def __pow__(self, k: int) -> QSeries:
        if k < 0:
            return self.inverse() ** (-k)
        result = QSeries.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def power(self, k: int, order: int | None = None) -> QSeries:
        if k < 0:
            return self.inverse(order) ** (-k)
        out = self ** k
        if order is not None and (out.truncation is None or out.truncation > order):
            out = out.truncate(order)
        return out

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other: Any) -> bool:
        o = QSeries._lift(other)
        if o is None:
            return NotImplemented
        return (self.valuation, self.coeffs, self.truncation) == (o.valuation, o.coeffs, o.truncation)

    def agrees_with(self, other: QSeries) -> bool:
        """Coefficientwise agreement on the common known window."""
        ts = [t for t in (self.truncation, other.truncation) if t is not None]
        if not ts:
            return self == other
        n = min(ts)
        return self.truncate(n) == other.truncate(n)

    def __hash__(self) -> int:
        return hash((self.valuation, self.coeffs, self.truncation))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- text / json -------------------------------------------------------

    def __repr__(self) -> str:
        return f"QSeries({self.format()!r}, truncation={self.truncation})"

    def __str__(self) -> str:
        return self.format()

    def format(self) -> str:
        return format_terms(self.items())

    def to_json(self) -> dict:
        return {
            "valuation": self.valuation,
            "truncation": self.truncation,
            "coeffs": [scalar_to_json(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> QSeries:
        try:
            coeffs = [scalar_from_json(c) for c in obj["coeffs"]]
            return cls(coeffs, int(obj.get("valuation", 0)), obj.get("truncation"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed series JSON: {exc}") from exc


def scalar_to_json(c: Any) -> list[dict]:
    return [{"iota_pow": k, "num": str(v.numerator), "den": str(v.denominator)}
            for k, v in sorted(iota_parts(c).items())]


def scalar_from_json(obj: Any) -> Any:
    if isinstance(obj, (int, str)):
        return Fraction(obj)
    if isinstance(obj, dict):
        obj = [obj]
    terms: dict[int, Fraction] = {}
    for t in obj:
        k = int(t.get("iota_pow", 0))
        terms[k] = terms.get(k, 0) + Fraction(int(t["num"]), int(t.get("den", 1)))
    return _iota_make(terms)


MINUS = "−"


def _coeff_text(c: Any) -> str:
    s = str(c)
    if isinstance(c, Fraction) and c.denominator == 1:
        return s
    if isinstance(c, Fraction):
        return f"({s})"
    return f"({s})"


def _qpow(n: int) -> str:
    if n == 0:
        return ""
    if n == 1:
        return "q"
    if 0 < n < 10:
        return f"q^{n}"
    return f"q^{{{n}}}"


def format_terms(items: Sequence[tuple[int, Any]]) -> str:
    """Render ``[(exponent, coeff)]`` as e.g. ``1 + 240q + 2160q^2``."""
    if not items:
        return "0"
    out = []
    for idx, (n, c) in enumerate(items):
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        body = _qpow(n)
        if mag == 1 and body:
            txt = body
        else:
            txt = _coeff_text(mag) + body
        if idx == 0:
            out.append((MINUS if neg else "") + txt)
        else:
            out.append((f" {MINUS} " if neg else " + ") + txt)
    return "".join(out)


def series_arith(a: QSeries, b: QSeries | None, op: str, k: int = 0,
                 order: int | None = None) -> QSeries:
    """Dispatch helper over the basic ring operations."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "invert":
        return a.inverse(order)
    if op == "derivative_qddq":
        return a.derivative_qddq()
    if op == "integer_power":
        return a.power(k, order)
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# Number-theoretic kernels and standard series
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    b = [Fraction(1)]
    for n in range(1, m + 1):
        acc = sum((comb(n + 1, k) * b[k] for k in range(n)), Fraction(0))
        b.append(-acc / (n + 1))
    return tuple(b)


def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m for even m >= 2 (so B_2 = 1/6)."""
    if not isinstance(m, int) or m < 2 or m % 2:
        raise ValueError(f"bernoulli needs an even integer >= 2, got {m!r}")
    return _bernoulli_table(m)[m]


def divisor_sigma_table(power: int, n_max: int) -> list[int]:
    """sigma_power(n) for 0 <= n <= n_max (index 0 unused, set to 0)."""
    out = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dp = d ** power
        for m in range(d, n_max + 1, d):
            out[m] += dp
    return out


def _check_weight(k2: int) -> None:
    if not isinstance(k2, int) or k2 < 2 or k2 % 2:
        raise ValueError(f"Eisenstein weight must be even and >= 2, got {k2!r}")


@lru_cache(maxsize=256)
def eisenstein_q(k2: int, N: int) -> QSeries:
    """Normalized Eisenstein series 1 - (2*k2 / B_k2) * sum sigma_{k2-1}(n) q^n."""
    _check_weight(k2)
    if N < 0:
        raise ValueError("truncation must be nonnegative")
    c = -Fraction(2 * k2) / bernoulli(k2)
    sig = divisor_sigma_table(k2 - 1, N)
    return QSeries([Fraction(1)] + [c * sig[n] for n in range(1, N + 1)], 0, N)


@lru_cache(maxsize=256)
def eisenstein_geometric(k2: int, N: int) -> QSeries:
    """E_k2 / (2 pi i)^k2 in the lattice-sum normalization: -(B_k2/k2!) * Ehat."""
    _check_weight(k2)
    return eisenstein_q(k2, N).scale(-bernoulli(k2) / factorial(k2))


@lru_cache(maxsize=64)
def phi_product(N: int) -> QSeries:
    """prod_{m>=1} (1 - q^m) to order N."""
    if N < 0:
        raise ValueError("truncation must be nonnegative")
    c = [0] * (N + 1)
    c[0] = 1
    for m in range(1, N + 1):
        for i in range(N, m - 1, -1):
            c[i] -= c[i - m]
    return QSeries(c, 0, N)


class FracPowerSeries:
    """q^a * body with rational a (denominator dividing 24) and body valuation 0."""

    __slots__ = ("prefactor_exponent", "body")

    def __init__(self, prefactor_exponent: Any, body: QSeries) -> None:
        a = Fraction(prefactor_exponent)
        if 24 % a.denominator:
            raise ValueError("prefactor exponent denominator must divide 24")
        if not body.is_zero() and body.valuation != 0:
            a += body.valuation
            body = body.shift(-body.valuation)
        self.prefactor_exponent = a
        self.body = body

    def __mul__(self, other: FracPowerSeries) -> FracPowerSeries:
        return FracPowerSeries(self.prefactor_exponent + other.prefactor_exponent,
                               self.body * other.body)

    def __pow__(self, k: int) -> FracPowerSeries:
        return FracPowerSeries(self.prefactor_exponent * k, self.body ** k)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, FracPowerSeries):
            return NotImplemented
        return (self.prefactor_exponent, self.body) == (other.prefactor_exponent, other.body)

    def as_qseries(self) -> QSeries:
        if self.prefactor_exponent.denominator != 1:
            raise ValueError("prefactor exponent is not integral")
        return self.body.shift(int(self.prefactor_exponent))

    def format(self) -> str:
        a = self.prefactor_exponent
        if a == 0:
            return self.body.format()
        pre = "q" if a == 1 else (f"q^{{{a}}}" if a.denominator != 1 or a < 0 else _qpow(int(a)))
        return f"{pre}({self.body.format()})"

    __str__ = format

    def __repr__(self) -> str:
        return f"FracPowerSeries({self.format()!r})"

    def to_json(self) -> dict:
        a = self.prefactor_exponent
        return {"prefactor_exponent": {"num": str(a.numerator), "den": str(a.denominator)},
                "body": self.body.to_json()}


def dedekind_eta(N: int) -> FracPowerSeries:
    return FracPowerSeries(Fraction(1, 24), phi_product(N))


def delta_series(N: int) -> QSeries:
    """The weight-12 cusp form q * phi^24 to order N."""
    if N < 1:
        return QSeries.zero(N)
    return (phi_product(N - 1) ** 24).shift(1)


# ---------------------------------------------------------------------------
# Two-variable series (q, z)
# ---------------------------------------------------------------------------


class BiSeries:
    """Series sum c[n][j] q^n z^j with 0 <= n <= q_order and 0 <= j <= z_order."""

    __slots__ = ("q_order", "z_order", "rows")

    def __init__(self, rows: Sequence[Sequence[Any]], q_order: int, z_order: int) -> None:
        self.q_order = q_order
        self.z_order = z_order
        out = []
        for n in range(q_order + 1):
            r = list(rows[n]) if n < len(rows) else []
            r = [_frac(c) for c in r[:z_order + 1]]
            out.append(tuple(r + [Fraction(0)] * (z_order + 1 - len(r))))
        self.rows = tuple(out)

    @classmethod
    def from_z_poly(cls, zcoeffs: Sequence[Any], q_order: int, z_order: int) -> BiSeries:
        return cls([zcoeffs], q_order, z_order)

    @classmethod
    def from_q_series(cls, s: QSeries, q_order: int, z_order: int) -> BiSeries:
        return cls([[s.coeff(n)] for n in range(q_order + 1)], q_order, z_order)

    def coeff(self, n: int, j: int) -> Any:
        return self.rows[n][j]

    def z_slice(self, j: int) -> QSeries:
        return QSeries([r[j] for r in self.rows], 0, self.q_order)

    def q_slice(self, n: int) -> tuple:
        return self.rows[n]

    def _zmul(self, a: Sequence[Any], b: Sequence[Any]) -> list[Any]:
        return _convolve(list(a), list(b), self.z_order + 1)

    def __add__(self, other: BiSeries) -> BiSeries:
        return BiSeries([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                        self.q_order, self.z_order)

    def __sub__(self, other: BiSeries) -> BiSeries:
        return BiSeries([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                        self.q_order, self.z_order)

    def scale(self, c: Any) -> BiSeries:
        return BiSeries([[c * x for x in r] for r in self.rows], self.q_order, self.z_order)

    def __mul__(self, other: BiSeries) -> BiSeries:
        zero = [Fraction(0)] * (self.z_order + 1)
        out = [list(zero) for _ in range(self.q_order + 1)]
        for n, r in enumerate(self.rows):
            if not any(r):
                continue
            for m in range(self.q_order + 1 - n):
                s = other.rows[m]
                if not any(s):
                    continue
                prod = self._zmul(r, s)
                tgt = out[n + m]
                for j, v in enumerate(prod):
                    if v:
                        tgt[j] = tgt[j] + v
        return BiSeries(out, self.q_order, self.z_order)

    def mul_q_series(self, s: QSeries) -> BiSeries:
        zero = [Fraction(0)] * (self.z_order + 1)
        out = [list(zero) for _ in range(self.q_order + 1)]
        for n, r in enumerate(self.rows):
            for m in range(self.q_order + 1 - n):
                c = s.coeff(m)
                if c:
                    tgt = out[n + m]
                    for j, v in enumerate(r):
                        if v:
                            tgt[j] = tgt[j] + c * v
        return BiSeries(out, self.q_order, self.z_order)

    def exp(self) -> BiSeries:
        """exp of a series without z^0 terms (so the sum terminates in z)."""
        if any(r[0] for r in self.rows):
            raise ValueError("exponent must vanish at z = 0")
        one = BiSeries([[1]], self.q_order, self.z_order)
        out, term = one, one
        for m in range(1, self.z_order + 1):
            term = (term * self).scale(Fraction(1, m))
            if term.is_zero():
                break
            out = out + term
        return out

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (self.q_order, self.z_order, self.rows) == (other.q_order, other.z_order, other.rows)

    def first_difference(self, other: BiSeries) -> tuple[int, int, Any, Any] | None:
        for n in range(self.q_order + 1):
            for j in range(self.z_order + 1):
                if self.rows[n][j] != other.rows[n][j]:
                    return n, j, self.rows[n][j], other.rows[n][j]
        return None

    def __repr__(self) -> str:
        return f"BiSeries(q_order={self.q_order}, z_order={self.z_order})"


def _exp_poly_coeffs(scale: Fraction, z_order: int) -> list[Fraction]:
    """Coefficients of exp(scale * z) up to z^z_order."""
    return [scale ** j / factorial(j) for j in range(z_order + 1)]


def weierstrass_sigma(mode: str, Nq: int, Mz: int) -> BiSeries:
    """Weierstrass-type sigma function as a (q, z) series.

    ``product``: (e^{z/2} - e^{-z/2})/z * prod_k (1 - q^k e^z)(1 - q^k e^{-z}) / (1 - q^k)^2.
    ``exponential``: exp(-sum_k D_{2k}(q) z^{2k} / (2k)) with D the geometric Eisenstein series.
    """
    if Nq < 0 or Mz < 0:
        raise ValueError("orders must be nonnegative")
    if mode == "product":
        pref = [Fraction(0)] * (Mz + 1)
        for j in range(0, Mz + 1, 2):
            pref[j] = Fraction(1, 4 ** (j // 2) * factorial(j + 1))
        cosh2 = [Fraction(0)] * (Mz + 1)
        for j in range(0, Mz + 1, 2):
            cosh2[j] = Fraction(2, factorial(j))
        rows: list[list[Any]] = [pref] + [[Fraction(0)] * (Mz + 1) for _ in range(Nq)]
        for k in range(1, Nq + 1):
            # multiply by 1 - q^k (e^z + e^{-z}) + q^{2k}, from the top row down
            for n in range(Nq, k - 1, -1):
                new = rows[n]
                src = rows[n - k]
                if any(src):
                    sub = _convolve(src, cosh2, Mz + 1)
                    new = [a - b for a, b in zip(new, sub)]
                if n >= 2 * k:
                    new = [a + b for a, b in zip(new, rows[n - 2 * k])]
                rows[n] = new
        body = BiSeries(rows, Nq, Mz)
        return body.mul_q_series(phi_product(Nq).power(-2, Nq))
    if mode == "exponential":
        exponent = [[Fraction(0)] * (Mz + 1) for _ in range(Nq + 1)]
        for k in range(1, Mz // 2 + 1):
            d = eisenstein_geometric(2 * k, Nq)
            for n in range(Nq + 1):
                exponent[n][2 * k] = -d.coeff(n) / (2 * k)
        return BiSeries(exponent, Nq, Mz).exp()
    raise ValueError(f"unknown mode {mode!r}")
