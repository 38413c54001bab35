"""Finite graded-commutative differential algebra.

Elements are polynomials in

* even degree-2 Chern roots ``x1..xr`` (nilpotent through the form-degree cap ``dim``),
* even degree-0 coordinates ``t1..tm`` whose differentials ``dt1..dtm`` are odd 1-forms,
* the anti-holomorphic symbol ``W`` (degree 0, powers capped by ``W_bound``),
* an optional volume symbol ``v`` and free degree-0 parameters (Laurent exponents allowed),
* declared odd generators such as a 3-form ``H`` with ``dH = sum x_i^2`` or
  degree-0 Grassmann scalars,
* an optional central half-power ``u^(h/2)`` of degree ``-h`` for total-degree bookkeeping,

with coefficients in any exact ring (rationals, iota-rationals, q-series,
symbolic exponentials).

A monomial key is ``(even_exponents, u_half, odd_mask)``; odd generators in
a mask are stored in ascending index order and reordering them produces the
Koszul sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Any, Callable, Iterable, Mapping

from .qseries import IotaRat, QSeries

Key = tuple[tuple[int, ...], int, int]


class SignatureMismatch(ValueError):
    pass


class NotNilpotentError(ValueError):
    pass


class MissingPontryaginData(KeyError):
    pass


@dataclass(frozen=True)
class OddGenerator:
    name: str
    degree: int
    differential: str | None = None  # "p1" means d(gen) = sum_i x_i^2


@dataclass(frozen=True)
class AlgebraSignature:
    roots: int = 0
    dim: int = 0
    odd: tuple[OddGenerator, ...] = ()
    coords: int = 0
    include_W: bool = False
    W_bound: int = 4
    include_v: bool = False
    params: tuple[str, ...] = ()
    N: int = 10
    u_grading: bool = False
    _layout: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.dim < 0 or self.roots < 0 or self.coords < 0:
            raise ValueError("signature sizes must be nonnegative")
        even = [f"x{i + 1}" for i in range(self.roots)] + [f"t{a + 1}" for a in range(self.coords)]
        if self.include_W:
            even.append("W")
        if self.include_v:
            even.append("v")
        even += list(self.params)
        odd = [g.name for g in self.odd] + [f"dt{a + 1}" for a in range(self.coords)]
        odd_deg = [g.degree for g in self.odd] + [1] * self.coords
        names = even + odd
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        layout = {
            "even": tuple(even),
            "odd": tuple(odd),
            "even_index": {n: i for i, n in enumerate(even)},
            "odd_index": {n: i for i, n in enumerate(odd)},
            "odd_deg": tuple(odd_deg),
            "W": even.index("W") if self.include_W else None,
            "mask_deg": {},
        }
        object.__setattr__(self, "_layout", layout)

    # -- layout helpers ----------------------------------------------------

    @property
    def even_names(self) -> tuple[str, ...]:
        return self._layout["even"]

    @property
    def odd_names(self) -> tuple[str, ...]:
        return self._layout["odd"]

    def mask_degree(self, mask: int) -> int:
        cache = self._layout["mask_deg"]
        d = cache.get(mask)
        if d is None:
            degs = self._layout["odd_deg"]
            d = sum(degs[i] for i in range(len(degs)) if mask >> i & 1)
            cache[mask] = d
        return d

    def degree(self, key: Key) -> int:
        ev, _, mask = key
        return 2 * sum(ev[:self.roots]) + self.mask_degree(mask)

    def total_degree(self, key: Key) -> int:
        return self.degree(key) - key[1]

    def W_power(self, key: Key) -> int:
        i = self._layout["W"]
        return 0 if i is None else key[0][i]

    def admissible(self, key: Key) -> bool:
        if self.degree(key) > self.dim:
            return False
        i = self._layout["W"]
        return i is None or key[0][i] <= self.W_bound

    # -- constructors ------------------------------------------------------

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def scalar(self, c: Any) -> AlgebraElement:
        return AlgebraElement(self, {self.unit_key(): c})

    def one(self) -> AlgebraElement:
        return self.scalar(Fraction(1))

    def unit_key(self) -> Key:
        return ((0,) * len(self.even_names), 0, 0)

    def gen(self, name: str, power: int = 1, coeff: Any = Fraction(1)) -> AlgebraElement:
        lay = self._layout
        if name in lay["even_index"]:
            ev = [0] * len(lay["even"])
            ev[lay["even_index"][name]] = power
            return AlgebraElement(self, {(tuple(ev), 0, 0): coeff})
        if name in lay["odd_index"]:
            if power != 1:
                return self.zero()
            return AlgebraElement(self, {((0,) * len(lay["even"]), 0, 1 << lay["odd_index"][name]): coeff})
        raise KeyError(f"unknown generator {name!r}")

    def root(self, i: int, power: int = 1) -> AlgebraElement:
        return self.gen(f"x{i + 1}", power)

    def u_half(self, h: int, coeff: Any = Fraction(1)) -> AlgebraElement:
        if not self.u_grading:
            raise ValueError("u-grading is disabled in this signature")
        return AlgebraElement(self, {((0,) * len(self.even_names), h, 0): coeff})

    def power_sum(self, k: int) -> AlgebraElement:
        """s_k = sum_i x_i^{2k}."""
        out = self.zero()
        for i in range(self.roots):
            out = out + self.root(i, 2 * k)
        return out

    def p1(self) -> AlgebraElement:
        return self.power_sum(1)

    def pfaffian(self) -> AlgebraElement:
        out = self.one()
        for i in range(self.roots):
            out = out * self.root(i)
        return out

    def to_json(self) -> dict:
        return {"roots": self.roots, "dim": self.dim, "coords": self.coords,
                "odd": [[g.name, g.degree, g.differential] for g in self.odd],
                "include_W": self.include_W, "W_bound": self.W_bound,
                "include_v": self.include_v, "params": list(self.params),
                "N": self.N, "u_grading": self.u_grading}


@lru_cache(maxsize=1 << 16)
def koszul_sign(a: int, b: int) -> int:
    """Sign from sorting the odd generators of mask ``a`` followed by mask ``b``."""
    s = 0
    j = 0
    bb = b
    while bb:
        if bb & 1:
            s += bin(a >> (j + 1)).count("1")
        bb >>= 1
        j += 1
    return -1 if s & 1 else 1


def _is_zero(c: Any) -> bool:
    return not c


class AlgebraElement:
    __slots__ = ("sig", "terms")

    def __init__(self, sig: AlgebraSignature, terms: Mapping[Key, Any], _clean: bool = False) -> None:
        self.sig = sig
        if _clean:
            self.terms = dict(terms)
        else:
            self.terms = {k: v for k, v in terms.items() if not _is_zero(v) and sig.admissible(k)}

    # -- basic ring structure ---------------------------------------------

    def _check(self, other: AlgebraElement) -> None:
        if other.sig is not self.sig and other.sig != self.sig:
            raise SignatureMismatch("elements live in different signatures")

    def _coerce(self, other: Any) -> AlgebraElement | None:
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, IotaRat, QSeries)) or hasattr(other, "_is_scalar"):
            return self.sig.scalar(other)
        return None

    def __add__(self, other: Any) -> AlgebraElement:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.terms.items():
            if k in out:
                out[k] = out[k] + v
                if _is_zero(out[k]):
                    del out[k]
            else:
                out[k] = v
        return AlgebraElement(self.sig, out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.sig, {k: -v for k, v in self.terms.items()}, _clean=True)

    def __sub__(self, other: Any) -> AlgebraElement:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> AlgebraElement:
        return (-self) + other

    def scale(self, c: Any) -> AlgebraElement:
        return AlgebraElement(self.sig, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: Any) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            self._check(other)
            return _multiply(self, other)
        if isinstance(other, (int, Fraction, IotaRat, QSeries)) or hasattr(other, "_is_scalar"):
            return AlgebraElement(self.sig, {k: v * other for k, v in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other: Any) -> AlgebraElement:
        if isinstance(other, (int, Fraction, IotaRat, QSeries)) or hasattr(other, "_is_scalar"):
            return AlgebraElement(self.sig, {k: other * v for k, v in self.terms.items()})
        return NotImplemented

    def __pow__(self, n: int) -> AlgebraElement:
        out = self.sig.one()
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: Any) -> bool:
        o = self._coerce(other) if not isinstance(other, AlgebraElement) else other
        if o is None:
            return NotImplemented
        if o.sig != self.sig:
            return False
        return (self - o).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def canonical(self) -> tuple:
        """Hashable snapshot of the term map."""
        return tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))

    # -- inspection --------------------------------------------------------

    def coefficient(self, key: Key) -> Any:
        return self.terms.get(key, Fraction(0))

    def constant_term(self) -> Any:
        return self.terms.get(self.sig.unit_key(), Fraction(0))

    def parity(self) -> int | None:
        ps = {bin(k[2]).count("1") % 2 for k in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def degree_part(self, j: int) -> AlgebraElement:
        return AlgebraElement(self.sig, {k: v for k, v in self.terms.items()
                                         if self.sig.degree(k) == j}, _clean=True)

    def filter(self, pred: Callable[[Key], bool]) -> AlgebraElement:
        return AlgebraElement(self.sig, {k: v for k, v in self.terms.items() if pred(k)}, _clean=True)

    def map_coeffs(self, f: Callable[[Any], Any]) -> AlgebraElement:
        return AlgebraElement(self.sig, {k: f(v) for k, v in self.terms.items()})

    def conjugate(self) -> AlgebraElement:
        def conj(c: Any) -> Any:
            return c.conjugate() if hasattr(c, "conjugate") else c
        return self.map_coeffs(conj)

    def first_term(self) -> tuple[str, Any] | None:
        if not self.terms:
            return None
        k = min(self.terms, key=lambda key: (self.sig.degree(key), key))
        return monomial_str(self.sig, k), self.terms[k]

    def __repr__(self) -> str:
        return f"AlgebraElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda key: (self.sig.degree(key), key)):
            m = monomial_str(self.sig, k)
            c = self.terms[k]
            parts.append(f"({c})" + ("" if m == "1" else "*" + m))
        return " + ".join(parts)

    def to_json(self) -> dict:
        from .qseries import scalar_to_json
        out = []
        for k in sorted(self.terms):
            c = self.terms[k]
            enc = c.to_json() if isinstance(c, QSeries) else {"scalar": scalar_to_json(c)}
            out.append({"even": list(k[0]), "u_half": k[1], "odd": _mask_bits(k[2]), "coeff": enc})
        return {"signature": self.sig.to_json(), "terms": out}

    # -- degree-0 parameters -------------------------------------------------

    def _param_index(self, name: str) -> int:
        lay = self.sig._layout
        if name not in lay["even_index"]:
            raise KeyError(f"unknown parameter {name!r}")
        return lay["even_index"][name]

    def param_expansion(self, name: str) -> dict[int, AlgebraElement]:
        """Split into {power of parameter: parameter-free element}."""
        i = self._param_index(name)
        out: dict[int, dict] = {}
        for (ev, u, m), c in self.terms.items():
            p = ev[i]
            ev2 = ev[:i] + (0,) + ev[i + 1:]
            out.setdefault(p, {})[(ev2, u, m)] = c
        return {p: AlgebraElement(self.sig, t, _clean=True) for p, t in out.items()}

    def substitute_param(self, name: str, value: Any) -> AlgebraElement:
        out = self.sig.zero()
        for p, e in self.param_expansion(name).items():
            out = out + e.scale(Fraction(value) ** p if isinstance(value, (int, Fraction)) else value ** p)
        return out

    def integrate_param(self, name: str, lo: Any, hi: Any) -> AlgebraElement:
        """Exact integral over [lo, hi] of a Laurent polynomial in the parameter."""
        out = self.sig.zero()
        for p, e in self.param_expansion(name).items():
            if p == -1:
                raise ArithmeticError("logarithmic term: parameter^-1 is not integrable here")
            lo_f, hi_f = Fraction(lo), Fraction(hi)
            if p < -1 and (lo_f == 0 or hi_f == 0 or (lo_f < 0 < hi_f)):
                raise ArithmeticError("integral diverges at 0")
            w = (hi_f ** (p + 1) - lo_f ** (p + 1)) / (p + 1)
            out = out + e.scale(w)
        return out

    # -- u-grading -----------------------------------------------------------

    def u_graded(self, total: int) -> AlgebraElement:
        """Attach u^{(j - total)/2} to each form-degree-j monomial."""
        if not self.sig.u_grading:
            raise ValueError("u-grading is disabled in this signature")
        out: dict[Key, Any] = {}
        for (ev, u, m), c in self.terms.items():
            j = self.sig.degree((ev, u, m))
            k = (ev, j - total, m)
            out[k] = out[k] + c if k in out else c
        return AlgebraElement(self.sig, out)

    def is_total_homogeneous(self, total: int) -> bool:
        return all(self.sig.total_degree(k) == total for k in self.terms)


def _mask_bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def monomial_str(sig: AlgebraSignature, key: Key) -> str:
    ev, u, mask = key
    parts = []
    for n, e in zip(sig.even_names, ev):
        if e:
            parts.append(n if e == 1 else f"{n}^{e}")
    if u:
        parts.append(f"u^({u}/2)")
    parts += [sig.odd_names[i] for i in _mask_bits(mask)]
    return "*".join(parts) if parts else "1"


def _multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    sig = a.sig
    if not a.terms or not b.terms:
        return sig.zero()
    dim = sig.dim
    widx = sig._layout["W"]
    wb = sig.W_bound
    by_deg: dict[int, list] = {}
    for k, v in b.terms.items():
        by_deg.setdefault(sig.degree(k), []).append((k, v))
    degs = sorted(by_deg)
    out: dict[Key, Any] = {}
    for (ea, ua, ma), ca in a.terms.items():
        da = sig.degree((ea, ua, ma))
        for db in degs:
            if da + db > dim:
                break
            for (eb, ub, mb), cb in by_deg[db]:
                if ma & mb:
                    continue
                ev = tuple(x + y for x, y in zip(ea, eb))
                if widx is not None and ev[widx] > wb:
                    continue
                c = ca * cb
                if koszul_sign(ma, mb) < 0:
                    c = -c
                k = (ev, ua + ub, ma | mb)
                if k in out:
                    out[k] = out[k] + c
                else:
                    out[k] = c
    return AlgebraElement(sig, out)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    return _multiply(a, b)


# ---------------------------------------------------------------------------
# derivations
# ---------------------------------------------------------------------------


def _derivation(a: AlgebraElement, images: Mapping[str, AlgebraElement], odd: bool) -> AlgebraElement:
    """Leibniz extension of generator images (generators absent from ``images`` map to 0)."""
    sig = a.sig
    lay = sig._layout
    even_names, odd_names = lay["even"], lay["odd"]
    n_even = len(even_names)
    out = sig.zero()
    for (ev, u, mask), c in a.terms.items():
        odd_part = AlgebraElement(sig, {((0,) * n_even, 0, mask): Fraction(1)}, _clean=True)
        for i, e in enumerate(ev):
            name = even_names[i]
            if e == 0 or name not in images:
                continue
            ev2 = ev[:i] + (e - 1,) + ev[i + 1:]
            rest = AlgebraElement(sig, {(ev2, u, 0): e * c}, _clean=True)
            out = out + rest * images[name] * odd_part
        bits = _mask_bits(mask)
        for pos, i in enumerate(bits):
            name = odd_names[i]
            if name not in images:
                continue
            before = sum(1 << j for j in bits[:pos])
            after = sum(1 << j for j in bits[pos + 1:])
            lead = AlgebraElement(sig, {(ev, u, before): c}, _clean=True)
            tail = AlgebraElement(sig, {((0,) * n_even, 0, after): Fraction(1)}, _clean=True)
            term = lead * images[name] * tail
            if odd and pos % 2:
                term = -term
            out = out + term
    return out


def apply_d(a: AlgebraElement) -> AlgebraElement:
    """Odd derivation: t_a -> dt_a, declared odd generators -> their differentials."""
    sig = a.sig
    images: dict[str, AlgebraElement] = {}
    for j in range(sig.coords):
        images[f"t{j + 1}"] = sig.gen(f"dt{j + 1}")
    for g in sig.odd:
        if g.differential == "p1":
            images[g.name] = sig.p1()
        elif g.differential is not None:
            raise ValueError(f"unsupported differential {g.differential!r}")
    return _derivation(a, images, odd=True)


def apply_dbar(a: AlgebraElement) -> AlgebraElement:
    """Even derivation d/d(tau-bar): W -> iota W^2, holomorphic coefficients -> 0."""
    sig = a.sig
    if not sig.include_W:
        return sig.zero()
    return _derivation(a, {"W": sig.gen("W", 2, IotaRat.iota())}, odd=False)


def apply_dv(a: AlgebraElement) -> AlgebraElement:
    """Even derivation in the volume symbol v, with z-coordinates held fixed."""
    sig = a.sig
    if not sig.include_v:
        return sig.zero()
    return _derivation(a, {"v": sig.one()}, odd=False)


def apply_param_derivative(a: AlgebraElement, name: str) -> AlgebraElement:
    return _derivation(a, {name: a.sig.one()}, odd=False)


# ---------------------------------------------------------------------------
# exponentials and pairing
# ---------------------------------------------------------------------------


def _nilpotent_key(sig: AlgebraSignature, key: Key) -> bool:
    return sig.degree(key) > 0 or key[2] != 0


def exp_nilpotent(a: AlgebraElement) -> AlgebraElement:
    """exp(a) for even a without a degree-0 commuting part; the sum terminates."""
    sig = a.sig
    for k in a.terms:
        if bin(k[2]).count("1") % 2:
            raise ValueError("exp_nilpotent needs an even element")
        if not _nilpotent_key(sig, k):
            raise NotNilpotentError(f"non-nilpotent term {monomial_str(sig, k)}")
    out = sig.one()
    term = sig.one()
    m = 1
    while True:
        term = (term * a).scale(Fraction(1, m))
        if term.is_zero():
            return out
        out = out + term
        m += 1


def parse_partition(p: Any) -> tuple[int, ...]:
    if isinstance(p, str):
        s = p.strip().strip("[]()")
        parts = [int(x) for x in s.replace(" ", "").split(",") if x] if s else []
    else:
        parts = [int(x) for x in p]
    return tuple(sorted(parts, reverse=True))


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def _elementary(r: int, j: int) -> dict:
    from itertools import combinations
    out = {}
    for S in combinations(range(r), j):
        out[tuple(1 if i in S else 0 for i in range(r))] = 1
    return out


def symmetric_to_elementary(poly: dict[tuple[int, ...], Any], r: int) -> dict[tuple[int, ...], Any]:
    """Rewrite a symmetric polynomial (exponent tuple -> coeff) in elementary symmetric functions.

    Returns {partition: coeff} where partition (l1 >= l2 >= ...) stands for e_{l1} e_{l2} ...
    """
    poly = {k: v for k, v in poly.items() if v}
    e_cache = {j: _elementary(r, j) for j in range(1, r + 1)}
    out: dict[tuple[int, ...], Any] = {}
    while poly:
        lead = max(poly)
        c = poly[lead]
        if any(lead[i] < lead[i + 1] for i in range(r - 1)):
            raise ValueError("polynomial is not symmetric")
        mult = [lead[i] - (lead[i + 1] if i + 1 < r else 0) for i in range(r)]
        prod: dict = {(0,) * r: 1}
        parts: list[int] = []
        for j in range(r, 0, -1):
            for _ in range(mult[j - 1]):
                prod = _poly_mul(prod, e_cache[j])
                parts.append(j)
        part = tuple(sorted(parts, reverse=True))
        out[part] = out.get(part, 0) + c
        for k, v in prod.items():
            nv = poly.get(k, 0) - c * v
            if nv:
                poly[k] = nv
            else:
                poly.pop(k, None)
    return {k: v for k, v in out.items() if v}


def top_pontryagin_coefficients(a: AlgebraElement, dim: int | None = None) -> dict[tuple[int, ...], Any]:
    """Top-degree part of ``a`` in the Pontryagin-monomial basis {partition: coeff}."""
    sig = a.sig
    dim = sig.dim if dim is None else dim
    r = sig.roots
    poly: dict[tuple[int, ...], Any] = {}
    for k, c in a.terms.items():
        if sig.degree(k) != dim:
            continue
        ev, u, mask = k
        if mask or any(ev[r:]) or u:
            raise ValueError(f"top-degree term {monomial_str(sig, k)} is not a root polynomial")
        if any(e % 2 for e in ev[:r]):
            raise ValueError("top-degree part is not a polynomial in squared roots")
        y = tuple(e // 2 for e in ev[:r])
        poly[y] = c
    if not poly:
        return {}
    if r < dim // 4:
        raise ValueError(f"need at least {dim // 4} roots to separate Pontryagin monomials")
    return symmetric_to_elementary(poly, r)


def pair_with_pontryagin(a: AlgebraElement, numbers: Mapping[Any, int], dim: int | None = None,
                         missing_ok: Callable[[tuple[int, ...]], bool] | None = None) -> Any:
    """Contract the top-degree part with prescribed Pontryagin numbers.

    A missing partition is an error unless its coefficient vanishes or
    ``missing_ok`` accepts it (it then counts as zero).
    """
    nums = {parse_partition(k): v for k, v in numbers.items()}
    coeffs = top_pontryagin_coefficients(a, dim)
    total: Any = Fraction(0)
    for part, c in coeffs.items():
        if part not in nums:
            if missing_ok is not None and missing_ok(part):
                continue
            raise MissingPontryaginData(f"no Pontryagin number for partition {list(part)}")
        total = c * nums[part] + total
    return total


def embed(a: AlgebraElement, target: AlgebraSignature) -> AlgebraElement:
    """Map an element into a signature that contains all of its generators."""
    src = a.sig
    t_even = target._layout["even_index"]
    t_odd = target._layout["odd_index"]
    n_even = len(target.even_names)
    even_map = [t_even[n] for n in src.even_names]
    odd_map = [t_odd[n] for n in src.odd_names]
    out: dict[Key, Any] = {}
    for (ev, u, mask), c in a.terms.items():
        nev = [0] * n_even
        for i, e in enumerate(ev):
            if e:
                nev[even_map[i]] = e
        bits = [odd_map[i] for i in _mask_bits(mask)]
        sign = 1
        for i in range(len(bits)):
            for j in range(i + 1, len(bits)):
                if bits[i] > bits[j]:
                    sign = -sign
        nmask = sum(1 << b for b in bits)
        out[(tuple(nev), u, nmask)] = c if sign > 0 else -c
    return AlgebraElement(target, out)


def exp_series_coefficients(order: int) -> list[Fraction]:
    return [Fraction(1, factorial(j)) for j in range(order + 1)]


def root_product(sig: AlgebraSignature, coeffs: Iterable[Any]) -> AlgebraElement:
    """prod_i f(x_i) for f = sum_j coeffs[j] x^j."""
    cs = list(coeffs)
    out = sig.one()
    for i in range(sig.roots):
        f = sig.zero()
        for j, c in enumerate(cs):
            if 2 * j > sig.dim:
                break
            if not _is_zero(c):
                f = f + (sig.root(i, j).scale(c) if j else sig.scalar(c))
        out = out * f
    return out
