"""Sparse Z/2-graded matrices over exact rings, plus field linear algebra.

Sections are written with basis vectors on the left and coefficients on the
right, so operators compose by the plain matrix product.  Entry ``(i, j)`` of
an operator of parity ``P`` has parity ``P + p_i + p_j``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .scalars import GaussRat


def entry_parity(x: Any) -> int | None:
    par = getattr(x, "parity", None)
    if callable(par):
        return par()
    return 0


class GradedMatrix:
    __slots__ = ("parities", "entries")

    def __init__(self, parities: Sequence[int], entries: dict[tuple[int, int], Any] | None = None) -> None:
        self.parities = tuple(int(p) % 2 for p in parities)
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    # -- constructors ------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.parities)

    @classmethod
    def zeros(cls, parities: Sequence[int]) -> GradedMatrix:
        return cls(parities, {})

    @classmethod
    def identity(cls, parities: Sequence[int], one: Any = Fraction(1)) -> GradedMatrix:
        return cls(parities, {(i, i): one for i in range(len(parities))})

    @classmethod
    def diagonal(cls, values: Sequence[Any], parities: Sequence[int]) -> GradedMatrix:
        return cls(parities, {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], parities: Sequence[int]) -> GradedMatrix:
        ent = {}
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                if v:
                    ent[(i, j)] = Fraction(v) if isinstance(v, int) else v
        return cls(parities, ent)

    def to_rows(self, zero: Any = Fraction(0)) -> list[list[Any]]:
        n = self.size
        rows = [[zero] * n for _ in range(n)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def get(self, i: int, j: int, zero: Any = Fraction(0)) -> Any:
        return self.entries.get((i, j), zero)

    # -- arithmetic --------------------------------------------------------

    def _same(self, other: GradedMatrix) -> None:
        if self.parities != other.parities:
            raise ValueError("graded matrices have different gradings")

    def __add__(self, other: GradedMatrix) -> GradedMatrix:
        self._same(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return GradedMatrix(self.parities, out)

    def __neg__(self) -> GradedMatrix:
        return GradedMatrix(self.parities, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: GradedMatrix) -> GradedMatrix:
        return self + (-other)

    def scale(self, c: Any) -> GradedMatrix:
        return GradedMatrix(self.parities, {k: c * v for k, v in self.entries.items()})

    def scale_right(self, c: Any) -> GradedMatrix:
        return GradedMatrix(self.parities, {k: v * c for k, v in self.entries.items()})

    def __matmul__(self, other: GradedMatrix) -> GradedMatrix:
        self._same(other)
        rows: dict[int, list] = {}
        for (k, j), b in other.entries.items():
            rows.setdefault(k, []).append((j, b))
        out: dict[tuple[int, int], Any] = {}
        for (i, k), a in self.entries.items():
            for j, b in rows.get(k, ()):
                v = a * b
                key = (i, j)
                out[key] = out[key] + v if key in out else v
        return GradedMatrix(self.parities, out)

    __mul__ = __matmul__

    def map(self, f: Callable[[Any], Any]) -> GradedMatrix:
        return GradedMatrix(self.parities, {k: f(v) for k, v in self.entries.items()})

    def transpose(self) -> GradedMatrix:
        return GradedMatrix(self.parities, {(j, i): v for (i, j), v in self.entries.items()})

    def conj_transpose(self) -> GradedMatrix:
        def conj(v: Any) -> Any:
            return v.conjugate() if hasattr(v, "conjugate") else v
        return GradedMatrix(self.parities, {(j, i): conj(v) for (i, j), v in self.entries.items()})

    def sigma(self) -> GradedMatrix:
        """Left multiplication by the grading operator diag((-1)^{p_i})."""
        return GradedMatrix(self.parities, {(i, j): (-v if self.parities[i] else v)
                                            for (i, j), v in self.entries.items()})

    def commutator(self, other: GradedMatrix, sign: int) -> GradedMatrix:
        """self*other - sign*other*self."""
        a, b = self @ other, other @ self
        return a - b if sign > 0 else a + b

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return self.parities == other.parities and (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    # -- grading -----------------------------------------------------------

    def op_parity(self) -> int | None:
        """Operator parity, or None for the zero matrix; raises if inhomogeneous."""
        found = None
        for (i, j), v in self.entries.items():
            ep = entry_parity(v)
            if ep is None:
                raise ValueError(f"entry ({i},{j}) has mixed parity")
            p = (ep + self.parities[i] + self.parities[j]) % 2
            if found is None:
                found = p
            elif found != p:
                raise ValueError("matrix is not homogeneous")
        return found

    def is_homogeneous(self) -> bool:
        try:
            self.op_parity()
        except ValueError:
            return False
        return True

    def supertrace(self, parity: int | None = None) -> Any:
        """sum_i (-1)^{p_i (1 + |M|)} M_ii."""
        P = self.op_parity() if parity is None else parity
        P = 0 if P is None else P
        acc: Any = Fraction(0)
        for i, p in enumerate(self.parities):
            v = self.entries.get((i, i))
            if v is None:
                continue
            acc = acc - v if (p and not P) else acc + v
        return acc

    def graded_kron(self, other: GradedMatrix, other_parity: int) -> GradedMatrix:
        """(A (x) B)(v (x) w) = (-1)^{|B||v|} Av (x) Bw on the tensor basis (i, k) -> i*m + k."""
        m = other.size
        par = [(p + q) % 2 for p in self.parities for q in other.parities]
        out: dict[tuple[int, int], Any] = {}
        for (i, j), a in self.entries.items():
            s = -1 if (other_parity and self.parities[j]) else 1
            for (k, l), b in other.entries.items():
                v = a * b
                out[(i * m + k, j * m + l)] = -v if s < 0 else v
        return GradedMatrix(par, out)

    def restrict(self, basis: Sequence[int] | None = None, cols: list[list[Any]] | None = None,
                 left_inverse: list[list[Any]] | None = None, parities: Sequence[int] | None = None) -> GradedMatrix:
        """Compress to a sub-basis: either coordinate indices or explicit columns."""
        if basis is not None:
            idx = {b: n for n, b in enumerate(basis)}
            return GradedMatrix([self.parities[b] for b in basis],
                                {(idx[i], idx[j]): v for (i, j), v in self.entries.items()
                                 if i in idx and j in idx})
        assert cols is not None and left_inverse is not None and parities is not None
        k = len(cols)
        out: dict[tuple[int, int], Any] = {}
        # (L X B)_{ab} = sum_{i,j} L[a][i] X_ij B[j][b]
        for (i, j), v in self.entries.items():
            for a in range(k):
                la = left_inverse[a][i]
                if not la:
                    continue
                for b in range(k):
                    cb = cols[b][j]
                    if cb:
                        key = (a, b)
                        t = la * v * cb
                        out[key] = out[key] + t if key in out else t
        return GradedMatrix(parities, out)

    def __repr__(self) -> str:
        return f"GradedMatrix(parities={self.parities}, nnz={len(self.entries)})"


def block_diag(mats: Iterable[GradedMatrix]) -> GradedMatrix:
    par: list[int] = []
    out: dict[tuple[int, int], Any] = {}
    off = 0
    for m in mats:
        for (i, j), v in m.entries.items():
            out[(i + off, j + off)] = v
        par.extend(m.parities)
        off += m.size
    return GradedMatrix(par, out)


# ---------------------------------------------------------------------------
# dense linear algebra over Q or Q(i)
# ---------------------------------------------------------------------------


def _inv(x: Any) -> Any:
    return x.inverse() if isinstance(x, GaussRat) else 1 / Fraction(x)


def rref(rows: list[list[Any]]) -> tuple[list[list[Any]], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = _inv(m[r][c])
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: list[list[Any]], zero: Any = Fraction(0), one: Any = Fraction(1)) -> list[list[Any]]:
    n = len(rows[0]) if rows else 0
    red, piv = rref(rows)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for r, c in enumerate(piv):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def inverse(rows: list[list[Any]], one: Any = Fraction(1), zero: Any = Fraction(0)) -> list[list[Any]]:
    n = len(rows)
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in red]


def matmul_dense(a: list[list[Any]], b: list[list[Any]], zero: Any = Fraction(0)) -> list[list[Any]]:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[zero] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if x:
                for j in range(m):
                    y = b[t][j]
                    if y:
                        out[i][j] = out[i][j] + x * y
    return out


def charpoly(rows: list[list[Any]]) -> list[Any]:
    """Characteristic polynomial coefficients [c_0, ..., c_n] (monic) by Faddeev-LeVerrier."""
    n = len(rows)
    zero = Fraction(0)
    coeffs: list[Any] = [zero] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        AM = matmul_dense(rows, M)
        M = [[AM[i][j] + (coeffs[n - k + 1] if i == j else zero) for j in range(n)] for i in range(n)]
        AM = matmul_dense(rows, M)
        tr = sum((AM[i][i] for i in range(n)), zero)
        coeffs[n - k] = -tr * Fraction(1, k)
    return coeffs


def rational_roots(coeffs: Sequence[Any]) -> dict[Fraction, int] | None:
    """Rational roots with multiplicity, or None when the polynomial does not split over Q."""
    import sympy

    re_coeffs = []
    for c in coeffs:
        if isinstance(c, GaussRat):
            if c.im:
                return None
            c = c.re
        re_coeffs.append(Fraction(c))
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(re_coeffs)], x,
                      domain="QQ")
    roots = poly.ground_roots()
    if sum(roots.values()) != poly.degree():
        return None
    return {Fraction(int(r.p), int(r.q)): m for r, m in roots.items()}
