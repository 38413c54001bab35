"""Complex Clifford algebras, their graded modules, and Clifford supertraces.

Positive rank ``n`` uses generators ``f_j`` with ``f_j^2 = -1``; negative rank
uses ``e_j`` with ``e_j^2 = +1``.  The volume element ``Gamma_n`` carries its
``2^(-|n|/2)`` prefactor as an exact power of sqrt(2).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .formalcdga import koszul_sign
from .linalg import GradedMatrix, charpoly, inverse, matmul_dense, nullspace, rational_roots
from .scalars import GaussRat, Sqrt2Scaled

I = GaussRat(0, 1)
ONE = GaussRat(1)
ZERO = GaussRat(0)


class AlgebraMismatch(ValueError):
    pass


class NotCliffordLinear(ValueError):
    pass


class NotDiagonalizable(ArithmeticError):
    pass


def _g(x: Any) -> GaussRat:
    return x if isinstance(x, GaussRat) else GaussRat(x)


@dataclass(frozen=True)
class CliffordAlgebra:
    n: int

    @property
    def rank(self) -> int:
        return abs(self.n)

    @property
    def square(self) -> int:
        return -1 if self.n > 0 else 1

    @property
    def letter(self) -> str:
        return "f" if self.n > 0 else "e"

    def generator(self, j: int) -> CliffordElement:
        if not 0 <= j < self.rank:
            raise IndexError("generator index out of range")
        return CliffordElement(self, {1 << j: ONE})

    def one(self) -> CliffordElement:
        return CliffordElement(self, {0: ONE})

    def gamma(self) -> CliffordElement:
        return CliffordElement(self, {(1 << self.rank) - 1: ONE}, -self.rank)

    def basis(self) -> list[int]:
        return list(range(1 << self.rank))


def monomial_product(alg: CliffordAlgebra, a: int, b: int) -> tuple[int, int]:
    sign = koszul_sign(a, b)
    if alg.square < 0 and bin(a & b).count("1") % 2:
        sign = -sign
    return sign, a ^ b


class CliffordElement:
    __slots__ = ("alg", "terms", "half_exp")

    def __init__(self, alg: CliffordAlgebra, terms: dict[int, Any], half_exp: int = 0) -> None:
        shift, r = divmod(half_exp, 2)
        scale = Fraction(2) ** shift
        self.alg = alg
        self.terms = {m: _g(c) * scale for m, c in terms.items() if c}
        self.half_exp = r

    def _check(self, other: CliffordElement) -> None:
        if other.alg != self.alg:
            raise AlgebraMismatch("elements of different Clifford algebras")

    def __mul__(self, other: Any) -> CliffordElement:
        if isinstance(other, CliffordElement):
            self._check(other)
            out: dict[int, GaussRat] = {}
            for a, x in self.terms.items():
                for b, y in other.terms.items():
                    s, m = monomial_product(self.alg, a, b)
                    v = x * y
                    out[m] = out.get(m, ZERO) + (v if s > 0 else -v)
            return CliffordElement(self.alg, out, self.half_exp + other.half_exp)
        c = _g(other)
        return CliffordElement(self.alg, {m: c * v for m, v in self.terms.items()}, self.half_exp)

    def __rmul__(self, other: Any) -> CliffordElement:
        c = _g(other)
        return CliffordElement(self.alg, {m: c * v for m, v in self.terms.items()}, self.half_exp)

    def __add__(self, other: CliffordElement) -> CliffordElement:
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.half_exp != other.half_exp:
            raise ValueError("cannot add elements with different sqrt(2) parity")
        out = dict(self.terms)
        for m, v in other.terms.items():
            out[m] = out.get(m, ZERO) + v
        return CliffordElement(self.alg, out, self.half_exp)

    def __neg__(self) -> CliffordElement:
        return CliffordElement(self.alg, {m: -v for m, v in self.terms.items()}, self.half_exp)

    def __sub__(self, other: CliffordElement) -> CliffordElement:
        return self + (-other)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, (int, Fraction, GaussRat)):
            other = self.alg.one() * other
        if not isinstance(other, CliffordElement):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.alg == other.alg and self.half_exp == other.half_exp and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def parity(self) -> int | None:
        ps = {bin(m).count("1") % 2 for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return f"CliffordElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        L = self.alg.letter
        parts = []
        for m in sorted(self.terms):
            word = "".join(f"{L}{j + 1}" for j in range(self.alg.rank) if m >> j & 1) or "1"
            parts.append(f"({self.terms[m]}){word}")
        pre = "sqrt(2)*" if self.half_exp else ""
        return pre + " + ".join(parts)


def clifford_multiply(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    return a * b


def involution(a: CliffordElement, which: str) -> CliffordElement:
    """star, superstar (antilinear) or alpha (linear, n -> -n).

    star reverses products; superstar reverses them in the graded sense,
    (ab)^* = (-1)^{|a||b|} b^* a^*, so its reordering sign cancels on monomials.
    """
    alg = a.alg
    out: dict[int, GaussRat] = {}
    if which in ("star", "superstar"):
        if which == "star":
            gen_factor = GaussRat(-1) if alg.n > 0 else ONE
        else:
            gen_factor = -I if alg.n > 0 else I
        for m, c in a.terms.items():
            k = bin(m).count("1")
            f = gen_factor ** k
            if which == "star" and (k * (k - 1) // 2) % 2:
                f = -f
            out[m] = c.conjugate() * f
        return CliffordElement(alg, out, a.half_exp)
    if which == "alpha":
        target = CliffordAlgebra(-alg.n)
        gen_factor = -I if alg.n > 0 else I
        for m, c in a.terms.items():
            out[m] = c * gen_factor ** bin(m).count("1")
        return CliffordElement(target, out, a.half_exp)
    raise ValueError(f"unknown involution {which!r}")


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CliffordModule:
    n: int
    parities: tuple[int, ...]
    generators: tuple[GradedMatrix, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if len(self.generators) != abs(self.n):
            raise ValueError("need one generator matrix per Clifford generator")
        sq = -1 if self.n > 0 else 1
        ident = GradedMatrix.identity(self.parities, ONE)
        for j, c in enumerate(self.generators):
            if c.parities != self.parities:
                raise ValueError("generator grading mismatch")
            if c.op_parity() not in (1, None):
                raise ValueError("Clifford generators act by odd operators")
            for k, d in enumerate(self.generators):
                anti = c @ d + d @ c
                want = ident.scale(GaussRat(2 * sq)) if j == k else GradedMatrix.zeros(self.parities)
                if anti != want:
                    raise ValueError("generator matrices violate the Clifford relations")

    @property
    def dim(self) -> int:
        return len(self.parities)

    def gamma_matrix(self) -> tuple[GradedMatrix, int]:
        m = GradedMatrix.identity(self.parities, ONE)
        for c in self.generators:
            m = m @ c
        return m, -abs(self.n)

    def tensor(self, other: CliffordModule) -> CliffordModule:
        """Graded tensor product; generators of both factors, in order."""
        if self.n and other.n and (self.n > 0) != (other.n > 0):
            raise ValueError("tensor factors must use the same generator type")
        sign = 1 if (self.n or other.n) >= 0 else -1
        ida = GradedMatrix.identity(self.parities, ONE)
        idb = GradedMatrix.identity(other.parities, ONE)
        gens = [c.graded_kron(idb, 0) for c in self.generators]
        gens += [ida.graded_kron(c, 1) for c in other.generators]
        return CliffordModule(sign * (abs(self.n) + abs(other.n)),
                              tuple((p + q) % 2 for p in self.parities for q in other.parities),
                              tuple(gens))

    def with_multiplicity(self, parities: Sequence[int]) -> CliffordModule:
        """S (x) M with the Clifford action on the first factor."""
        idm = GradedMatrix.identity(parities, ONE)
        gens = tuple(c.graded_kron(idm, 0) for c in self.generators)
        par = tuple((p + q) % 2 for p in self.parities for q in parities)
        return CliffordModule(self.n, par, gens)


def trivial_module(parities: Sequence[int] = (0,)) -> CliffordModule:
    return CliffordModule(0, tuple(parities), ())


def _s2(sign: int) -> CliffordModule:
    f1 = GradedMatrix.from_rows([[ZERO, GaussRat(-1)], [ONE, ZERO]], (0, 1))
    f2 = GradedMatrix.from_rows([[ZERO, I], [I, ZERO]], (0, 1))
    if sign < 0:
        f1, f2 = f1.scale(I), f2.scale(I)
    return CliffordModule(2 * sign, (0, 1), (f1, f2))


def regular_module(n: int) -> CliffordModule:
    """The algebra acting on itself by left multiplication."""
    alg = CliffordAlgebra(n)
    masks = alg.basis()
    par = tuple(bin(m).count("1") % 2 for m in masks)
    gens = []
    for j in range(alg.rank):
        ent = {}
        for col, m in enumerate(masks):
            s, r = monomial_product(alg, 1 << j, m)
            ent[(r, col)] = GaussRat(s)
        gens.append(GradedMatrix(par, ent))
    return CliffordModule(n, par, tuple(gens))


def irreducible_module(n: int) -> CliffordModule:
    """Smallest graded module: S_2 tensor powers, times the rank-one regular module for odd n."""
    if n == 0:
        return trivial_module()
    sign = 1 if n > 0 else -1
    k, odd = divmod(abs(n), 2)
    mod = trivial_module()
    for _ in range(k):
        mod = mod.tensor(_s2(sign)) if mod.n else _s2(sign)
    if odd:
        r1 = regular_module(sign)
        mod = mod.tensor(r1) if mod.n else r1
    return mod


@dataclass(frozen=True)
class GradedEndomorphism:
    matrix: GradedMatrix
    module: CliffordModule
    parity: int = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.matrix.parities != self.module.parities:
            raise ValueError("endomorphism grading does not match the module")
        p = self.matrix.op_parity()
        if self.parity is None:
            object.__setattr__(self, "parity", 0 if p is None else p)
        elif p is not None and p != self.parity:
            raise ValueError("declared parity disagrees with the matrix")
        for c in self.module.generators:
            sc = self.matrix.commutator(c, -1 if self.parity else 1)
            if not sc.is_zero():
                raise NotCliffordLinear("endomorphism does not supercommute with the Clifford action")


def clifford_supertrace(T: GradedEndomorphism) -> Any:
    """sTr(Gamma_n T); a plain scalar for even n, a Sqrt2Scaled for odd n."""
    g, half = T.module.gamma_matrix()
    par = (abs(T.module.n) + T.parity) % 2
    val = (g @ T.matrix).supertrace(par)
    return Sqrt2Scaled(val, half).folded()


def kernel_projector(D: GradedMatrix) -> GradedMatrix:
    """Orthogonal projector onto ker D (standard Hermitian inner product)."""
    rows = [[_g(x) for x in r] for r in D.to_rows(ZERO)]
    ker = nullspace(rows, ZERO, ONE) if rows else []
    n = D.size
    if not ker:
        return GradedMatrix.zeros(D.parities)
    K = [[ker[b][i] for b in range(len(ker))] for i in range(n)]
    Kh = [[ker[b][i].conjugate() for i in range(n)] for b in range(len(ker))]
    G = matmul_dense(Kh, K, ZERO)
    Ginv = inverse(G, ONE, ZERO)
    P = matmul_dense(matmul_dense(K, Ginv, ZERO), Kh, ZERO)
    return GradedMatrix.from_rows(P, D.parities)


def clifford_superdim(D: GradedEndomorphism) -> Any:
    P = kernel_projector(D.matrix)
    return clifford_supertrace(GradedEndomorphism(P, D.module, 0))


def spectral_projectors(X: GradedMatrix) -> dict[Fraction, GradedMatrix]:
    """Eigenprojectors of a diagonalizable constant matrix with rational spectrum."""
    rows = [[_g(x) for x in r] for r in X.to_rows(ZERO)]
    roots = rational_roots(charpoly(rows)) if rows else {}
    if roots is None:
        raise NotDiagonalizable("spectrum is not rational")
    ident = GradedMatrix.identity(X.parities, ONE)
    out: dict[Fraction, GradedMatrix] = {}
    for lam in roots:
        P = ident
        for mu in roots:
            if mu != lam:
                P = (P @ (X - ident.scale(GaussRat(mu)))).scale(GaussRat(1 / (lam - mu)))
        if (X @ P) != P.scale(GaussRat(lam)):
            raise NotDiagonalizable("matrix is not diagonalizable")
        out[lam] = P
    return out


@dataclass
class McKeanSingerResult:
    constant: bool
    value: Any
    superdim: Any
    spectrum: dict[Fraction, Any]

    @property
    def ok(self) -> bool:
        return self.constant and self.value == self.superdim


def heat_supertrace(D: GradedEndomorphism) -> dict[Fraction, Any]:
    """sTr_Cl(exp(-t D^2)) as {lambda: coefficient of e^{-lambda t}}."""
    X = D.matrix @ D.matrix
    out = {}
    for lam, P in spectral_projectors(X).items():
        out[lam] = clifford_supertrace(GradedEndomorphism(P, D.module, 0))
    return out


def mckean_singer_check(D: GradedEndomorphism) -> McKeanSingerResult:
    if D.parity != 1:
        raise ValueError("D must be odd")
    if D.matrix.conj_transpose() != D.matrix:
        raise ValueError("D must be self-adjoint")
    spectrum = heat_supertrace(D)
    constant = all(not v for lam, v in spectrum.items() if lam != 0)
    value = spectrum.get(Fraction(0), Fraction(0))
    return McKeanSingerResult(constant, value, clifford_superdim(D), spectrum)


def heat_supertrace_numeric(D: GradedEndomorphism, ts: Sequence[float]) -> list[complex]:
    """Floating cross-check of sTr_Cl(exp(-t D^2)) at sample times."""
    import numpy as np

    n = D.matrix.size
    A = np.zeros((n, n), dtype=complex)
    for (i, j), v in D.matrix.entries.items():
        A[i, j] = complex(v)
    g, half = D.module.gamma_matrix()
    G = np.zeros((n, n), dtype=complex)
    for (i, j), v in g.entries.items():
        G[i, j] = complex(v)
    G *= 2.0 ** (half / 2)
    w, V = np.linalg.eigh(A @ A)
    sig = np.array([(-1) ** p for p in D.matrix.parities], dtype=float)
    par = abs(D.module.n) % 2
    out = []
    for t in ts:
        E = (V * np.exp(-t * w)) @ V.conj().T
        M = G @ E
        out.append(complex(np.sum(np.diag(M) * (sig if not par else 1.0))))
    return out


# ---------------------------------------------------------------------------
# random Clifford-linear test operators
# ---------------------------------------------------------------------------


def _rand_gauss(rng: random.Random, span: int = 3) -> GaussRat:
    return GaussRat(Fraction(rng.randint(-span, span), rng.randint(1, 3)),
                    Fraction(rng.randint(-span, span), rng.randint(1, 3)))


def random_unitary(rng: random.Random, k: int) -> list[list[GaussRat]]:
    """Cayley transform (I - K)(I + K)^{-1} of a random skew-Hermitian K."""
    K = [[ZERO] * k for _ in range(k)]
    for i in range(k):
        K[i][i] = GaussRat(0, Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        for j in range(i + 1, k):
            z = _rand_gauss(rng)
            K[i][j] = z
            K[j][i] = -z.conjugate()
    Ip = [[ONE if i == j else ZERO for j in range(k)] for i in range(k)]
    A = [[Ip[i][j] - K[i][j] for j in range(k)] for i in range(k)]
    B = [[Ip[i][j] + K[i][j] for j in range(k)] for i in range(k)]
    return matmul_dense(A, inverse(B, ONE, ZERO), ZERO)


def random_dirac(rng: random.Random, n: int, p: int, q: int, kernel_bias: float = 0.4) -> GradedEndomorphism:
    """1 (x) D' on S_n (x) C^{p|q}, D' = [[0, B*], [B, 0]] with B = U1 Sigma U2 (rational singular values)."""
    U1, U2 = random_unitary(rng, q), random_unitary(rng, p)
    Sig = [[ZERO] * p for _ in range(q)]
    for i in range(min(p, q)):
        if rng.random() > kernel_bias:
            Sig[i][i] = GaussRat(rng.randint(1, 4))
    B = matmul_dense(matmul_dense(U1, Sig, ZERO), U2, ZERO) if p and q else [[ZERO] * p for _ in range(q)]
    par = (0,) * p + (1,) * q
    ent = {}
    for i in range(q):
        for j in range(p):
            if B[i][j]:
                ent[(p + i, j)] = B[i][j]
                ent[(j, p + i)] = B[i][j].conjugate()
    Dp = GradedMatrix(par, ent)
    S = irreducible_module(n)
    mod = S.with_multiplicity(par)
    D = GradedMatrix.identity(S.parities, ONE).graded_kron(Dp, 1)
    return GradedEndomorphism(D, mod, 1)
