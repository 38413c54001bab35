"""Compute reference values with sympy and freeze them into tests/data/oracles.json.

Everything here is computed from textbook definitions with sympy, never through
wfcalc, so the frozen numbers are an independent check of the package.
"""

from __future__ import annotations

import json
from pathlib import Path

import sympy as sp

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "oracles.json"
q, z, x, y = sp.symbols("q z x y")


def trunc(expr: sp.Expr, var: sp.Symbol, n: int) -> sp.Expr:
    p = sp.Poly(sp.expand(expr), var)
    return sum(c * var ** m[0] for m, c in zip(p.monoms(), p.coeffs()) if m[0] <= n)


def coeffs(expr: sp.Expr, var: sp.Symbol, n: int) -> list[str]:
    p = sp.expand(expr)
    return [str(p.coeff(var, k)) for k in range(n + 1)]


def eisenstein(k: int, n: int) -> list[str]:
    c = -sp.Rational(2 * k) / sp.bernoulli(k)
    return ["1"] + [str(c * sp.divisor_sigma(m, k - 1)) for m in range(1, n + 1)]


def euler_product(n: int) -> sp.Expr:
    acc = sp.Integer(1)
    for m in range(1, n + 1):
        acc = trunc(acc * (1 - q ** m), q, n)
    return acc


def power_trunc(f: sp.Expr, k: int, n: int) -> sp.Expr:
    acc = sp.Integer(1)
    for _ in range(k):
        acc = trunc(acc * f, q, n)
    return acc


def sigma_grid(nq: int, mz: int) -> list[list[str]]:
    """((e^{z/2}-e^{-z/2})/z) prod (1-q^k e^z)(1-q^k e^-z)/(1-q^k)^2 as a (q, z) grid."""
    ez = sp.series(sp.exp(z), z, 0, mz + 2).removeO()
    emz = sp.series(sp.exp(-z), z, 0, mz + 2).removeO()
    pre = sp.series(2 * sp.sinh(z / 2) / z, z, 0, mz + 1).removeO()

    def clip(e: sp.Expr) -> sp.Expr:
        e = sp.expand(e)
        return sum(e.coeff(q, a).coeff(z, b) * q ** a * z ** b
                   for a in range(nq + 1) for b in range(mz + 1))

    acc = clip(pre)
    for k in range(1, nq + 1):
        acc = clip(acc * (1 - q ** k * ez))
        acc = clip(acc * (1 - q ** k * emz))
    inv = sp.series(1 / euler_product(nq) ** 2, q, 0, nq + 1).removeO()
    acc = clip(acc * inv)
    return [[str(acc.coeff(q, a).coeff(z, b)) for b in range(mz + 1)] for a in range(nq + 1)]


def witten_dim8(n: int) -> dict[str, list[str]]:
    """Coefficients of p2 and p1^2 in the degree-8 part of the Witten class."""
    def root(v: sp.Symbol) -> sp.Expr:
        ahat = sp.series((v / 2) / sp.sinh(v / 2), v, 0, 5).removeO()
        acc = ahat
        for k in range(1, n + 1):
            num = (1 - q ** k) ** 2
            den = sp.series(1 / ((1 - q ** k * sp.exp(v)) * (1 - q ** k * sp.exp(-v))), v, 0, 5).removeO()
            acc = sp.expand(acc * num * den)
            acc = sum(acc.coeff(v, j) * v ** j for j in range(5))
        return sum(sp.series(acc.coeff(v, j), q, 0, n + 1).removeO() * v ** j for j in range(5))

    prod = sp.expand(root(x) * root(y))
    c_x4 = sp.expand(prod.coeff(x, 4).coeff(y, 0))
    c_x2y2 = sp.expand(prod.coeff(x, 2).coeff(y, 2))
    # p1^2 = x^4 + 2x^2y^2 + y^4, p2 = x^2 y^2
    a = c_x4
    b = sp.expand(c_x2y2 - 2 * c_x4)
    a = trunc(a, q, n)
    b = trunc(b, q, n)
    return {"p1^2": coeffs(a, q, n), "p2": coeffs(b, q, n)}


def klein_j(n: int) -> list[str]:
    e4 = sum(sp.Rational(c) * q ** k for k, c in enumerate(eisenstein(4, n + 1)))
    delta_over_q = power_trunc(euler_product(n + 1), 24, n + 1)
    inv = sp.series(1 / delta_over_q, q, 0, n + 2).removeO()
    body = trunc(power_trunc(e4, 3, n + 1) * inv, q, n + 1)
    return coeffs(body, q, n + 1)  # coefficient k is the q^{k-1} term


def class_orders(max_d: int, n: int) -> dict[str, int | None]:
    """Smallest d with d*Ehat2/m in 2Z[[q]] to order n (no weight-2 holomorphic forms)."""
    e2 = [sp.Rational(c) for c in eisenstein(2, n)]
    out: dict[str, int | None] = {}
    for m in (1, 2, 3, 4, 6, 8, 12, 24, 48):
        found = None
        for d in range(1, max_d + 1):
            if all((d * c / m / 2).q == 1 for c in e2):
                found = d
                break
        out[str(m)] = found
    return out


def main() -> None:
    data = {
        "eisenstein": {str(k): eisenstein(k, 12) for k in (2, 4, 6, 8, 10, 12)},
        "phi": coeffs(euler_product(40), q, 40),
        "delta": coeffs(q * power_trunc(euler_product(19), 24, 19), q, 20),
        "sigma_grid_q4_z8": sigma_grid(4, 8),
        "witten_dim8": witten_dim8(4),
        "j_minus_pole": klein_j(4),
        "e2_class_orders_lattice2": class_orders(100, 50),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
