import json
import math
import random
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st

from wfcalc.charclasses import euler_anomaly_data
from wfcalc.clifford import random_dirac, trivial_module
from wfcalc.formalcdga import AlgebraSignature, apply_d
from wfcalc.linalg import GradedMatrix
from wfcalc.scalars import ExpPoly, GaussRat
from wfcalc.superconn import (
    NonConstantSpectrum, SuperConnection, SuperPoint, chern_form, chern_simons, eft_verify,
    euler_eft_data, euler_rep, fermion_trace_normalization, grassmann_signature, heat_kernel,
    l_operators, lift, load_rep, pairing_adjunction_check, partition_trace, random_form_matrix,
    random_nilpotent_family, random_odd_nilpotent, random_odd_symmetric, random_semigroup_rep,
    random_super_point, rep_mckean_singer, rescale, semigroup_evaluate, semigroup_law_check,
    spectral_cutoff, super_point_multiply, transgression_check,
)

DATA = Path(__file__).resolve().parents[1] / "data"
FORMS = AlgebraSignature(coords=2, dim=2, params=("s",))


def num(x):
    if isinstance(x, ExpPoly):
        return sum(float(v) * math.exp(float(k)) for k, v in x.terms.items())
    return float(x)


# -- heat kernel against a floating Frechet-derivative oracle ------------------

@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(3)]))
def test_heat_kernel_matches_expm_frechet(seed, t):
    """exp(-t(S + wN)) = exp(-tS) + w L(-tS, -tN) for a nilpotent 2-form w."""
    rng = random.Random(seed)
    M = random_odd_symmetric(rng, 2, 1, kernel_bias=0.0)
    S = M @ M
    rows = [[Fraction(rng.randint(-2, 2)) for _ in range(3)] for _ in range(3)]
    par = S.parities
    w = FORMS.gen("dt1") * FORMS.gen("dt2")
    X = lift(S, FORMS) + lift(GradedMatrix.from_rows(rows, par), FORMS).scale_right(w)
    K = heat_kernel(X, FORMS, t)
    Sa = np.array([[float(x) for x in r] for r in S.to_rows(Fraction(0))])
    E, L = sla.expm_frechet(-float(t) * Sa, -float(t) * np.array(rows, dtype=float))
    wkey = next(iter(w.terms))
    for i in range(3):
        for j in range(3):
            e = K.get(i, j, FORMS.zero())
            body = next((c for k, c in e.terms.items() if FORMS.degree(k) == 0), 0)
            top = e.terms.get(wkey, 0)
            assert abs(num(body) - E[i, j]) < 1e-9
            assert abs(num(top) - L[i, j]) < 1e-9


def test_heat_kernel_of_zero_is_identity():
    K = heat_kernel(GradedMatrix.zeros((0, 1)), FORMS)
    assert K == lift(GradedMatrix.identity((0, 1)), FORMS)


# -- superconnections -----------------------------------------------------------

def connection_with_gap(seed, sig=FORMS):
    rng = random.Random(seed)
    M = random_odd_symmetric(rng, 2, 2, kernel_bias=0.5)
    return SuperConnection(sig, trivial_module(M.parities), {0: M, 1: random_form_matrix(rng, sig, M.parities, 1)})


def test_validation_errors():
    par = (0, 1)
    with pytest.raises(ValueError):
        SuperConnection.build(FORMS, par, {0: [[1, 0], [0, 1]]})
    with pytest.raises(ValueError):
        SuperConnection.build(FORMS, par, {1: [[0, 1], [1, 0]]})
    with pytest.raises(ValueError):
        SuperConnection.build(FORMS, par, {-1: [[0, 1], [1, 0]]})


def test_rescale_scales_components():
    A = connection_with_gap(3)
    B = rescale(A, 4)
    assert B.component(0) == A.component(0).scale_right(Fraction(2))
    assert B.component(1) == A.component(1)
    with pytest.raises(ValueError):
        rescale(A, 2)
    with pytest.raises(ZeroDivisionError):
        rescale(A, 0)


def test_chern_form_of_invertible_constant_block_vanishes():
    """An invertible odd endomorphism on C^{1|1} has zero supertrace of its heat operator."""
    A = SuperConnection.build(FORMS, (0, 1), {0: [[0, 2], [2, 0]]})
    assert chern_form(A).is_zero()


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.sampled_from([(0, 1), (0, 0, 1), (0, 1, 1)]))
def test_chern_simons_transgresses(seed, par):
    rng = random.Random(seed)
    sig = AlgebraSignature(coords=3, dim=3, params=("s",))
    A = random_nilpotent_family(rng, sig, "s", par)
    ch = chern_form(A)
    assert apply_d(chern_simons(A, "s", 0, 1)) == ch.substitute_param("s", 1) - ch.substitute_param("s", 0)


def test_chern_simons_rejects_moving_spectrum():
    s = FORMS.gen("s")
    A = SuperConnection.build(FORMS, (0, 1), {0: [[0, s], [s, 0]]})
    with pytest.raises(NonConstantSpectrum):
        chern_simons(A, "s", 0, 1)


@pytest.mark.parametrize("seed", range(4))
def test_rescaling_transgression(seed):
    rng = random.Random(seed)
    N = random_odd_nilpotent(rng, 2, 1)
    comps = {0: N, 1: random_form_matrix(rng, FORMS, N.parities, 1),
             2: random_form_matrix(rng, FORMS, N.parities, 2)}
    assert transgression_check(SuperConnection(FORMS, trivial_module(N.parities), comps), 4, "s")


@pytest.mark.parametrize("seed", [0, 1, 7, 9, 21, 25, 34])
@pytest.mark.parametrize("lam", [Fraction(1, 2), Fraction(5, 2), Fraction(20)])
def test_spectral_cutoff(seed, lam):
    res = spectral_cutoff(connection_with_gap(seed), lam)
    assert res.ok


def test_spectral_cutoff_negative_control():
    """Doubling eta breaks d eta = Ch(A) - Ch(p nabla p) whenever eta is nonzero."""
    A = connection_with_gap(7)
    res = spectral_cutoff(A, Fraction(1, 2))
    assert res.rank == 2
    target = chern_form(A) - chern_form(res.subconnection)
    assert apply_d(res.eta) == target and not target.is_zero()
    assert apply_d(res.eta.scale(2)) != target


@pytest.mark.parametrize("n", [-1, 1, 2])
def test_spectral_cutoff_on_clifford_modules(n):
    D = random_dirac(random.Random(1), n, 2, 1, kernel_bias=0.3)
    A = SuperConnection(FORMS, D.module, {0: D.matrix})
    res = spectral_cutoff(A, Fraction(1, 2), param="s")
    assert res.ok and res.doubled is not None and res.doubled.n == n


def test_cutoff_at_eigenvalue_rejected():
    A = SuperConnection.build(FORMS, (0, 1), {0: [[0, 1], [1, 0]]})
    with pytest.raises(ValueError):
        spectral_cutoff(A, 1)


# -- the supersemigroup ------------------------------------------------------------

GRASS = grassmann_signature(4)


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_semigroup_law(seed, odd_only):
    rng = random.Random(seed)
    rep = random_semigroup_rep(rng, GRASS)
    g, h = random_super_point(rng, GRASS, odd_only), random_super_point(rng, GRASS, odd_only)
    assert semigroup_law_check(rep, g, h)


def test_semigroup_negative_control():
    """Dropping the eta eta' shift in the even coordinate breaks the law."""
    fails = 0
    for seed in range(30):
        rng = random.Random(seed)
        rep = random_semigroup_rep(rng, GRASS)
        g, h = random_super_point(rng, GRASS), random_super_point(rng, GRASS)
        naive = SuperPoint(g.tau + h.tau, g.taubar + h.taubar, g.eta + h.eta)
        left, right, prod = (semigroup_evaluate(rep, x) for x in (g, h, naive))
        fails += not all(left[k] @ right[k] == prod[k] for k in rep.blocks)
    assert fails > 10


def test_unit_acts_trivially():
    rep = random_semigroup_rep(random.Random(2), GRASS)
    for k, M in semigroup_evaluate(rep, SuperPoint.unit(GRASS)).items():
        assert M == lift(GradedMatrix.identity(M.parities), GRASS)


def test_point_multiplication():
    th = [GRASS.gen(f"th{i}") for i in (1, 2)]
    g = SuperPoint(GRASS.zero(), GRASS.zero(), th[0])
    h = SuperPoint(GRASS.zero(), GRASS.zero(), th[1])
    assert super_point_multiply(g, h).taubar == th[0] * th[1]
    with pytest.raises(ValueError):
        SuperPoint(th[0], GRASS.zero(), GRASS.zero())


def test_l_operators():
    rep = random_semigroup_rep(random.Random(4), GRASS)
    assert all(l_operators(rep).checks().values())


def test_rep_mckean_singer():
    rng = random.Random(0)
    blocks = {}
    for k in range(3):
        M = random_odd_symmetric(rng, 2, 1, kernel_bias=0.5)
        blocks[k] = SuperConnection(GRASS, trivial_module(M.parities), {0: M})
    from wfcalc.superconn import SuperSemigroupRep
    assert all(rep_mckean_singer(SuperSemigroupRep(GRASS, 0, blocks)).values())


# -- partition traces ---------------------------------------------------------------

@pytest.mark.parametrize("n, dim", [(2, 4), (2, 6), (4, 8)])
def test_euler_rep_partition_trace(n, dim):
    Z, _, _ = euler_anomaly_data(n, dim, 5)
    assert partition_trace(euler_rep(n, dim, 5), n) == Z


@pytest.mark.parametrize("n, dim", [(2, 4), (4, 8)])
def test_eft_verify(n, dim):
    rep = eft_verify(euler_eft_data(n, dim, 4))
    assert rep.ok and not rep.certificates


def test_eft_negative_control():
    d = euler_eft_data(2, 8, 3)
    d.Z_taubar = d.Z_taubar.scale(2)
    rep = eft_verify(d)
    assert rep.closed and not rep.anti_holomorphic and "taubar" in rep.certificates


def test_euler_rep_rejects_odd_rank():
    with pytest.raises(ValueError):
        euler_rep(3, 6, 3)


def test_load_rep_manifest():
    rep = load_rep(json.loads((DATA / "rep_small.json").read_text()))
    assert sorted(rep.blocks) == [0, 1]
    assert rep.sig.coords == 1
    assert str(partition_trace(rep).constant_term()) == "q"
    with pytest.raises(ValueError):
        rep_mckean_singer(rep)


def test_load_rep_malformed():
    with pytest.raises(ValueError):
        load_rep({"blocks": [{"parities": [0]}]})
    with pytest.raises(ValueError):
        load_rep({"clifford_rank": 1, "blocks": []})


def test_fermion_normalization():
    assert str(fermion_trace_normalization(0, 3)) == "1"
    assert str(fermion_trace_normalization(2, 2)) == "(1 − 2q − q^2)·ℓ"
    assert str(fermion_trace_normalization(1, 1)) == "(1 − q)·ℓ^{1/2}"
    with pytest.raises(ValueError):
        fermion_trace_normalization(-1, 3)


# -- super hermitian pairings -----------------------------------------------------------

def test_pairing_adjunction_constant_block():
    A = SuperConnection.build(FORMS, (0, 1), {0: [[0, 1], [1, 0]]})
    assert pairing_adjunction_check(A, [[1, 0], [0, GaussRat(0, 1)]])
    B = SuperConnection.build(FORMS, (0, 1), {0: [[0, 1], [2, 0]]})
    assert not pairing_adjunction_check(B, [[1, 0], [0, GaussRat(0, 1)]])


def test_pairing_adjunction_connection_form():
    dt = FORMS.gen("dt1")
    A = SuperConnection.build(FORMS, (0, 0), {1: [[0, dt], [dt.scale(-1), 0]]})
    assert pairing_adjunction_check(A, [[1, 0], [0, 1]])
    B = SuperConnection.build(FORMS, (0, 0), {1: [[0, dt], [dt, 0]]})
    assert not pairing_adjunction_check(B, [[1, 0], [0, 1]])


def test_pairing_must_be_super_hermitian():
    A = SuperConnection.build(FORMS, (0, 1), {0: [[0, 1], [1, 0]]})
    with pytest.raises(ValueError):
        pairing_adjunction_check(A, [[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        pairing_adjunction_check(A, [[1, 1], [1, GaussRat(0, 1)]])
