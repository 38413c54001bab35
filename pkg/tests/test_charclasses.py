from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wfcalc import charclasses
from wfcalc.charclasses import (
    Manifest, NotStringError, a_hat_class, dirac_ramond_check, euler_anomaly_check,
    euler_character_check, euler_signature, eta_h_transgression, sym_lambda_character,
    witten_class, witten_genus,
)
from wfcalc.formalcdga import AlgebraSignature, apply_d, apply_dbar, top_pontryagin_coefficients
from wfcalc.modforms import mf_basis, reduce_against_basis
from wfcalc.qseries import QSeries, eisenstein_q

from conftest import fr


def test_witten_class_dim8_matches_oracle(oracles):
    sig = AlgebraSignature(roots=2, dim=8, N=4)
    top = top_pontryagin_coefficients(witten_class(sig, "plain", 4))
    for part, name in [((1, 1), "p1^2"), ((2,), "p2")]:
        got = top[part]
        assert [got.coeff(n) for n in range(5)] == fr(oracles["witten_dim8"][name])


def test_a_hat_degree4():
    sig = AlgebraSignature(roots=1, dim=4)
    top = top_pontryagin_coefficients(a_hat_class(sig))
    assert top == {(1,): Fraction(-1, 24)}


def test_dim8_genus_is_multiple_of_e4(oracles):
    g = witten_genus({"dimension": 8, "pontryagin_numbers": {"2": 1440, "1,1": 0}}, 10)
    assert g == eisenstein_q(4, 10).scale(-1)
    # the oracle's p2 coefficient is the same multiple of E4
    assert Fraction(oracles["witten_dim8"]["p2"][1]) / Fraction(oracles["witten_dim8"]["p2"][0]) == 240


@pytest.mark.parametrize("dim", [1, 2, 3, 5, 6, 7, 10])
def test_genus_vanishes_off_multiples_of_four(dim):
    assert witten_genus({"dimension": dim}, 6).is_zero()


def test_dim4_string_genus_is_zero():
    assert witten_genus({"dimension": 4, "pontryagin_numbers": {"1": 0}}, 6).is_zero()


def test_non_string_rejected():
    with pytest.raises(NotStringError):
        witten_genus({"dimension": 8, "pontryagin_numbers": {"2": 1, "1,1": 3}}, 4)


def test_malformed_manifest():
    with pytest.raises(ValueError):
        Manifest.from_json({"pontryagin_numbers": {}})
    with pytest.raises(ValueError):
        Manifest.from_json({"dimension": -4})


@settings(max_examples=15)
@given(st.integers(-3000, 3000))
def test_dim8_genus_is_modular(p2):
    g = witten_genus({"dimension": 8, "pontryagin_numbers": {"2": p2, "1,1": 0}}, 8)
    rem, _ = reduce_against_basis(g, mf_basis(4, 8))
    assert rem.is_zero()


@settings(max_examples=8)
@given(st.integers(-500, 500))
def test_dim12_genus_is_modular(p3):
    nums = {"3": p3, "2,1": 0, "1,1,1": 0}
    g = witten_genus({"dimension": 12, "pontryagin_numbers": nums}, 6)
    rem, _ = reduce_against_basis(g, mf_basis(6, 6))
    assert rem.is_zero()


@pytest.mark.parametrize("n, dim", [(2, 4), (2, 8), (4, 8), (4, 12)])
def test_euler_character_identity(n, dim):
    res = euler_character_check(n, dim, 6)
    assert res.equal and res.certificate is None


def test_euler_character_odd_rank():
    with pytest.raises(ValueError):
        euler_character_check(3, 6, 4)


@pytest.mark.parametrize("n, dim", [(2, 4), (4, 8), (6, 12)])
def test_dirac_ramond_identity(n, dim):
    assert dirac_ramond_check(n, dim, 5).equal


def test_lambda_sym_inverse():
    sig = AlgebraSignature(roots=2, dim=8, N=5)
    for k in (1, 2, 3):
        prod = sym_lambda_character("lambda", k, sig) * sym_lambda_character("sym", k, sig)
        assert prod == sig.scalar(QSeries.constant(1, 5))


@pytest.mark.parametrize("variant", ["plain", "star"])
@pytest.mark.parametrize("dim", [4, 8])
def test_eta_h_transgression(variant, dim):
    sig = euler_signature(2 * (dim // 4), dim, 4)
    eta, ok = eta_h_transgression(sig, variant, 4)
    assert ok
    assert apply_d(eta) == witten_class(sig, "modular", 4) - witten_class(sig, variant, 4)


def test_eta_h_needs_h():
    with pytest.raises(ValueError):
        eta_h_transgression(AlgebraSignature(roots=1, dim=4), "plain", 3)


def test_eta_h_rejects_modular_variant():
    with pytest.raises(ValueError):
        eta_h_transgression(euler_signature(2, 4, 3), "modular", 3)


@pytest.mark.parametrize("n, dim", [(2, 4), (2, 6), (4, 8)])
def test_anomaly(n, dim):
    assert euler_anomaly_check(n, dim, 4)


def test_anomaly_negative_control():
    """Doubling the correction term breaks the anomaly equation."""
    Z, _, Ztb = charclasses.euler_anomaly_data(2, 8, 3)
    assert apply_dbar(Z) == apply_d(Ztb)
    assert apply_dbar(Z) != apply_d(Ztb.scale(2))
