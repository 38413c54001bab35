from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wfcalc.qseries import (
    BiSeries, IotaRat, PrecisionError, QSeries, bernoulli, dedekind_eta, delta_series,
    divisor_sigma_table, eisenstein_geometric, eisenstein_q, phi_product, weierstrass_sigma,
)

from conftest import fr

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def series(max_len=8, max_val=3):
    return st.builds(lambda c0, cs, v, t: QSeries([c0] + cs, v, v + t),
                     rationals.filter(bool), st.lists(rationals, max_size=max_len),
                     st.integers(-max_val, max_val), st.integers(3, 10))


# -- frozen oracle values ---------------------------------------------------

@pytest.mark.parametrize("k", [2, 4, 6, 8, 10, 12])
def test_eisenstein_matches_oracle(oracles, k):
    s = eisenstein_q(k, 12)
    assert [s.coeff(n) for n in range(13)] == fr(oracles["eisenstein"][str(k)])


def test_phi_matches_oracle(oracles):
    s = phi_product(40)
    assert [s.coeff(n) for n in range(41)] == fr(oracles["phi"])


def test_delta_matches_oracle(oracles):
    s = delta_series(20)
    assert [s.coeff(n) for n in range(21)] == fr(oracles["delta"])


def test_sigma_product_matches_oracle(oracles):
    grid = oracles["sigma_grid_q4_z8"]
    s = weierstrass_sigma("product", 4, 8)
    for n, row in enumerate(grid):
        assert list(s.q_slice(n)) == fr(row)


# -- direct values ----------------------------------------------------------

def test_bernoulli_small():
    assert [bernoulli(m) for m in (2, 4, 6, 12)] == [Fraction(1, 6), Fraction(-1, 30),
                                                      Fraction(1, 42), Fraction(-691, 2730)]
    with pytest.raises(ValueError):
        bernoulli(3)


def test_divisor_sigma():
    assert divisor_sigma_table(1, 6)[1:] == [1, 3, 4, 7, 6, 12]


def test_eta_text():
    assert dedekind_eta(1).format() == "q^{1/24}(1 − q)"


def test_eis4_text():
    assert str(eisenstein_q(4, 2)) == "1 + 240q + 2160q^2"


def test_geometric_normalization():
    # -B_4/4! * E4 has constant term 1/720
    assert eisenstein_geometric(4, 3).coeff(0) == Fraction(1, 720)


def test_odd_weight_rejected():
    with pytest.raises(ValueError):
        eisenstein_q(3, 4)


def test_eta24_is_delta():
    e = dedekind_eta(30) ** 24
    assert e.prefactor_exponent == 1
    assert e.as_qseries().truncate(30) == delta_series(30)


# -- precision bookkeeping ----------------------------------------------------

def test_coeff_beyond_truncation_raises():
    with pytest.raises(PrecisionError):
        phi_product(5).coeff(6)


def test_truncation_of_product_is_min():
    a = QSeries([1, 1], 0, 5)
    b = QSeries([1, 2, 3], -1, 8)
    assert (a * b).truncation == 4


def test_exact_inverse_needs_order():
    with pytest.raises(PrecisionError):
        QSeries([1, 1]).inverse()


def test_json_round_trip_with_iota():
    s = QSeries([1, IotaRat.iota(1, Fraction(1, 2)), Fraction(-3, 7)], -1, 4)
    assert QSeries.from_json(s.to_json()) == s


def test_malformed_json():
    with pytest.raises(ValueError):
        QSeries.from_json({"valuation": 0})


def test_sigma_unknown_mode():
    with pytest.raises(ValueError):
        weierstrass_sigma("bogus", 2, 2)


def test_sigma_routes_agree_small():
    a = weierstrass_sigma("product", 5, 6)
    b = weierstrass_sigma("exponential", 5, 6)
    assert a.first_difference(b) is None


def test_sigma_first_difference_reports_cell():
    a = weierstrass_sigma("product", 2, 4)
    b = a + BiSeries([[0], [0, 0, 1]], 2, 4)
    assert a.first_difference(b)[:2] == (1, 2)


# -- ring laws ----------------------------------------------------------------

@given(series(), series(), series())
def test_multiplication_associative(a, b, c):
    """(ab)c == a(bc) on the common window."""
    assert ((a * b) * c).agrees_with(a * (b * c))


@given(series(), series(), series())
def test_distributive(a, b, c):
    assert (a * (b + c)).agrees_with(a * b + a * c)


@given(series())
def test_inverse(a):
    """a * a^-1 == 1 to the inverse's window."""
    inv = a.inverse()
    one = a * inv
    assert one.agrees_with(QSeries.constant(1, one.truncation))


@given(series(), st.integers(-3, 3))
def test_shift_commutes_with_product(a, k):
    b = QSeries([1, 2], 0, 6)
    assert (a.shift(k) * b).agrees_with((a * b).shift(k))


@given(st.integers(1, 30))
def test_phi_is_pentagonal(n):
    """Euler's pentagonal theorem fixes every coefficient of phi to 0 or +-1."""
    s = phi_product(n)
    assert all(s.coeff(m) in (-1, 0, 1) for m in range(n + 1))
