from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wfcalc import modforms
from wfcalc.modforms import (
    KMF_ROWS, KOMF_ROWS, MFBasis, ModularForm, QuotientClass, class_order, dim_mf,
    kmf_descriptor, komf_descriptor, mf_basis, reduce_against_basis, weakly_holo_basis,
)
from wfcalc.qseries import PrecisionError, QSeries, delta_series, eisenstein_q

from conftest import fr


def test_j_invariant_matches_oracle(oracles):
    """The pole-1 weight-0 basis element is j - 744."""
    b = weakly_holo_basis(0, 1, 4)
    j = b.forms[0].series
    ref = fr(oracles["j_minus_pole"])
    assert j.coeff(-1) == ref[0]
    assert j.coeff(0) == 0
    assert [j.coeff(n) for n in range(1, 5)] == ref[2:]


@pytest.mark.parametrize("m, expected", [("1", 2), ("12", 24), ("24", 48), ("48", 96)])
def test_e2_class_orders_match_oracle(oracles, m, expected):
    assert oracles["e2_class_orders_lattice2"][m] == expected
    x = QuotientClass(eisenstein_q(2, 50).scale(Fraction(1, int(m))), 2, 2, 2, 50)
    assert class_order(x, 100).order == expected


def test_delta_two_routes():
    assert modforms.delta(50).series == delta_series(50)


@pytest.mark.parametrize("w", [0, 2, 4, 12, 14, 24, 26, 36])
def test_basis_sizes(w):
    assert len(mf_basis(w, 10)) == dim_mf(w)


def test_dim_formula():
    assert [dim_mf(w) for w in range(0, 28, 2)] == [1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 3, 2]


def test_basis_is_reduced():
    b = mf_basis(24, 10)
    assert b.pivots == [0, 1, 2]
    for i, f in enumerate(b.forms):
        for j, p in enumerate(b.pivots):
            assert f.series.coeff(p) == (1 if i == j else 0)


def test_basis_too_short_raises():
    with pytest.raises(PrecisionError):
        mf_basis(36, 1)


def test_odd_weight_rejected():
    with pytest.raises(ValueError):
        mf_basis(3, 5)
    with pytest.raises(ValueError):
        ModularForm(3, QSeries.zero(4))


def test_pole_beyond_declared_order():
    with pytest.raises(ValueError):
        ModularForm(0, QSeries([1], -2, 4), pole_order=1)


def test_weak_basis_pivots():
    b = weakly_holo_basis(2, 2, 6)
    assert b.pivots == [-2, -1]
    assert all(modforms.is_integral(f.series) for f in b.forms)


def test_reduce_e4_squared_is_e8():
    b = mf_basis(8, 8)
    rem, coords = reduce_against_basis(eisenstein_q(4, 8) ** 2, b)
    assert rem.is_zero() and coords == [1]


def test_class_of_modular_form_is_trivial():
    x = QuotientClass(eisenstein_q(4, 20).scale(Fraction(1, 240)), 4, 1, 0, 20)
    assert class_order(x, 10).order == 1


def test_class_order_none_up_to():
    x = QuotientClass(QSeries([Fraction(1, 7)], 0, 10), 2, 1, 0, 10)
    res = class_order(x, 5)
    assert res.order is None
    assert res.to_json() == {"order": None, "none_up_to": 5, "P": 0, "N": 10}


def test_class_truncation_check():
    with pytest.raises(PrecisionError):
        QuotientClass(QSeries([1], 0, 5), 2, 1, 0, 10)


def test_komf_rows_cover_residues():
    degrees = [0, 1, 2, 3, 4, 5, 6, 7]
    got = [komf_descriptor(d) for d in degrees]
    assert got == ["MF^Z_0", "Z/2((q))", "Z/2((q))", "C((q))/(2Z((q))+MF_2)", "MF^Z_2", "0", "0",
                   "C((q))/(Z((q))+MF_4)"]
    assert len(KOMF_ROWS) == 8


def test_komf_periodicity_shifts_weight():
    assert komf_descriptor(8) == "MF^Z_4"
    assert komf_descriptor(11) == "C((q))/(2Z((q))+MF_6)"
    assert komf_descriptor(-4) == "MF^Z_{-2}"


def test_kmf_rows():
    assert kmf_descriptor(4) == "MF^Z_2"
    assert kmf_descriptor(3) == "C((q))/(Z((q))+MF_2)"
    assert kmf_descriptor(7) == "C((q))/(Z((q))+MF_4)"
    assert len(KMF_ROWS) == 2


@given(st.integers(-40, 40))
def test_komf_eight_periodic_in_shape(d):
    """Shifting the degree by 8 keeps the row and moves the weight by 4."""
    a, b = komf_descriptor(d), komf_descriptor(d + 8)
    assert (a == "0") == (b == "0")
    assert ("Z/2" in a) == ("Z/2" in b)


@given(st.sampled_from([0, 4, 6, 8, 10, 12, 16]), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_combinations_reduce_to_zero(w, cs):
    """Any combination of basis forms reduces to zero with the same coordinates."""
    b = mf_basis(w, 8)
    cs = cs[:len(b)]
    f = QSeries.zero(8)
    for c, form in zip(cs, b.forms):
        f = f + form.series.scale(c)
    rem, coords = reduce_against_basis(f, b)
    assert rem.is_zero()
    assert coords == cs


def test_basis_json():
    js = mf_basis(12, 3).to_json()
    assert js["weight"] == 12 and len(js["forms"]) == 2
    assert isinstance(mf_basis(12, 3), MFBasis)
