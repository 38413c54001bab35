import pytest
from hypothesis import given, strategies as st

from wfcalc.formalcdga import (
    AlgebraSignature, NotNilpotentError, OddGenerator, SignatureMismatch, apply_d, apply_dbar,
    apply_param_derivative, embed, exp_nilpotent, koszul_sign, pair_with_pontryagin,
    top_pontryagin_coefficients,
)
from wfcalc.qseries import IotaRat

SIG = AlgebraSignature(roots=2, dim=8, coords=3, odd=(OddGenerator("H", 3, "p1"),),
                       include_W=True, W_bound=3, params=("s",), N=4)
GENS = ["x1", "x2", "t1", "t2", "t3", "W", "s", "H", "dt1", "dt2", "dt3"]

coef = st.fractions(min_value=-9, max_value=9, max_denominator=5)


@st.composite
def elements(draw, sig=SIG, max_terms=4, max_factors=3):
    out = sig.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        term = sig.scalar(draw(coef))
        for g in draw(st.lists(st.sampled_from(GENS), max_size=max_factors)):
            term = term * sig.gen(g)
        out = out + term
    return out


@st.composite
def homogeneous(draw, parity):
    e = draw(elements())
    return e.filter(lambda k: bin(k[2]).count("1") % 2 == parity)


@st.composite
def nilpotent_even(draw):
    e = draw(homogeneous(0))
    return e.filter(lambda k: SIG.degree(k) > 0)


def test_koszul_sign_direct():
    assert koszul_sign(0b01, 0b10) == 1
    assert koszul_sign(0b10, 0b01) == -1
    assert koszul_sign(0b011, 0b100) == 1
    assert koszul_sign(0b110, 0b001) == 1


def test_odd_squares_to_zero():
    assert (SIG.gen("H") * SIG.gen("H")).is_zero()
    assert (SIG.gen("dt1") * SIG.gen("dt2") + SIG.gen("dt2") * SIG.gen("dt1")).is_zero()


def test_degree_cap_truncates():
    assert SIG.gen("x1", 5).is_zero()
    assert not SIG.gen("x1", 4).is_zero()


def test_dH_is_p1():
    assert apply_d(SIG.gen("H")) == SIG.p1()


def test_dbar_on_W():
    assert apply_dbar(SIG.gen("W")) == SIG.gen("W", 2, IotaRat.iota())
    assert apply_dbar(SIG.gen("H") * SIG.root(0)).is_zero()


def test_exp_rejects_constant():
    with pytest.raises(NotNilpotentError):
        exp_nilpotent(SIG.one())


def test_mismatched_signatures():
    other = AlgebraSignature(roots=1, dim=4)
    with pytest.raises(SignatureMismatch):
        SIG.one() + other.one()


def test_pontryagin_pairing():
    sig = AlgebraSignature(roots=2, dim=8)
    a = sig.p1() * sig.p1()
    assert top_pontryagin_coefficients(a) == {(1, 1): 1}
    b = sig.root(0, 2) * sig.root(1, 2)
    assert top_pontryagin_coefficients(b) == {(2,): 1}
    assert pair_with_pontryagin(b.scale(3), {"2": 5}) == 15


def test_integrate_log_term_raises():
    e = SIG.gen("s", -1)
    with pytest.raises(ArithmeticError):
        e.integrate_param("s", 1, 2)


@given(elements())
def test_d_squared_zero(a):
    assert apply_d(apply_d(a)).is_zero()


@given(elements(), elements(), elements())
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(st.integers(0, 1), st.integers(0, 1), st.data())
def test_graded_commutative(p, r, data):
    a = data.draw(homogeneous(p))
    b = data.draw(homogeneous(r))
    sign = -1 if p and r else 1
    assert a * b == (b * a).scale(sign)


@given(st.integers(0, 1), st.data())
def test_leibniz(p, data):
    """d(ab) = da b + (-1)^|a| a db."""
    a = data.draw(homogeneous(p))
    b = data.draw(elements())
    lhs = apply_d(a * b)
    rhs = apply_d(a) * b + (a * apply_d(b)).scale(-1 if p else 1)
    assert lhs == rhs


@given(elements())
def test_d_commutes_with_dbar(a):
    assert apply_d(apply_dbar(a)) == apply_dbar(apply_d(a))


@given(nilpotent_even(), nilpotent_even())
def test_exp_additive(a, b):
    assert exp_nilpotent(a + b) == exp_nilpotent(a) * exp_nilpotent(b)


@given(nilpotent_even())
def test_d_of_exp(a):
    assert apply_d(exp_nilpotent(a)) == exp_nilpotent(a) * apply_d(a)


@given(elements(), st.fractions(-3, 3, max_denominator=4), st.fractions(-3, 3, max_denominator=4))
def test_integral_of_derivative(a, lo, hi):
    """int_lo^hi d/ds f ds = f(hi) - f(lo)."""
    a = a.filter(lambda k: k[0][SIG.even_names.index("s")] >= 0)
    lhs = apply_param_derivative(a, "s").integrate_param("s", lo, hi)
    rhs = a.substitute_param("s", hi) - a.substitute_param("s", lo)
    assert lhs == rhs


@given(elements(), elements())
def test_embed_is_multiplicative(a, b):
    big = AlgebraSignature(roots=2, dim=8, coords=4, odd=(OddGenerator("G", 1), OddGenerator("H", 3, "p1")),
                           include_W=True, W_bound=3, params=("s", "r"), N=4)
    assert embed(a * b, big) == embed(a, big) * embed(b, big)
