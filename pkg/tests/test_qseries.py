from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qrank.exact import root_of_unity, zeta_pow
from qrank.partitions import pn
from qrank.qseries import (EtaSpec, PSeries, TruncationEmpty, dump_series, e2_expand, eta_expand, geta_expand,
                           jtriple, load_series, mocktheta_g, pochhammer, qpow, theta_expand, theta_expand_sum)


def coeffs(s, upto):
    return [s.coeff(n) for n in range(upto)]


def test_geometric_inverse():
    s = PSeries({0: 1, 1: -1}, 5).invert()
    assert coeffs(s, 5) == [1, 1, 1, 1, 1]
    assert s.trunc == 5


def test_euler_times_partition_gf():
    order = 40
    P = PSeries({n: pn(n) for n in range(order)}, order)
    prod = pochhammer(1, 1, order) * P
    assert coeffs(prod, order) == [1] + [0] * (order - 1)


def test_qd_dq():
    assert qpow(2).qd_dq().coeff(2) == 2


def test_pochhammer_heads():
    assert coeffs(pochhammer(1, 1, 8), 8) == [1, -1, -1, 0, 0, 1, 0, 1]
    assert coeffs(pochhammer(5, 5, 6), 6) == [1, 0, 0, 0, 0, -1]


def test_eta_leading_exponents():
    assert eta_expand(EtaSpec(classic=((1, 1),)), 2).valuation() == Fraction(1, 24)
    g = geta_expand(5, 1, 6)
    assert g.valuation() == Fraction(1, 60)
    assert [g.coeff(Fraction(1, 60) + n) for n in range(6)] == [1, -1, 0, 0, -1, 1]


def test_t5_valuation():
    from qrank.theorems import t_series
    assert t_series(5, 4).valuation() == 1
    assert t_series(5, 4).coeff(1) == 1


def test_e2_head():
    e = e2_expand(4)
    assert coeffs(e, 4) == [1, -24, -72, -96]


def test_theta_at_zero_vanishes():
    assert theta_expand(0, 0, 1, 6).terms == {}


@pytest.mark.parametrize("r,s,mult", [(Fraction(1, 3), Fraction(1, 5), 1), (Fraction(2, 7), 0, 3),
                                      (Fraction(1, 2), Fraction(1, 4), 2)])
def test_theta_product_matches_sum(r, s, mult):
    a = theta_expand(r, s, mult, 8)
    b = theta_expand_sum(r, s, mult, 8)
    assert a.first_difference(b, 8) is None


def test_theta_elliptic_shift():
    # theta(z + tau') = -q'^{-1/2} e^{-2 pi i z} theta(z), z = r tau' + s
    r, s = Fraction(1, 3), Fraction(1, 5)
    lhs = theta_expand(r + 1, s, 1, 10)
    rhs = theta_expand(r, s, 1, 12).shift(-Fraction(1, 2) - r) * (-root_of_unity(-s))
    assert lhs.first_difference(rhs, 8) is None


def test_mocktheta_g_head():
    # n = 0 term gives q^{-a}(-1 + 1/(1 - q^a)) = 1 + q^a + ...
    g = mocktheta_g(5, 25, 12)
    assert g.coeff(0) == 1


def test_truncation_is_tracked():
    a = PSeries({0: 1, 1: 2}, 10)
    b = PSeries({0: 1}, 4)
    assert (a * b).trunc == 4
    with pytest.raises(TruncationEmpty):
        a.first_difference(b, 6)


def test_jtriple_is_triple_product():
    # J_{5,1} = sum (-1)^n q^{5n(n-1)/2 + n}
    order = 30
    terms = {}
    for n in range(-10, 11):
        e = 5 * n * (n - 1) // 2 + n
        if 0 <= e < order:
            terms[e] = terms.get(e, 0) + (-1) ** (n % 2)
    assert jtriple(5, 1, order).first_difference(PSeries(terms, order), order) is None


def test_dump_roundtrip():
    s = PSeries({Fraction(1, 3): Fraction(-2, 7), 2: zeta_pow(5, 2) + 1}, 9)
    t = load_series(dump_series(s))
    assert t.first_difference(s, Fraction(26, 3)) is None and t.trunc == 9


def test_dissect_selects_progression():
    P = PSeries({n: pn(n) for n in range(40)}, 40)
    d = P.dissect(5, 4)
    assert d.coeff(0) == 5 and d.coeff(1) == 30
    assert all(c % 5 == 0 for _, c in d.coeffs())


small = st.dictionaries(st.integers(0, 6), st.integers(-5, 5), max_size=5)


@settings(max_examples=80, deadline=None)
@given(small, small, small)
def test_ring_laws(a, b, c):
    A, B, C = (PSeries(x, 8) for x in (a, b, c))
    assert (A * (B + C)).first_difference(A * B + A * C, 8) is None
    assert (A * B).first_difference(B * A, 8) is None


@settings(max_examples=80, deadline=None)
@given(small, st.integers(-5, 5).filter(bool))
def test_invert_roundtrip(a, c0):
    a = dict(a)
    a[0] = c0
    A = PSeries(a, 10)
    assert (A * A.invert()).first_difference(PSeries({0: 1}), 10) is None
