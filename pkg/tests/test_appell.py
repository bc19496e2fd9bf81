from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrank.appell import (AppellPoint, MatSL2, Fps_crank_series, Fps_series, Lp_appell_series, Lp_series,
                          appell_A, cusp_constant, dA_identity_via_cusp, eps_term, g_sum, glx_holomorphic,
                          h1_at_cusp, identity, ord_dAhat, ord_glx, unit_sum)
from qrank.exact import is_zero
from qrank.numeric import random_sl2
from qrank.partitions import d_series, mw_diff_series, nt_diff_series

S = MatSL2(0, -1, 1, 0)


def test_appell_n0_term_level2_half():
    # A_2(u) at u = -1/2: the n = 0 summand is a/(1-a) = -1/2; the rest starts at q^1
    A = appell_A(2, (0, Fraction(-1, 2)), order=1)
    assert A.coeff(0) == Fraction(-1, 2)


def test_appell_v_zero_default():
    a = appell_A(3, (0, Fraction(1, 5)), order=6)
    b = appell_A(3, (0, Fraction(1, 5)), (0, 0), order=6)
    assert a.first_difference(b, 6) is None


def test_identity_cusp_constant_present():
    pt = AppellPoint(3, Fraction(2, 7))
    h = h1_at_cusp(pt, identity, 3)
    assert h.valuation() == 0
    assert not is_zero(h.coeff(0))
    assert ord_dAhat(pt, identity) == 0


@pytest.mark.parametrize("ell,x", [(1, Fraction(1, 5)), (3, Fraction(2, 5)), (3, Fraction(3, 7))])
def test_cusp_route_matches_direct_derivative(ell, x):
    direct = appell_A(ell, (0, -x), order=10, deriv=1)
    assert dA_identity_via_cusp(ell, x, 10).first_difference(direct, 10) is None


@pytest.mark.parametrize("ell,x", [(3, Fraction(1, 5)), (3, Fraction(2, 7)), (1, Fraction(1, 5))])
def test_inversion_matches_glx(ell, x):
    pt = AppellPoint(ell, x)
    a = h1_at_cusp(pt, S, 6)
    b = glx_holomorphic(ell, x, 6)
    assert a.first_difference(b, 6) is None
    assert a.valuation() == ord_dAhat(pt, S)


def test_order_ignores_upper_row():
    rng = np.random.default_rng(3)
    pt = AppellPoint(3, Fraction(3, 11))
    for _ in range(20):
        g = random_sl2(rng, cmax=15, allow_negative_c=False)
        if g.c == 0:
            continue
        k = int(rng.integers(-4, 5))
        g2 = MatSL2(g.a + k * g.c, g.b + k * g.d, g.c, g.d)
        assert ord_dAhat(pt, g) == ord_dAhat(pt, g2)


@pytest.mark.parametrize("p", [5, 7])
def test_glx_orders_at_level_p_cusps(p):
    for v in range(1, p):
        x = Fraction(v, p)
        for c in range(1, (p - 1) // 2 + 1):
            assert ord_glx(3, x, p, p, c) == 0
        for a in range(1, (p - 1) // 2 + 1):
            assert ord_glx(3, x, p, a, p) >= 0


def test_constant_vanishes_off_integral_cx():
    assert cusp_constant(3, Fraction(1, 5), MatSL2(1, 0, 2, 1)) == 0


@pytest.mark.parametrize("p", [5, 7, 11])
def test_root_sums(p):
    assert g_sum(p, 0) == Fraction(p - 1, 2)
    assert unit_sum(p, 1) == p
    for s in range(2, p):
        assert unit_sum(p, s) == 0


def test_lp0_constant():
    assert Lp_series(5, 0, 3).coeff(0) == Fraction(-5, 12)
    assert Lp_series(7, 0, 3).coeff(0) == Fraction(-7, 12)


def test_lp_middle_range_has_no_polar_part():
    for v in (2, 4):
        assert Lp_series(5, v, 6).valuation() >= 0
    assert Lp_series(5, 0, 6).valuation() == 0
    assert Lp_series(5, 1, 6).valuation() >= 0
    assert Lp_series(7, 1, 6).valuation() == -1  # 6v < p


@pytest.mark.parametrize("p,v", [(5, 0), (5, 2), (5, 4), (7, 1), (7, 3), (7, 6), (7, 0)])
def test_two_forms_of_L(p, v):
    sp = Fraction(p * p - 1, 24)
    c = Fraction(3 * v * (p - v), 2 * p) - sp / p
    order = 8
    lhs = (Lp_appell_series(p, v, order + c) + eps_term(p, v)).shift(-c)
    assert lhs.first_difference(Lp_series(p, v, order), order) is None


def test_eps_zero_in_middle():
    assert eps_term(7, 3).terms == {}


@pytest.mark.parametrize("p,s,order", [(5, 1, 20), (5, 2, 20), (7, 2, 12)])
def test_fps_matches_combinatorics(p, s, order):
    comb = nt_diff_series(s, p, order)
    for r in range(1, p):
        comb = comb - d_series((r - s) % p, p, order) * Fraction(p - 2 * r, 2 * p)
    assert Fps_series(p, s, order).first_difference(comb, order) is None


def test_fps_crank_matches_combinatorics():
    p, s, order = 5, 1, 20
    comb = mw_diff_series(s, p, order)
    for r in range(1, p):
        comb = comb - d_series((r - s) % p, p, order, "crank") * Fraction(p - 2 * r, 2 * p)
    assert Fps_crank_series(p, s, order).first_difference(comb, order) is None


def test_fps_cusp_route():
    assert Fps_series(5, 2, 8, via_cusp=True).first_difference(Fps_series(5, 2, 8), 8) is None


def test_bad_point():
    with pytest.raises(ValueError):
        AppellPoint(3, Fraction(2))
    with pytest.raises(ValueError):
        MatSL2(1, 1, 1, 1)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([1, 3]), st.integers(2, 9), st.integers(1, 20), st.integers(1, 12), st.integers(-12, 12))
def test_order_formula_nondegenerate(ell, k, j, c, d):
    from math import gcd
    if j % k == 0 or gcd(c, d) != 1:
        return
    x = Fraction(j, k)
    g0, s, t = _egcd(d, c)
    g = MatSL2(s, -t, c, d)
    pt = AppellPoint(ell, x)
    cx, dx = c * x, d * x
    M = ell * cx + Fraction(ell, 2)
    degenerate = (M.denominator == 1) if cx.denominator != 1 else (ell % 2 == 1 and (2 * dx).denominator == 1)
    o = ord_dAhat(pt, g)
    v = h1_at_cusp(pt, g, o + 2).valuation()
    if degenerate:
        assert v is None or v >= o
    else:
        assert v == o


def _egcd(a, b):
    # returns g, s, t with s a + t b = g
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, s, t = _egcd(b, a % b)
    return g, t, s - (a // b) * t
