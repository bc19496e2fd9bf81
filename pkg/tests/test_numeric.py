import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from qrank.appell import AppellPoint, MatSL2, appell_A, h1_at_cusp
from qrank.numeric import (E_fn, H2_num, SPECIAL_TOL, TRANSFORM_TOL, appell_hat_num, appell_num, beta_fn,
                           beta_quad, cusp_lhs_num, d_appell_hat_num, random_sl2, rel_residual, series_num)


def test_beta_special_values():
    assert abs(beta_fn(0.0) - 1.0) < SPECIAL_TOL
    assert abs(E_fn(0.0)) < SPECIAL_TOL


def test_beta_closed_form_against_quadrature():
    for x in np.linspace(0.0, 3.0, 20):
        assert abs(beta_fn(x) - beta_quad(x)) < SPECIAL_TOL


def test_E_is_odd_and_matches_beta():
    rng = np.random.default_rng(0)
    for z in rng.uniform(-3, 3, 50):
        assert abs(E_fn(z) + E_fn(-z)) < SPECIAL_TOL
        assert abs(E_fn(z) - math.copysign(1 - beta_fn(z * z), z)) < SPECIAL_TOL


def test_level_one_needs_no_completion():
    rng = np.random.default_rng(1)
    for _ in range(50):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.3, 2.0))
        u = complex(rng.uniform(0.1, 0.9), rng.uniform(-0.2, 0.2) * tau.imag)
        assert rel_residual(appell_hat_num(1, u, tau), appell_num(1, u, tau)) < 1e-9


def _sample_points(rng, count):
    out = []
    while len(out) < count:
        ell = int(rng.choice([1, 2, 3]))
        g = random_sl2(rng, cmax=6)
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.5))
        if g.act(tau).imag < 0.15:
            continue
        u = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3) * tau.imag)
        out.append((ell, g, tau, u))
    return out


def test_modular_law():
    worst = 0.0
    for ell, g, tau, u in _sample_points(np.random.default_rng(2), 50):
        j = g.c * tau + g.d
        lhs = appell_hat_num(ell, u / j, g.act(tau))
        rhs = j * cmath.exp(-1j * math.pi * g.c * ell * u * u / j) * appell_hat_num(ell, u, tau)
        worst = max(worst, rel_residual(lhs, rhs))
    assert worst < TRANSFORM_TOL


def test_elliptic_law():
    rng = np.random.default_rng(3)
    worst = 0.0
    for ell, _, tau, u in _sample_points(rng, 50):
        n, m = int(rng.integers(-1, 2)), int(rng.integers(-1, 2))
        lhs = appell_hat_num(ell, u + n * tau + m, tau)
        rhs = ((-1) ** (ell * (n + m) % 2) * cmath.exp(2j * math.pi * ell * n * u)
               * cmath.exp(1j * math.pi * tau * ell * n * n) * appell_hat_num(ell, u, tau))
        worst = max(worst, rel_residual(lhs, rhs))
    assert worst < TRANSFORM_TOL


def test_exact_series_matches_numeric_appell():
    tau = 0.13 + 0.9j
    for ell, x in [(1, Fraction(1, 5)), (3, Fraction(2, 7))]:
        s = appell_A(ell, (0, -x), order=30)
        assert rel_residual(series_num(s, tau), appell_num(ell, complex(-float(x)), tau)) < 1e-9


@pytest.mark.parametrize("ell,x,g", [(3, Fraction(1, 5), MatSL2(1, 0, 0, 1)),
                                     (3, Fraction(1, 5), MatSL2(0, -1, 1, 0)),
                                     (1, Fraction(2, 7), MatSL2(1, 0, 3, 1)),
                                     (3, Fraction(3, 7), MatSL2(2, 1, 5, 3))])
def test_cusp_decomposition_numeric(ell, x, g):
    # derivative by differences at the transformed point equals exact H1 plus numeric H2
    tau = 0.05 + 1.1j
    lhs = cusp_lhs_num(ell, x, g, tau)
    h1 = series_num(h1_at_cusp(AppellPoint(ell, x), g, 40), tau)
    rhs = h1 + H2_num(ell, x, g, tau)
    assert rel_residual(lhs, rhs) < 1e-6


def test_finite_difference_derivative_on_holomorphic_case():
    tau = 0.2 + 0.8j
    u = -0.3 + 0.0j
    d = d_appell_hat_num(1, u, tau)
    h = 1e-5
    ref = (appell_num(1, u + h, tau) - appell_num(1, u - h, tau)) / (2 * h)
    assert rel_residual(d, ref) < 1e-6
