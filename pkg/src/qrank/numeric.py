"""Floating-point evaluation of the analytic objects, for cross-checking
transformation laws that the exact series code cannot see.

Tolerances used by the checks: 1e-12 for special functions, 1e-8 for
transformation residuals.  All residuals are relative to max(1, |rhs|).
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
from scipy import integrate, special

from .appell import MatSL2
from .exact import Cyc

SPECIAL_TOL = 1e-12
TRANSFORM_TOL = 1e-8

__all__ = ["beta_fn", "beta_quad", "E_fn", "theta_num", "R_num", "appell_num",
           "appell_hat_num", "d_appell_hat_num", "eta_num", "geta_num", "series_num",
           "H2_num", "cusp_lhs_num", "rel_residual", "random_sl2", "SPECIAL_TOL",
           "TRANSFORM_TOL", "to_complex"]


def beta_fn(x: float) -> float:
    """beta(x) = int_x^inf u^{-1/2} e^{-pi u} du = erfc(sqrt(pi x))."""
    return float(special.erfc(math.sqrt(math.pi * x)))


def beta_quad(x: float) -> float:
    """beta(x) by adaptive quadrature, after u = t^2 to remove the endpoint singularity."""
    val, _ = integrate.quad(lambda t: 2.0 * math.exp(-math.pi * t * t), math.sqrt(x), np.inf,
                            epsabs=1e-15, epsrel=1e-13)
    return val


def E_fn(z: float) -> float:
    """E(z) = sgn(z)(1 - beta(z^2)) = erf(sqrt(pi) z)."""
    return float(special.erf(math.sqrt(math.pi) * z))


def _span(center, y, scale=1.0):
    K = math.sqrt(45.0 / (math.pi * y * scale)) + 3
    return math.floor(center - K), math.ceil(center + K)


def theta_num(z: complex, tau: complex) -> complex:
    """sum over nu in 1/2 + Z of exp(pi i nu^2 tau + 2 pi i nu (z + 1/2))."""
    y = tau.imag
    lo, hi = _span(-z.imag / y, y)
    tot = 0j
    for k in range(lo, hi + 1):
        nu = k + 0.5
        tot += cmath.exp(1j * math.pi * nu * nu * tau + 2j * math.pi * nu * (z + 0.5))
    return tot


def R_num(u: complex, tau: complex) -> complex:
    """Zwegers' R(u; tau), evaluated stably with the scaled complementary error function."""
    y = tau.imag
    a = u.imag / y
    lo, hi = _span(-a, y)
    tot = 0j
    s2y = math.sqrt(2 * y)
    for k in range(lo, hi + 1):
        nu = k + 0.5
        z = (nu + a) * s2y
        sg = 1.0 if nu > 0 else -1.0
        sign = -1.0 if k % 2 else 1.0  # (-1)^{nu - 1/2}
        expo = -1j * math.pi * tau * nu * nu - 2j * math.pi * nu * u
        if (z > 0) == (nu > 0):
            w = math.sqrt(math.pi) * abs(z)
            tot += sign * sg * special.erfcx(w) * cmath.exp(expo - w * w)
        else:
            tot += sign * (sg - E_fn(z)) * cmath.exp(expo)
    return tot


def appell_num(ell: int, u: complex, tau: complex, v: complex = 0j) -> complex:
    """A_ell(u, v; tau) by direct summation."""
    y = tau.imag
    q = cmath.exp(2j * math.pi * tau)
    K = int(math.sqrt(45.0 / (math.pi * y * ell)) + abs(u.imag) / y + abs(v.imag) / y) + 4
    a = cmath.exp(2j * math.pi * u)
    b = cmath.exp(2j * math.pi * v)
    tot = 0j
    for n in range(-K, K + 1):
        tot += (-1) ** (ell * n % 2) * cmath.exp(2j * math.pi * tau * ell * n * (n + 1) / 2) * b ** n \
            / (1 - a * cmath.exp(2j * math.pi * tau * n))
    return cmath.exp(1j * math.pi * ell * u) * tot


def appell_hat_num(ell: int, u: complex, tau: complex) -> complex:
    """Completed Appell function A_ell + (i/2) sum_m e^{2 pi i m u} theta R."""
    tot = appell_num(ell, u, tau)
    for m in range(ell):
        th = theta_num(m * tau + (ell - 1) / 2, ell * tau)
        tot += 0.5j * cmath.exp(2j * math.pi * m * u) * th * R_num(ell * u - m * tau - (ell - 1) / 2, ell * tau)
    return tot


def d_appell_hat_num(ell: int, u: complex, tau: complex, h: float = 1e-5) -> complex:
    """Wirtinger derivative (1/2)(d/dRe u - i d/dIm u) by central differences."""
    dx = (appell_hat_num(ell, u + h, tau) - appell_hat_num(ell, u - h, tau)) / (2 * h)
    dy = (appell_hat_num(ell, u + 1j * h, tau) - appell_hat_num(ell, u - 1j * h, tau)) / (2 * h)
    return 0.5 * (dx - 1j * dy)


def eta_num(tau: complex) -> complex:
    """Dedekind eta via the pentagonal number theorem."""
    y = tau.imag
    K = int(math.sqrt(45.0 / (3 * math.pi * y))) + 3
    tot = 0j
    for n in range(-K, K + 1):
        tot += (-1) ** (n % 2) * cmath.exp(2j * math.pi * tau * n * (3 * n - 1) / 2)
    return cmath.exp(2j * math.pi * tau / 24) * tot


def geta_num(p: int, delta: int, tau: complex) -> complex:
    """Generalized eta eta_{p,delta}(tau) through the Jacobi triple product."""
    x = Fraction(delta, p)
    lead = Fraction(p, 2) * (x * x - x + Fraction(1, 6))
    # (q^d, q^{p-d}; q^p) (q^p; q^p) = sum (-1)^n q^{p n(n-1)/2 + d n}
    y = tau.imag
    K = int(math.sqrt(45.0 / (math.pi * y * p))) + 4
    tot = 0j
    for n in range(-K, K + 1):
        tot += (-1) ** (n % 2) * cmath.exp(2j * math.pi * tau * (p * n * (n - 1) / 2 + delta * n))
    eta_p = eta_num(p * tau) * cmath.exp(-2j * math.pi * p * tau / 24)
    return cmath.exp(2j * math.pi * tau * float(lead)) * tot / eta_p


def to_complex(c) -> complex:
    return complex(c) if isinstance(c, Cyc) else complex(float(c))


def series_num(s, tau: complex) -> complex:
    """Evaluate a (truncated) exact series at tau."""
    return sum(to_complex(c) * cmath.exp(2j * math.pi * tau * float(e)) for e, c in s.terms.items())


def H2_num(ell: int, x, gamma: MatSL2, tau: complex) -> complex:
    """Nonholomorphic part of (1/2 pi i) e^{-pi i ell c d x^2} dA_hat(-x)|_2 gamma."""
    x = float(x)
    y = tau.imag
    cx, dx = gamma.c * x, gamma.d * x
    W = math.sqrt(45.0 * ell / (math.pi * y)) + 3
    tot = 0j
    mlo, mhi = math.floor(-ell / 2 - W), math.ceil(-ell / 2 + W)
    for m in range(mlo, mhi + 1):
        w = m + ell / 2
        nlo = math.floor(cx + (w - W) / ell) - 1
        nhi = math.ceil(cx + (w + W) / ell) + 1
        for n in range(nlo, nhi + 1):
            uu = n - cx
            t = ell * uu - w
            E = -ell / 2 * uu * uu + uu * w
            g = math.sqrt(2 * math.pi * y / ell) * abs(t)
            f_scaled = math.pi * abs(t) * special.erfcx(g) - math.sqrt(ell / (2 * y))
            expo = 2j * math.pi * tau * E - 2 * math.pi * y * t * t / ell
            tot += (-1) ** (ell * n % 2) * cmath.exp(2j * math.pi * dx * t) * f_scaled * cmath.exp(expo)
    return -tot / (2 * math.pi)


def cusp_lhs_num(ell: int, x, gamma: MatSL2, tau: complex) -> complex:
    """(1/2 pi i) e^{-pi i ell c d x^2} (c tau + d)^{-2} dA_hat_ell(-x; gamma tau)."""
    x = float(x)
    gt = gamma.act(tau)
    j = gamma.c * tau + gamma.d
    d = d_appell_hat_num(ell, -x + 0j, gt)
    return cmath.exp(-1j * math.pi * ell * gamma.c * gamma.d * x * x) * d / (j * j) / (2j * math.pi)


def rel_residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def random_sl2(rng, cmax: int = 20, allow_negative_c: bool = True) -> MatSL2:
    """Random SL2(Z) matrix with |c| <= cmax."""
    while True:
        c = int(rng.integers(-cmax if allow_negative_c else 0, cmax + 1))
        d = int(rng.integers(-cmax, cmax + 1))
        if math.gcd(c, d) != 1:
            continue
        # solve a d - b c = 1
        if c == 0:
            a = d
            b = int(rng.integers(-5, 6))
            return MatSL2(a, b, 0, d)
        g, s, t = _egcd(d, -c)  # s d + t (-c) = 1
        k = int(rng.integers(-3, 4))
        a, b = s + k * c, t + k * d
        return MatSL2(a, b, c, d)


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, s, t = _egcd(b, a % b)
    return g, t, s - (a // b) * t
