"""Exact expansions of Appell-Lerch sums and the series built from them.

Every u-derivative below is the normalized one, (1/2 pi i) d/du, applied
term by term: on a^e = exp(2 pi i e u) it just multiplies by e.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd

from .exact import Cyc, cyc_to_rat, root_of_unity, zeta_pow
from .qseries import PSeries, e2_expand, pochhammer

__all__ = ["DegeneratePole", "MatSL2", "AppellPoint", "appell_A", "h1_at_cusp", "s3_series",
           "dA_identity_via_cusp", "cusp_constant", "ord_dAhat", "ord_glx", "glx_holomorphic",
           "Lp_series", "Lp_appell_series", "eps_term", "Fps_series", "Fps_crank_series",
           "unit_sum", "g_sum", "identity"]


class DegeneratePole(ArithmeticError):
    """Some factor 1 - a q^n vanishes identically."""


@dataclass(frozen=True)
class MatSL2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __matmul__(self, o: "MatSL2") -> "MatSL2":
        return MatSL2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                      self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def act(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)


identity = MatSL2(1, 0, 0, 1)


@dataclass(frozen=True)
class AppellPoint:
    """Level ell and shift u = -x with x a positive non-integral rational."""

    ell: int
    x: Fraction
    tau_mult: int = 1

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        if self.ell < 1:
            raise ValueError("level must be positive")
        if self.x <= 0 or self.x.denominator == 1:
            raise ValueError("x must be positive and not an integer")


def _lcm(*vals):
    out = 1
    for v in vals:
        out = out * v // gcd(out, v)
    return out


class _Acc:
    """Accumulates sum of (rational) * zeta_N^k at each exponent."""

    def __init__(self, N):
        self.N = N
        self.data = {}

    def add(self, e, k, c):
        row = self.data.get(e)
        if row is None:
            row = self.data[e] = [Fraction(0)] * self.N
        row[k % self.N] += c

    def series(self, order, extra=()):
        terms = {}
        for e, row in self.data.items():
            terms[e] = Cyc(self.N, row)
        out = PSeries(terms, order)
        for e, c in extra:
            out = out + PSeries({e: c}, order)
        return out


def appell_A(ell: int, u=(0, 0), v=(0, 0), mult: int = 1, order=10, deriv: int = 0,
             exclude=()) -> PSeries:
    """Expansion of A_ell(u, v; mult*tau) with u = alpha tau + beta, v = gamma tau + delta.

    ``deriv=1`` applies (1/2 pi i) d/du.  Indices n in ``exclude`` are dropped
    from the bilateral sum (used to remove the pole at u = 0).
    """
    alpha, beta = Fraction(u[0]), Fraction(u[1])
    gam, dlt = Fraction(v[0]), Fraction(v[1])
    half = Fraction(ell, 2)
    order = Fraction(order)
    N = _lcm(2, dlt.denominator, 2 * beta.denominator)
    acc = _Acc(N)
    consts = []

    def base(n):
        return mult * ell * Fraction(n * (n + 1), 2) + gam * n + alpha * half

    def lower(n):
        E = alpha + mult * n
        return base(n) + (-E if E < 0 else 0)

    # quadratic in n with positive leading coefficient; vertex near the minimum
    vertex = -(Fraction(mult * ell, 2) + gam) / (mult * ell)
    n0 = floor(vertex)
    for direction in (1, -1):
        n = n0 if direction == 1 else n0 - 1
        while True:
            past = (n - vertex) * direction >= 0
            if past and lower(n) >= order:
                break
            if n not in exclude and lower(n) < order:
                E = alpha + mult * n
                # fixed phase (-1)^{ell n} e^{2 pi i delta n}
                ph = Fraction(ell * n, 2) + dlt * n
                b0 = base(n)
                if E > 0:
                    m = 0
                    while b0 + m * E < order:
                        w = half + m
                        k = (ph + beta * w) * N
                        acc.add(b0 + m * E, int(k), w if deriv else Fraction(1))
                        m += 1
                elif E < 0:
                    m = 1
                    while b0 - m * E < order:
                        w = half - m
                        k = (ph + beta * w) * N
                        acc.add(b0 - m * E, int(k), -(w if deriv else Fraction(1)))
                        m += 1
                else:
                    if beta.denominator == 1:
                        raise DegeneratePole(f"1 - a q^{n} vanishes (u on the lattice)")
                    z = root_of_unity(beta)
                    pre = root_of_unity(ph + beta * half)
                    if deriv:
                        val = pre * (half / (1 - z) + z / ((1 - z) * (1 - z)))
                    else:
                        val = pre / (1 - z)
                    consts.append((b0, val))
            n += direction
    return acc.series(order, consts)


# --- cusp expansions -------------------------------------------------------------

def cusp_constant(ell: int, x, gamma: MatSL2) -> Cyc | Fraction:
    """The constant C of the holomorphic part (zero unless c x is an integer)."""
    x = Fraction(x)
    cx, dx = gamma.c * x, gamma.d * x
    if cx.denominator != 1:
        return Fraction(0)
    w = root_of_unity(dx / 2)  # e^{pi i d x}
    wi = w.inverse()
    odd = ell % 2 == 1
    sgn = 1 - 2 * (int(cx) % 2)
    num = (1 - int(odd)) + (int(odd) * sgn) * (w + wi) / 2
    return num / ((w - wi) * (w - wi))


def _cusp_terms(ell, x, gamma, order, which):
    """Shared summand (-1)^{ell n} e^{2 pi i (m-M) d x} (m-M) q^{(ell/2)(n+cx)^2 + (n+cx)(m-M)}."""
    x = Fraction(x)
    order = Fraction(order)
    cx, dx = gamma.c * x, gamma.d * x
    half = Fraction(ell, 2)
    M = ell * cx + half
    N = _lcm(dx.denominator, (M * dx).denominator, 2)
    acc = _Acc(N)

    def put(n, m, sign):
        uu = n + cx
        vv = m - M
        e = half * uu * uu + uu * vv
        k = (vv * dx + Fraction(ell * n, 2)) * N
        acc.add(e, int(k), sign * vv)

    if which == "h1":
        # n > -cx, m >= M
        n = floor(-cx) + 1
        while half * (n + cx) ** 2 < order:
            m = ceil(M)
            while half * (n + cx) ** 2 + (n + cx) * (m - M) < order:
                put(n, m, 1)
                m += 1
            n += 1
        # n < -cx, m < M
        n = ceil(-cx) - 1
        while half * (n + cx) ** 2 < order:
            m = ceil(M) - 1
            while half * (n + cx) ** 2 + (n + cx) * (m - M) < order:
                put(n, m, -1)
                m -= 1
            n -= 1
    else:  # S3: all n, 1 <= m < M
        for m in range(1, ceil(M)):
            vv = m - M
            # exponent (ell/2) uu^2 + uu vv is a convex quadratic in uu
            top = (-vv + math.sqrt(float(vv * vv + 2 * half * order))) / float(half) + 2
            lo = floor(-cx - top) - 1
            hi = ceil(-cx + top) + 1
            for n in range(lo, hi + 1):
                uu = n + cx
                if half * uu * uu + uu * vv < order:
                    put(n, m, 1)
    return acc


def h1_at_cusp(pt: AppellPoint, gamma: MatSL2, order) -> PSeries:
    """Holomorphic part of (1/2 pi i) e^{-pi i ell c d x^2} dA_hat_ell(-x)|_2 gamma."""
    if gamma.c < 0:
        raise ValueError("h1_at_cusp requires c >= 0")
    acc = _cusp_terms(pt.ell, pt.x, gamma, order, "h1")
    C = cusp_constant(pt.ell, pt.x, gamma)
    extra = [] if C == 0 else [(Fraction(0), C)]
    return acc.series(Fraction(order), extra)


def s3_series(pt: AppellPoint, gamma: MatSL2, order) -> PSeries:
    """Theta-type sum over all n and 1 <= m < M separating H_1 from the A-part."""
    return _cusp_terms(pt.ell, pt.x, gamma, order, "s3").series(Fraction(order))


def dA_identity_via_cusp(ell: int, x, order) -> PSeries:
    """(1/2 pi i) d/du A_ell(u - x) at u = 0 from the cusp expansion at the identity.

    The holomorphic part of the completed function differs from the
    holomorphic Appell sum by the S3 theta series; adding it back recovers
    the Appell sum.
    """
    pt = AppellPoint(ell, x)
    return h1_at_cusp(pt, identity, order) + s3_series(pt, identity, order)


def _ord_formula(ell, cxv, M):
    f = ceil(-cxv) + cxv
    g = ceil(M) - M
    half = Fraction(ell, 2)
    if (ell + 1) * f + g > half + 1:
        return half * (f - 1) ** 2 + (f - 1) * (g - 1)
    return half * f ** 2 + f * g


def ord_dAhat(pt: AppellPoint, gamma: MatSL2) -> Fraction:
    """Order at infinity of dA_hat_ell(-x)|_2 gamma (two-case formula)."""
    cx = gamma.c * pt.x
    if cx.denominator == 1:
        return Fraction(0)
    return _ord_formula(pt.ell, cx, pt.ell * cx + Fraction(pt.ell, 2))


def ord_glx(ell: int, x, k: int, a: int, c: int) -> Fraction:
    """Order at the cusp a/c of g_{ell,x}(k tau)."""
    x = Fraction(x)
    if (k * x).denominator != 1:
        raise ValueError("k x must be an integer")
    if gcd(a, c) != 1:
        raise ValueError("a and c must be coprime")
    g = gcd(k * a, c)
    c1 = k * a // g
    cx = c1 * x
    pref = Fraction(g * g, k)
    if cx.denominator == 1:
        return Fraction(0)
    return pref * _ord_formula(ell, cx, ell * cx + Fraction(ell, 2))


def _r_holomorphic(lam, mu, mult, order, nu_weight=False):
    """Holomorphic part of R(lam tau' + mu; tau'), tau' = mult tau (a finite sum)."""
    out = PSeries({}, order)
    lo = min(Fraction(0), -lam)
    hi = max(Fraction(0), -lam)
    k = floor(lo - Fraction(1, 2))
    while True:
        nu = Fraction(2 * k + 1, 2)
        if nu > hi + 1:
            break
        sg = (nu > 0) - (nu < 0)
        s2 = (nu + lam > 0) - (nu + lam < 0)
        if sg != s2:
            coeff = root_of_unity(-nu * mu) * ((sg - s2) * (1 - 2 * (int(nu - Fraction(1, 2)) % 2)))
            if nu_weight:
                coeff = coeff * (-nu)
            out = out + PSeries({mult * (-nu * nu / 2 - lam * nu): coeff}, order)
        k += 1
    return out


def glx_holomorphic(ell: int, x, order) -> PSeries:
    """Holomorphic part of (1/2 pi i) g_{ell,x}, built from A at u = x tau plus the
    holomorphic pieces of the completion.  Independent of the cusp formula."""
    from .qseries import theta_expand
    x = Fraction(x)
    order = Fraction(order)
    pad = order + Fraction(ell, 2) * x * x + 2
    A0 = appell_A(ell, (x, 0), order=pad)
    A1 = appell_A(ell, (x, 0), order=pad, deriv=1)
    corr0 = PSeries({}, pad)
    corr1 = PSeries({}, pad)
    i_half = root_of_unity(Fraction(1, 4)) / 2
    for m in range(ell):
        th = theta_expand(Fraction(m, ell), Fraction(ell - 1, 2), ell, pad + 4)
        # e^{2 pi i m u} at u = x tau is q^{m x}; R argument ell u - m tau - (ell-1)/2 on tau' = ell tau
        lam = (ell * x - m) / ell
        mu = -Fraction(ell - 1, 2)
        R0 = _r_holomorphic(lam, mu, ell, pad + 4)
        R1 = _r_holomorphic(lam, mu, ell, pad + 4, nu_weight=True)
        base = (th * R0).shift(m * x) * i_half
        corr0 = corr0 + base
        # (1/2 pi i) d/du: m from e^{2 pi i m u}, ell * (-nu) from R
        corr1 = corr1 + base * m + (th * R1).shift(m * x) * i_half * ell
    hol = (A1 + corr1) - (A0 + corr0) * (ell * x)
    return hol.shift(-Fraction(ell, 2) * x * x).truncate(order)


# --- L_p(v) --------------------------------------------------------------------

def _s_p(p):
    return Fraction(p * p - 1, 24)


def _lp_sums(p, v, order, square):
    """sum_n (-1)^n q^{3pn(n+1)/2} / (1 - q^{pn+v})^{1 or 2} (v != 0 mod p, or n != 0)."""
    terms = {}
    n = 0
    for direction in (1, -1):
        n = 0 if direction == 1 else -1
        while True:
            b = 3 * p * n * (n + 1) // 2
            E = p * n + v
            low = b + (-E if E < 0 else 0) * (2 if square else 1)
            if low >= order and n * direction >= 0:
                if (n >= 0 and direction == 1) or (n < 0 and direction == -1):
                    break
            if E == 0:
                n += direction
                continue
            sgn = -1 if n % 2 else 1
            if E > 0:
                m = 0
                while b + m * E < order:
                    terms[b + m * E] = terms.get(b + m * E, 0) + sgn * ((m + 1) if square else 1)
                    m += 1
            else:
                e = -E
                # 1/(1-q^{-e}) = -q^e/(1-q^e);  1/(1-q^{-e})^2 = q^{2e}/(1-q^e)^2
                m = 0
                start = 2 * e if square else e
                while b + start + m * e < order:
                    terms[b + start + m * e] = terms.get(b + start + m * e, 0) + sgn * ((m + 1) if square else -1)
                    m += 1
            n += direction
    return PSeries(terms, order)


def Lp_series(p: int, v: int, order) -> PSeries:
    """L_p(v; q) from its explicit series (variable q, not q^p)."""
    order = Fraction(order)
    if not 0 <= v < p:
        raise ValueError("need 0 <= v < p")
    top = ceil(order) + 1
    inv = pochhammer(p, p, top).invert()
    if v == 0:
        sig = PSeries({p * n: sum(d for d in range(1, n + 1) if n % d == 0)
                       for n in range(1, top // p + 2)}, top)
        inner = _lp_sums(p, 0, top, True) + sig * 3 - Fraction(1, 12)
        return (inv * inner * p).truncate(order)
    sign = -1 if v % 2 else 1
    main = (_lp_sums(p, v, top, True) * p + _lp_sums(p, v, top, False) * (Fraction(p, 2) - 3 * v))
    out = inv * main * sign
    if 6 * v < p:
        out = out + PSeries({-v: sign * Fraction(p - 6 * v, 2)})
    elif 6 * v > 5 * p:
        out = out + PSeries({v - p: sign * Fraction(5 * p - 6 * v, 2)})
    return out.truncate(order)


def Lp_appell_series(p: int, v: int, order) -> PSeries:
    """The Appell-side object whose sum with the constant eps_p(v) gives
    q^{c + k/p} L_p(v): built from A_3(u + v tau; p tau) and its u-derivative."""
    order = Fraction(order)
    sp = _s_p(p)
    inv = pochhammer(p, p, order + 10).invert()
    if v == 0:
        lead = -sp / p
        pad = order - lead + 1
        dA = appell_A(3, (0, 0), mult=p, order=pad, deriv=1, exclude=(0,))
        inner = dA - e2_expand(pad).scale_exponents(p) / 8 - Fraction(11, 24)
        return (inv * inner * p).shift(lead).truncate(order)
    lead = Fraction(-3 * v * v - 2 * sp, 2 * p)
    pad = order - lead + 1
    dA = appell_A(3, (v, 0), mult=p, order=pad, deriv=1)
    A = appell_A(3, (v, 0), mult=p, order=pad)
    inner = (dA * p - A * (3 * v)).to_rational()
    return (inv * inner * (1 - 2 * (v % 2))).shift(lead).truncate(order)


def eps_term(p: int, v: int) -> PSeries:
    """The constant monomial eps_p(v) relating the two forms of L_p(v)."""
    sp = _s_p(p)
    sign = -1 if v % 2 else 1
    if 6 * v < p:
        return PSeries({Fraction(v * (p - 3 * v) - 2 * sp, 2 * p): sign * Fraction(p - 6 * v, 2)})
    if 6 * v > 5 * p:
        return PSeries({Fraction((p - v) * (3 * v - 2 * p) - 2 * sp, 2 * p): sign * Fraction(5 * p - 6 * v, 2)})
    return PSeries({})


# --- F_{p,s} -------------------------------------------------------------------

def _twisted_sum(p, s, ell, order, via_cusp=False):
    total = None
    for j in range(1, p):
        x = Fraction(j, p)
        dA = dA_identity_via_cusp(ell, x, order) if via_cusp else \
            appell_A(ell, (0, -x), order=order, deriv=1)
        w = zeta_pow(2 * p, j * (2 * s - 1)) * (1 - zeta_pow(p, j))
        term = dA * w
        total = term if total is None else total + term
    return total.to_rational()


def Fps_series(p: int, s: int, order, via_cusp: bool = False) -> PSeries:
    """The level-3 Appell part of the NT difference generating function."""
    if not 0 < 2 * s < p:
        raise ValueError("need 0 < s < p/2")
    order = Fraction(order)
    tw = _twisted_sum(p, s, 3, order, via_cusp)
    out = tw * pochhammer(1, 1, order).invert() / p
    if s == 1:
        out = out + Fraction(1, 2)
    return out


def Fps_crank_series(p: int, s: int, order, via_cusp: bool = False) -> PSeries:
    """The level-1 Appell part of the M_omega difference generating function."""
    if not 0 < 2 * s < p:
        raise ValueError("need 0 < s < p/2")
    order = Fraction(order)
    tw = _twisted_sum(p, s, 1, order, via_cusp)
    return tw * pochhammer(1, 1, order).invert() / p


def unit_sum(p: int, s: int) -> Fraction:
    """sum_{j=1}^{p-1} zeta_p^{j(s-1)} (1 - zeta_p^j), exactly."""
    tot = Cyc(p, [0])
    for j in range(1, p):
        tot = tot + zeta_pow(p, j * (s - 1)) * (1 - zeta_pow(p, j))
    return cyc_to_rat(tot)


def g_sum(p: int, k: int) -> Fraction:
    """sum_{j=1}^{p-1} zeta_p^{jk} / (1 - zeta_p^j), exactly."""
    tot = Cyc(p, [0])
    for j in range(1, p):
        tot = tot + zeta_pow(p, j * k) / (1 - zeta_pow(p, j))
    return cyc_to_rat(tot)
