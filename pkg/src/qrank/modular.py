"""Cusps of Gamma_1(p), orders and multipliers of eta objects, the U_{p,k}
operators, and the valence-formula check bound."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .appell import MatSL2
from .exact import Cyc, kronecker, root_of_unity, zeta_pow
from .qseries import EtaSpec, PSeries

__all__ = ["CuspClass", "DivisorLedger", "ExponentDomain", "NotInGroup", "cusp_set", "cusp_rep",
           "cusp_equiv", "width", "bernoulli_bar", "ord_geta", "ord_eta_scaled", "eta_div_ledger",
           "chi_eta", "chi_geta", "Upk", "Upk_prime", "Upk_average", "Upk_prime_average",
           "valence_bound", "rv_condition", "s_p"]


class ExponentDomain(ValueError):
    """Series exponents outside the lattice an operator is defined on."""


class NotInGroup(ValueError):
    """Matrix fails the Gamma_1(p) congruence conditions."""


def s_p(p: int) -> Fraction:
    return Fraction(p * p - 1, 24)


def width(p: int, c: int) -> int:
    return p // gcd(c, p)


@dataclass(frozen=True)
class CuspClass:
    p: int
    a: int
    c: int

    @property
    def width(self) -> int:
        return width(self.p, self.c)

    def __str__(self):
        return f"{self.a}/{self.c}"


def cusp_set(p: int) -> list[CuspClass]:
    """Representatives p/c and a/p, 1 <= a, c <= (p-1)/2."""
    h = (p - 1) // 2
    return [CuspClass(p, p, c) for c in range(1, h + 1)] + [CuspClass(p, a, p) for a in range(1, h + 1)]


def cusp_equiv(p: int, a1: int, c1: int, a2: int, c2: int) -> bool:
    """Same Gamma_1(p) cusp; i-infinity is a/c = 1/0."""
    if gcd(a1, c1) != 1 or gcd(a2, c2) != 1:
        raise ValueError("cusp representatives must be reduced")
    g = gcd(p, c1)
    for eps in (1, -1):
        if (c1 - eps * c2) % p == 0 and (a1 - eps * a2) % g == 0:
            return True
    return False


def cusp_rep(p: int, a: int, c: int) -> CuspClass:
    """The member of cusp_set(p) equivalent to a/c."""
    for cc in cusp_set(p):
        if cusp_equiv(p, a, c, cc.a, cc.c):
            return cc
    raise ValueError(f"{a}/{c} matched no representative")


# --- orders ---------------------------------------------------------------------

def bernoulli_bar(x) -> Fraction:
    x = Fraction(x)
    f = x - (x.numerator // x.denominator)
    return f * f - f + Fraction(1, 6)


def ord_geta(p: int, delta: int, a: int, c: int) -> Fraction:
    """Order of eta_{p,delta} at a/c in the parameter q."""
    if delta % p == 0:
        raise ValueError("delta divisible by p")
    g = gcd(p, c)
    return Fraction(g * g, 2 * p) * bernoulli_bar(Fraction(a * delta, g))


def ord_eta_scaled(m: int, a: int, c: int) -> Fraction:
    """Order of eta(m tau) at a/c."""
    g = gcd(m, c)
    return Fraction(g * g, 24 * m)


@dataclass
class DivisorLedger:
    p: int
    values: dict = field(default_factory=dict)
    interior: Fraction = Fraction(0)

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0)) + self.interior

    def __getitem__(self, key):
        if isinstance(key, tuple):
            key = CuspClass(self.p, *key)
        return self.values[key]


def eta_div_ledger(spec: EtaSpec, p: int) -> DivisorLedger:
    """Cusp divisors of an eta quotient on Gamma_1(p).

    Eta quotients never vanish on the upper half plane, so the interior part
    is zero.  A leftover q-power is rejected since it is not modular.
    """
    if spec.e0 != 0:
        raise ValueError("spec carries a bare q-power; fold it into the eta factors first")
    out = DivisorLedger(p)
    for cc in cusp_set(p):
        o = Fraction(0)
        for m, r in spec.classic:
            o += r * ord_eta_scaled(m, cc.a, cc.c)
        for pp, d, s in spec.generalized:
            if pp != p:
                raise ValueError(f"generalized factor of level {pp} on Gamma_1({p})")
            o += s * ord_geta(p, d, cc.a, cc.c)
        out.values[cc] = cc.width * o
    return out


# --- multipliers --------------------------------------------------------------

def _petersson(a, b, c, d) -> Cyc:
    if c % 2:
        sign = kronecker(d, c)
        e = (a + d - 3) * c - b * d * (c * c - 1)
    else:
        sign = kronecker(c, d)
        e = (a - 2 * d) * c - b * d * (c * c - 1) + 3 * d - 3
    return zeta_pow(24, e) * sign


def chi_eta(g: MatSL2) -> Cyc:
    """eta(g tau) = chi_eta(g) (c tau + d)^{1/2} eta(tau), principal square root."""
    a, b, c, d = g.a, g.b, g.c, g.d
    if c > 0:
        return _petersson(a, b, c, d)
    if c < 0:
        # (-(c tau + d))^{1/2} = i (c tau + d)^{1/2} when c tau + d lies below the axis
        return _petersson(-a, -b, -c, -d) * zeta_pow(24, 6)
    if d == 1:
        return zeta_pow(24, b)
    return zeta_pow(24, -b - 6)


def chi_geta(p: int, delta: int, g: MatSL2) -> Cyc:
    """eta_{p,delta}(g tau) / eta_{p,delta}(tau) for g in Gamma_1(p)."""
    a, b, c, d = g.a, g.b, g.c, g.d
    if c % p or (a - 1) % p or (d - 1) % p:
        raise NotInGroup(f"{g} is not in Gamma_1({p})")
    base = chi_eta(MatSL2(a, p * b, c // p, d))
    sign = 1 - 2 * (((a - 1) // p * delta + b * delta) % 2)
    return base * base * root_of_unity(Fraction(a * b * delta * delta, 2 * p)) * sign


# --- dissection operators -----------------------------------------------------

def Upk(f: PSeries, p: int, k: int) -> PSeries:
    """Keep exponents congruent to k mod p and divide them by p."""
    if any(e.denominator != 1 for e in f.terms):
        raise ExponentDomain("U_{p,k} needs integer exponents")
    return f.dissect(p, k).shift(Fraction(k, p))


def Upk_prime(f: PSeries, p: int, k: int) -> PSeries:
    """Twisted dissection on series supported on (p-1)/24 + Z."""
    off = Fraction(p - 1, 24)
    if any((e - off).denominator != 1 for e in f.terms):
        raise ExponentDomain("U'_{p,k} needs exponents in (p-1)/24 + Z")
    g = PSeries._raw({e - off: c for e, c in f.terms.items()}, f.trunc - off)
    return Upk(g, p, k).shift(off / p)


def _average(f, p, k, off):
    terms = {}
    for e, c in f.terms.items():
        w = Cyc(1, [0])
        for m in range(p):
            w = w + root_of_unity(m * (e - off - k) / p)
        terms[e / p] = w * c / p
    return PSeries(terms, f.trunc / p)


def Upk_average(f: PSeries, p: int, k: int) -> PSeries:
    """(1/p) sum_m zeta_p^{-mk} f((tau+m)/p), term by term."""
    return _average(f, p, k, Fraction(0))


def Upk_prime_average(f: PSeries, p: int, k: int) -> PSeries:
    """(1/p) sum_m zeta_{24p}^{-m(p-1)} zeta_p^{-mk} f((tau+m)/p), term by term."""
    return _average(f, p, k, Fraction(p - 1, 24))


# --- valence bound ------------------------------------------------------------

def _e_lookup(e, p, a, c):
    if not e:
        return Fraction(0)
    for key in (CuspClass(p, a, c), (a, c), f"{a}/{c}"):
        if key in e:
            return Fraction(e[key])
    return Fraction(0)


def valence_bound(p: int, k: int, e=None) -> Fraction:
    """Largest n for which q^n coefficients must agree to prove f = fbar.

    ``e`` maps cusps p/c and a/p (a >= 2) to lower-bound magnitudes of the
    comparison function's divisors; missing cusps default to 0.
    """
    sp = s_p(p)
    h = (p - 1) // 2
    n1 = sum((max(sp, _e_lookup(e, p, p, c)) for c in range(1, h + 1)), Fraction(0))
    top = Fraction((k + sp + 3) * p, 8)
    n1 += sum((max(top, _e_lookup(e, p, a, p)) for a in range(2, h + 1)), Fraction(0))
    return n1


def rv_condition(p: int, k: int, r: dict) -> bool:
    """12 sum r_delta delta^2 == 1 - 24 k (mod p)."""
    return (12 * sum(v * d * d for d, v in r.items()) - (1 - 24 * k)) % p == 0
