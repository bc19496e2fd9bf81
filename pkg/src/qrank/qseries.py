"""Truncated Puiseux series in q with exact coefficients.

A :class:`PSeries` is a finite map ``exponent -> coefficient`` together with
a bound ``trunc``: every coefficient with exponent below ``trunc`` is known
exactly, nothing is claimed at or above it.  Exponents are Fractions and
coefficients are Fractions or :class:`~qrank.exact.Cyc` numbers.  Exact
(finite) objects carry ``trunc = inf``.

The module also builds the standard objects the rest of the package needs:
Pochhammer symbols, Dedekind and generalized eta quotients, the Jacobi
theta function, E_2 and the universal mock theta function g.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .exact import Cyc, cyc_to_rat, is_zero, root_of_unity, zeta_pow

INF = math.inf

__all__ = ["PSeries", "EtaSpec", "NotInvertible", "TruncationEmpty", "VanishingFactor",
           "DegenerateDenominator", "pochhammer", "eta_expand", "geta_expand",
           "theta_expand", "theta_expand_sum", "e2_expand", "mocktheta_g", "jprod",
           "jtriple", "qpow", "const", "dump_series", "load_series", "P2"]


class NotInvertible(ArithmeticError):
    """Series has no known nonzero leading coefficient."""


class TruncationEmpty(ArithmeticError):
    """An operation would produce a series with no guaranteed coefficient."""


class VanishingFactor(ArithmeticError):
    """A Pochhammer factor (1 - q^0) occurred."""


class DegenerateDenominator(ArithmeticError):
    """A denominator of the mock theta function g vanishes identically."""


def _F(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class PSeries:
    """Truncated series ``sum c_e q^e + O(q^trunc)``.

    >>> s = PSeries({0: 1, 1: -1}, 5)
    >>> (1 / s).coeffs()
    [(Fraction(0, 1), Fraction(1, 1)), (Fraction(1, 1), Fraction(1, 1)), (Fraction(2, 1), Fraction(1, 1)), (Fraction(3, 1), Fraction(1, 1)), (Fraction(4, 1), Fraction(1, 1))]
    """

    __slots__ = ("terms", "trunc")

    def __init__(self, terms=None, trunc=INF):
        self.trunc = trunc if trunc == INF else _F(trunc)
        t = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                e = _F(e)
                if e >= self.trunc or is_zero(c):
                    continue
                if isinstance(c, int):
                    c = Fraction(c)
                if e in t:
                    c = t[e] + c
                    if is_zero(c):
                        del t[e]
                        continue
                t[e] = c
        self.terms = t

    @classmethod
    def _raw(cls, terms, trunc):
        obj = object.__new__(cls)
        obj.terms = terms
        obj.trunc = trunc
        return obj

    # inspection --------------------------------------------------------
    def coeff(self, e) -> object:
        e = _F(e)
        if e >= self.trunc:
            raise TruncationEmpty(f"coefficient of q^{e} is beyond the truncation {self.trunc}")
        return self.terms.get(e, Fraction(0))

    def coeffs(self):
        return sorted(self.terms.items())

    def exponents(self):
        return sorted(self.terms)

    def valuation(self):
        """Smallest exponent with nonzero coefficient (trunc if none known)."""
        return min(self.terms) if self.terms else self.trunc

    def is_exact(self) -> bool:
        return self.trunc == INF

    def denom(self) -> int:
        d = 1
        for e in self.terms:
            d = d * e.denominator // math.gcd(d, e.denominator)
        return d

    def truncate(self, trunc) -> "PSeries":
        trunc = _F(trunc) if trunc != INF else INF
        if trunc > self.trunc:
            raise TruncationEmpty(f"cannot extend truncation {self.trunc} to {trunc}")
        return PSeries._raw({e: c for e, c in self.terms.items() if e < trunc}, trunc)

    def map_coeffs(self, f) -> "PSeries":
        out = {}
        for e, c in self.terms.items():
            v = f(c)
            if not is_zero(v):
                out[e] = v
        return PSeries._raw(out, self.trunc)

    def to_rational(self) -> "PSeries":
        """Collapse cyclotomic coefficients (raises NotRational if impossible)."""
        return self.map_coeffs(cyc_to_rat)

    def equal_upto(self, other: "PSeries", bound) -> bool:
        """True if both series agree on every exponent below ``bound``."""
        bound = _F(bound)
        if bound > self.trunc or bound > other.trunc:
            raise TruncationEmpty(f"comparison bound {bound} exceeds a truncation")
        for e in set(self.terms) | set(other.terms):
            if e < bound:
                a = self.terms.get(e, 0)
                b = other.terms.get(e, 0)
                if not is_zero(a - b):
                    return False
        return True

    def first_difference(self, other: "PSeries", bound):
        """Smallest exponent below ``bound`` where the two differ, else None."""
        diff = self - other
        if _F(bound) > diff.trunc:
            raise TruncationEmpty(f"comparison bound {bound} exceeds truncation {diff.trunc}")
        bad = [e for e in diff.exponents() if e < bound]
        return bad[0] if bad else None

    # arithmetic --------------------------------------------------------
    @staticmethod
    def _lift(x):
        if isinstance(x, PSeries):
            return x
        return PSeries._raw({} if is_zero(x) else {Fraction(0): x if isinstance(x, Cyc) else _F(x)}, INF)

    def __add__(self, other):
        other = PSeries._lift(other)
        trunc = min(self.trunc, other.trunc)
        out = {e: c for e, c in self.terms.items() if e < trunc}
        for e, c in other.terms.items():
            if e >= trunc:
                continue
            if e in out:
                v = out[e] + c
                if is_zero(v):
                    del out[e]
                else:
                    out[e] = v
            else:
                out[e] = c
        return PSeries._raw(out, trunc)

    __radd__ = __add__

    def __neg__(self):
        return PSeries._raw({e: -c for e, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-PSeries._lift(other))

    def __rsub__(self, other):
        return PSeries._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, PSeries):
            if is_zero(other):
                return PSeries._raw({}, self.trunc)
            o = other if isinstance(other, Cyc) else _F(other)
            return self.map_coeffs(lambda c: c * o)
        va, vb = self.valuation(), other.valuation()
        trunc = min(self.trunc + vb, other.trunc + va)
        if trunc == -INF:
            raise TruncationEmpty("product has no guaranteed coefficient")
        if not self.terms or not other.terms:
            return PSeries._raw({}, trunc)
        a = sorted(self.terms.items())
        b = sorted(other.terms.items())
        out = {}
        for ea, ca in a:
            lim = trunc - ea
            for eb, cb in b:
                if eb >= lim:
                    break
                e = ea + eb
                v = ca * cb
                if e in out:
                    out[e] = out[e] + v
                else:
                    out[e] = v
        return PSeries._raw({e: c for e, c in out.items() if not is_zero(c)}, trunc)

    __rmul__ = __mul__

    def invert(self) -> "PSeries":
        if not self.terms:
            raise NotInvertible("series has no known nonzero term")
        v = self.valuation()
        lead = self.terms[v]
        if self.trunc == INF and len(self.terms) == 1:
            return PSeries._raw({-v: 1 / lead}, INF)
        if self.trunc == INF:
            raise NotInvertible("inverse of an exact polynomial needs a truncation; call with_trunc first")
        rel = self.trunc - v
        inv_lead = 1 / lead
        # unit part u = self / (lead q^v) = 1 + sum_{d>0} u_d q^d
        u = sorted(((e - v, c * inv_lead) for e, c in self.terms.items() if e != v))
        out = {Fraction(0): Fraction(1)}
        order = [Fraction(0)]
        # exponents of the inverse lie in the additive monoid generated by u's exponents
        grid = _monoid_grid([d for d, _ in u], rel)
        for e in grid:
            if e == 0:
                continue
            acc = 0
            for d, c in u:
                if d > e:
                    break
                prev = out.get(e - d)
                if prev is not None:
                    acc = acc - c * prev
            if not is_zero(acc):
                out[e] = acc
            order.append(e)
        res = {e - v: c * inv_lead for e, c in out.items() if not is_zero(c)}
        return PSeries._raw(res, rel - v)

    def with_trunc(self, trunc) -> "PSeries":
        """Regard an exact series as known only below ``trunc``."""
        trunc = _F(trunc)
        return PSeries._raw({e: c for e, c in self.terms.items() if e < trunc}, min(self.trunc, trunc))

    def __truediv__(self, other):
        if isinstance(other, PSeries):
            return self * other.invert()
        o = other if isinstance(other, Cyc) else _F(other)
        return self.map_coeffs(lambda c: c / o)

    def __rtruediv__(self, other):
        return PSeries._lift(other) * self.invert()

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        result = PSeries._raw({Fraction(0): Fraction(1)}, INF)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale_exponents(self, m) -> "PSeries":
        """Substitute q -> q^m (m a positive rational)."""
        m = _F(m)
        if m <= 0:
            if m < 0 and self.trunc == INF:
                return PSeries._raw({e * m: c for e, c in self.terms.items()}, INF)
            raise ValueError("exponent scale must be positive for truncated series")
        return PSeries._raw({e * m: c for e, c in self.terms.items()},
                            self.trunc * m if self.trunc != INF else INF)

    def shift(self, alpha) -> "PSeries":
        """Multiply by q^alpha."""
        alpha = _F(alpha)
        return PSeries._raw({e + alpha: c for e, c in self.terms.items()},
                            self.trunc + alpha if self.trunc != INF else INF)

    def qd_dq(self) -> "PSeries":
        """Apply q d/dq."""
        return PSeries._raw({e: c * e for e, c in self.terms.items() if e != 0}, self.trunc)

    def dissect(self, p: int, k: int) -> "PSeries":
        """sum_n a(p n + k) q^n over integer exponents p n + k."""
        out = {}
        for e, c in self.terms.items():
            if e.denominator == 1 and (e.numerator - k) % p == 0:
                out[(e - k) / p] = c
        trunc = (self.trunc - k) / p if self.trunc != INF else INF
        if trunc != INF:
            trunc = Fraction(math.ceil(trunc))
        return PSeries._raw(out, trunc)

    def __repr__(self):
        parts = [f"{c}*q^{e}" for e, c in self.coeffs()[:8]]
        more = " + ..." if len(self.terms) > 8 else ""
        return "PSeries(" + " + ".join(parts) + more + f" + O(q^{self.trunc}))"


def _monoid_grid(gens, bound):
    """Sorted elements below ``bound`` of the monoid generated by ``gens``."""
    gens = sorted(set(g for g in gens if g > 0))
    if not gens:
        return [Fraction(0)]
    den = 1
    for g in gens:
        den = den * g.denominator // math.gcd(den, g.denominator)
    ig = [int(g * den) for g in gens]
    B = bound * den
    top = math.ceil(B) if B != INF else None
    g0 = ig[0]
    for g in ig[1:]:
        g0 = math.gcd(g0, g)
    return [Fraction(i, den) for i in range(0, top, g0)]


def const(c, trunc=INF) -> PSeries:
    return PSeries({0: c}, trunc)


def qpow(e, c=1) -> PSeries:
    """Exact monomial c q^e."""
    return PSeries({_F(e): c})


# ---------------------------------------------------------------------------
# standard products

def _prod_factors(factors, order) -> PSeries:
    """prod (1 - c q^e) over ``factors``, complete below ``order``.

    Nonpositive exponents must all be listed; positive ones may stop once
    e >= order - (sum of negative exponents).
    """
    neg = sum((e for e, _ in factors if e < 0), Fraction(0))
    work = order - neg
    terms = {Fraction(0): Fraction(1)}
    for e, c in sorted(factors, key=lambda f: -f[0]):
        if e < 0:
            continue
        if e == 0 and c == 1:
            raise VanishingFactor("factor (1 - q^0)")
        new = dict(terms)
        for t, v in terms.items():
            u = t + e
            if u >= work:
                continue
            w = -c * v
            if u in new:
                w = new[u] + w
                if is_zero(w):
                    del new[u]
                    continue
            new[u] = w
        terms = new
    res = PSeries._raw(terms, work if work != INF else INF)
    for e, c in factors:
        if e < 0:
            res = res * PSeries({0: 1, e: -c})
    return res.truncate(order) if order != INF else res


def pochhammer(a_exp, step, order, count=None, coeff=1) -> PSeries:
    """(coeff q^a; q^step)_count, infinite when count is None, known below ``order``.

    >>> pochhammer(1, 1, 6).coeffs()[:4]
    [(Fraction(0, 1), Fraction(1, 1)), (Fraction(1, 1), Fraction(-1, 1)), (Fraction(2, 1), Fraction(-1, 1)), (Fraction(5, 1), Fraction(1, 1))]
    """
    a, step = _F(a_exp), _F(step)
    order = order if order == INF else _F(order)
    if step <= 0:
        raise ValueError("step must be positive")
    if count is not None and count < 0:
        raise ValueError("negative Pochhammer length")
    if count is None and order == INF:
        raise ValueError("an infinite product needs a finite order")
    neg = Fraction(0)
    i = 0
    while (count is None or i < count) and a + i * step < 0:
        neg += a + i * step
        i += 1
    factors = []
    i = 0
    while count is None or i < count:
        e = a + i * step
        if e > 0 and e >= order - neg:
            break
        factors.append((e, coeff))
        i += 1
    return _prod_factors(factors, order)


def P2(x) -> Fraction:
    """Second Bernoulli polynomial x^2 - x + 1/6."""
    x = _F(x)
    return x * x - x + Fraction(1, 6)


def jprod(k: int, a: int, order) -> PSeries:
    """(q^a, q^(k-a); q^k)_inf for 0 < a < k."""
    return pochhammer(a, k, order) * pochhammer(k - a, k, order)


def jtriple(k: int, a: int, order) -> PSeries:
    """J_{k,a} = (q^a, q^(k-a), q^k; q^k)_inf."""
    return jprod(k, a, order) * pochhammer(k, k, order)


def geta_expand(p: int, delta: int, order) -> PSeries:
    """Generalized eta function eta_{p,delta}, for any delta not divisible by p.

    eta_{p,delta} = q^{(p/2) P2(delta/p)} prod_{n = delta, p - delta (mod p)} (1 - q^n)
    with n running upward from delta and from p - delta respectively.
    """
    if delta % p == 0:
        raise ValueError("delta must not be divisible by p")
    order = _F(order)
    lead = Fraction(p, 2) * P2(Fraction(delta, p))
    inner = order - lead
    if inner <= 0:
        return PSeries._raw({}, order)
    starts = (delta, p - delta)
    neg = sum((Fraction(n) for st in starts for n in range(st, 0, p)), Fraction(0))
    factors = []
    for st in starts:
        n = st
        while n < inner - neg or n <= 0:
            factors.append((Fraction(n), 1))
            n += p
    return _prod_factors(factors, inner).shift(lead)


@dataclass(frozen=True)
class EtaSpec:
    """q^e0 * scale * prod eta(m tau)^r * prod eta_{p,delta}(tau)^s.

    ``classic`` holds pairs (m, r); ``generalized`` holds triples
    (p, delta, s) with 0 < delta < p.
    """

    e0: Fraction = Fraction(0)
    classic: tuple = ()
    generalized: tuple = ()
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "e0", _F(self.e0))
        object.__setattr__(self, "scale", _F(self.scale))
        object.__setattr__(self, "classic", tuple((int(m), int(r)) for m, r in self.classic))
        gen = []
        for p, d, s in self.generalized:
            if not 0 < d < p:
                raise ValueError(f"generalized eta index {d} outside (0, {p}); use normalized()")
            gen.append((int(p), int(d), int(s)))
        object.__setattr__(self, "generalized", tuple(gen))

    @staticmethod
    def normalized(e0=0, classic=(), generalized=(), scale=1) -> "EtaSpec":
        """Build a spec, folding delta into (0, p) with eta_{p,d+p} = -eta_{p,d}
        and eta_{p,-d} = eta_{p,p-d}... via the sign rule."""
        scale = _F(scale)
        gen = []
        for p, d, s in generalized:
            if d % p == 0:
                raise ValueError("delta divisible by p")
            shifts = (d - d % p) // p
            if (shifts * s) % 2:
                scale = -scale
            gen.append((p, d % p, s))
        return EtaSpec(e0, classic, tuple(gen), scale)

    def leading_exponent(self) -> Fraction:
        e = self.e0
        for m, r in self.classic:
            e += Fraction(m * r, 24)
        for p, d, s in self.generalized:
            e += s * Fraction(p, 2) * P2(Fraction(d, p))
        return e

    def __mul__(self, other: "EtaSpec") -> "EtaSpec":
        return EtaSpec(self.e0 + other.e0, _merge(self.classic + other.classic),
                       _merge3(self.generalized + other.generalized), self.scale * other.scale)

    def __pow__(self, k: int) -> "EtaSpec":
        return EtaSpec(self.e0 * k, tuple((m, r * k) for m, r in self.classic),
                       tuple((p, d, s * k) for p, d, s in self.generalized), self.scale ** k)

    def inverse(self) -> "EtaSpec":
        return self ** -1


def _merge(pairs):
    acc = {}
    for m, r in pairs:
        acc[m] = acc.get(m, 0) + r
    return tuple((m, r) for m, r in sorted(acc.items()) if r)


def _merge3(triples):
    acc = {}
    for p, d, s in triples:
        d = min(d, p - d)
        acc[(p, d)] = acc.get((p, d), 0) + s
    return tuple((p, d, s) for (p, d), s in sorted(acc.items()) if s)


def eta_expand(spec: EtaSpec, order) -> PSeries:
    """Expand an eta quotient, complete below ``order``.

    >>> eta_expand(EtaSpec(generalized=((5, 1, 1),)), 3).valuation()
    Fraction(1, 60)
    """
    order = _F(order)
    lead = spec.leading_exponent()
    inner = order - lead
    res = PSeries._raw({Fraction(0): spec.scale}, INF)
    if inner <= 0:
        return PSeries._raw({}, order)
    for m, r in spec.classic:
        base = pochhammer(m, m, inner)
        res = res * (base ** r if r > 0 else base.invert() ** (-r))
    for p, d, s in spec.generalized:
        base = jprod(p, d, inner)
        res = res * (base ** s if s > 0 else base.invert() ** (-s))
    return res.truncate(min(res.trunc, inner)).shift(lead)


def theta_expand(r, s, mult, order) -> PSeries:
    """Jacobi theta(z; tau') with z = r tau' + s and tau' = mult tau, product form.

    Coefficients are cyclotomic.  Complete below ``order`` (in powers of q).
    """
    r, s, mult, order = _F(r), _F(s), _F(mult), _F(order)
    w, wi = root_of_unity(s), root_of_unity(-s)
    lead = mult / 8 - mult * r / 2
    pref = root_of_unity(Fraction(-1, 4)) * root_of_unity(-s / 2)
    inner = order - lead
    if inner <= 0:
        return PSeries._raw({}, order)
    # factors (1 - q'^n), (1 - w q'^{r+n-1}), (1 - w^-1 q'^{n-r})
    neg = Fraction(0)
    n = 1
    while mult * (r + n - 1) < 0 or mult * (n - r) < 0:
        neg += min(mult * (r + n - 1), 0) + min(mult * (n - r), 0)
        n += 1
    factors = []
    n = 1
    while True:
        trio = ((mult * n, 1), (mult * (r + n - 1), w), (mult * (n - r), wi))
        if all(e > 0 and e >= inner - neg for e, _ in trio):
            break
        for e, c in trio:
            if e == 0 and c == 1:
                return PSeries._raw({}, order)
            if e <= 0 or e < inner - neg:
                factors.append((e, c))
        n += 1
    return (_prod_factors(factors, inner) * pref).shift(lead)


def theta_expand_sum(r, s, mult, order) -> PSeries:
    """theta(r tau' + s; tau') from the defining sum over half-integers."""
    r, s, mult, order = _F(r), _F(s), _F(mult), _F(order)
    terms = {}
    # exponent mult (nu^2 / 2 + nu r); phase e^{2 pi i nu (s + 1/2)}
    center = -r
    k0 = math.floor(center - Fraction(1, 2))
    for direction in (1, -1):
        k = k0 if direction == 1 else k0 - 1
        while True:
            nu = Fraction(2 * k + 1, 2)
            e = mult * (nu * nu / 2 + nu * r)
            if e >= order and (nu - center) * direction > 0:
                break
            if e < order:
                c = root_of_unity(nu * (s + Fraction(1, 2)))
                terms[e] = terms[e] + c if e in terms else c
            k += direction
    return PSeries(terms, order)


def e2_expand(order) -> PSeries:
    """Eisenstein series E_2 = 1 - 24 sum sigma(n) q^n."""
    order = _F(order)
    N = math.ceil(order)
    sig = [0] * max(N, 1)
    for d in range(1, N):
        for m in range(d, N, d):
            sig[m] += d
    return PSeries({n: (1 if n == 0 else -24 * sig[n]) for n in range(N)}, order)


def mocktheta_g(a, b, order) -> PSeries:
    """Universal mock theta function g(q^a, q^b).

    g(x, q) = x^-1 (-1 + sum_n q^{n^2} / ((x; q)_{n+1} (q/x; q)_n)).
    """
    a, b, order = _F(a), _F(b), _F(order)
    if a % b == 0:
        raise DegenerateDenominator(f"g(q^{a}, q^{b}) has a vanishing denominator")
    if not 0 < a < b:
        raise ValueError("expected 0 < a < b")
    inner = order + a
    total = PSeries._raw({}, inner)
    den = PSeries({0: 1, a: -1}).with_trunc(inner)  # (x; q)_1 (q/x; q)_0
    n = 0
    while b * n * n < inner:
        total = total + den.invert().shift(b * n * n).truncate(inner)
        n += 1
        den = den * PSeries({0: 1, a + b * n: -1}) * PSeries({0: 1, b * n - a: -1})
    return (total - 1).shift(-a)


# ---------------------------------------------------------------------------
# text serialisation

def _fmt_coeff(c) -> str:
    return c.dump() if isinstance(c, Cyc) else str(c)


def dump_series(s: PSeries) -> str:
    """``exponent<TAB>coefficient`` lines, then a ``# trunc`` line."""
    lines = [f"{e}\t{_fmt_coeff(c)}" for e, c in s.coeffs()]
    lines.append(f"# trunc\t{s.trunc}")
    return "\n".join(lines) + "\n"


def load_series(text: str) -> PSeries:
    terms = {}
    trunc = INF
    for line in text.splitlines():
        if not line.strip():
            continue
        left, right = line.split("\t")
        if left == "# trunc":
            trunc = INF if right == "inf" else Fraction(right)
            continue
        if right.startswith("["):
            body, n = right.rsplit("@", 1)
            vals = [Fraction(v) for v in body[1:-1].split(",") if v]
            coeff = Cyc(int(n), vals)
        else:
            coeff = Fraction(right)
        terms[Fraction(left)] = coeff
    return PSeries(terms, trunc)
