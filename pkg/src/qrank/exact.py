"""Exact rationals and cyclotomic numbers.

Rationals are plain :class:`fractions.Fraction`.  An element of the
cyclotomic field Q(zeta_n) is a :class:`Cyc`: a vector of phi(n) rational
coefficients in the power basis 1, zeta_n, ..., zeta_n^(phi(n)-1), always
reduced modulo the n-th cyclotomic polynomial.  Mixed-conductor arithmetic
embeds both operands into Q(zeta_lcm).

>>> z = zeta_pow(4, 1)
>>> z * z == -1
True
>>> zeta_pow(3, 1) + zeta_pow(3, 2) == -1
True
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

Rat = Fraction

__all__ = ["Rat", "Cyc", "NotRational", "zeta_pow", "cyc_to_rat", "kronecker",
           "cyclotomic_poly", "as_cyc", "is_zero"]


class NotRational(ValueError):
    """A cyclotomic number was expected to be rational but is not."""


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (low degree first) of the n-th cyclotomic polynomial.

    >>> cyclotomic_poly(6)
    (1, -1, 1)
    """
    if n < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_div(num, den):
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return q


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Reductions of x^i mod Phi_n for 0 <= i < max(n, 2 phi(n))."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    if deg:
        cur[0] = 1
    else:  # pragma: no cover - deg >= 1 always
        pass
    for _ in range(max(n, 2 * deg)):
        rows.append(tuple(cur))
        # multiply by x
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _reduce(n: int, poly) -> tuple:
    """Reduce a polynomial in zeta_n (list of coefficients, any length)."""
    table = _power_table(n)
    deg = len(cyclotomic_poly(n)) - 1
    out = [Fraction(0)] * deg
    for i, c in enumerate(poly):
        if not c:
            continue
        row = table[i % n]
        for j, r in enumerate(row):
            if r:
                out[j] += c * r
    return tuple(out)


def as_cyc(x, n: int = 1) -> "Cyc":
    if isinstance(x, Cyc):
        return x
    return Cyc(n, [Fraction(x)])


class Cyc:
    """An element of Q(zeta_n).

    >>> Cyc(8, [0, 1]) ** 8 == 1
    True
    >>> (1 / (1 - zeta_pow(5, 1))) * (1 - zeta_pow(5, 1)) == 1
    True
    """

    __slots__ = ("n", "c")
    __hash__ = None

    def __init__(self, n: int, coeffs=()):
        self.n = n
        self.c = _reduce(n, [Fraction(v) for v in coeffs])

    @classmethod
    def _raw(cls, n, c):
        obj = object.__new__(cls)
        obj.n = n
        obj.c = c
        return obj

    # embedding ---------------------------------------------------------
    def embed(self, m: int) -> "Cyc":
        """Image of self in Q(zeta_m); m must be a multiple of the conductor."""
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"cannot embed Q(zeta_{self.n}) into Q(zeta_{m})")
        f = m // self.n
        poly = [Fraction(0)] * (f * len(self.c))
        for i, v in enumerate(self.c):
            poly[i * f] = v
        return Cyc._raw(m, _reduce(m, poly))

    @staticmethod
    def _common(a, b):
        if not isinstance(b, Cyc):
            if isinstance(b, (int, Rational)):
                b = Cyc._raw(a.n, _reduce(a.n, [Fraction(b)]))
            else:
                return None, None
        if a.n == b.n:
            return a, b
        m = _lcm(a.n, b.n)
        return a.embed(m), b.embed(m)

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        a, b = Cyc._common(self, other)
        if a is None:
            return NotImplemented
        return Cyc._raw(a.n, tuple(x + y for x, y in zip(a.c, b.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc._raw(self.n, tuple(-x for x in self.c))

    def __sub__(self, other):
        a, b = Cyc._common(self, other)
        if a is None:
            return NotImplemented
        return Cyc._raw(a.n, tuple(x - y for x, y in zip(a.c, b.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Cyc):
            o = Fraction(other)
            return Cyc._raw(self.n, tuple(x * o for x in self.c))
        a, b = Cyc._common(self, other)
        if a is None:
            return NotImplemented
        deg = len(a.c)
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] += x * y
        return Cyc._raw(a.n, _reduce(a.n, prod))

    __rmul__ = __mul__

    def inverse(self) -> "Cyc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        phi = [Fraction(v) for v in cyclotomic_poly(self.n)]
        s = _poly_inverse_mod(list(self.c), phi)
        return Cyc._raw(self.n, _reduce(self.n, s))

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Cyc):
            o = Fraction(other)
            return Cyc._raw(self.n, tuple(x / o for x in self.c))
        if not isinstance(other, Cyc):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyc._raw(self.n, _reduce(self.n, [Fraction(1)]))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "Cyc":
        """Complex conjugate (zeta -> zeta^-1)."""
        poly = [Fraction(0)] * self.n
        for i, v in enumerate(self.c):
            poly[(-i) % self.n] += v
        return Cyc._raw(self.n, _reduce(self.n, poly))

    # predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        a, b = Cyc._common(self, other)
        if a is None:
            return NotImplemented
        return a.c == b.c

    def __complex__(self):
        import cmath
        w = cmath.exp(2j * cmath.pi / self.n)
        return complex(sum(float(v) * w ** i for i, v in enumerate(self.c)))

    def __repr__(self):
        return f"Cyc({self.n}, [{', '.join(str(v) for v in self.c)}])"

    def dump(self) -> str:
        """Serialisation used by the series dump format: ``[c0,c1,...]@n``."""
        return "[" + ",".join(str(v) for v in self.c) + f"]@{self.n}"


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] / b[-1]
        q[i] = c
        if c:
            for j, d in enumerate(b):
                a[i + j] -= c * d
    return q, _poly_trim(a[: len(b) - 1])


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _poly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                       for i in range(n)])


def _poly_inverse_mod(a, m):
    """s with s*a = 1 mod m, via the extended Euclidean algorithm over Q."""
    r0, r1 = _poly_trim(list(m)), _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    c = r1[0]
    return [v / c for v in s1]


def zeta_pow(n: int, k: int) -> Cyc:
    """zeta_n ** k as an element of Q(zeta_n)."""
    poly = [Fraction(0)] * n
    poly[k % n] = Fraction(1)
    return Cyc._raw(n, _reduce(n, poly))


def root_of_unity(r: Fraction) -> Cyc:
    """exp(2 pi i r) for rational r, in the smallest cyclotomic field."""
    r = Fraction(r)
    return zeta_pow(r.denominator, r.numerator)


def cyc_to_rat(x) -> Fraction:
    """Collapse a cyclotomic number known to be rational.

    >>> cyc_to_rat(zeta_pow(5, 1) + zeta_pow(5, 4) + zeta_pow(5, 2) + zeta_pow(5, 3))
    Fraction(-1, 1)
    """
    if not isinstance(x, Cyc):
        return Fraction(x)
    if not x.is_rational():
        raise NotRational(repr(x))
    return x.c[0]


def is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, Cyc) else x == 0


def kronecker(a: int, b: int) -> int:
    """Kronecker symbol (a/b), extending Jacobi to all integers b.

    >>> kronecker(3, 5), kronecker(2, 7), kronecker(1, 7), kronecker(0, 1)
    (-1, 1, 1, 1)
    """
    if b == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if b < 0:
        b = -b
        if a < 0:
            result = -result
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    a %= b
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0
