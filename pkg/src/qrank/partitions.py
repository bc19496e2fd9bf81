"""Rank, crank, NT and M_omega tables.

Two independent oracles fill a :class:`StatTables`:

* ``"enumeration"`` walks every partition (fine up to n = 100 in principle,
  practical up to ~60);
* ``"gf-dp"`` sums the Durfee-square generating function for the rank
  (with a parts-counting refinement for NT) and a ones-split generating
  function for the crank (weighted by the number of ones for M_omega).

Counts are combinatorial: the single partition of 1 has crank -1.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np

from .qseries import PSeries, jtriple, mocktheta_g, pochhammer, qpow

__all__ = ["ResourceLimit", "StatTables", "stat_tables", "pn", "rank", "crank",
           "d_series", "nt_diff_series", "mw_diff_series", "partitions_of",
           "ORACLE_LIMITS", "d_closed_form", "CLOSED_FORMS"]

ORACLE_LIMITS = {"enumeration": 100, "gf-dp": 5000}
STATS = ("N", "NT", "M", "Mw")


class ResourceLimit(RuntimeError):
    """Requested table exceeds the oracle's size guard."""


def rank(parts) -> int:
    """Largest part minus number of parts (0 for the empty partition)."""
    return (max(parts) - len(parts)) if parts else 0


def crank(parts) -> int:
    """Crank of a partition; 0 for the empty partition."""
    if not parts:
        return 0
    ones = sum(1 for x in parts if x == 1)
    if ones == 0:
        return max(parts)
    return sum(1 for x in parts if x > ones) - ones


def partitions_of(n: int):
    """Partitions of n as weakly decreasing tuples."""
    if n == 0:
        yield ()
        return

    def rec(rem, cap):
        if rem == 0:
            yield ()
            return
        for first in range(min(rem, cap), 0, -1):
            for rest in rec(rem - first, first):
                yield (first,) + rest

    yield from rec(n, n)


@lru_cache(maxsize=None)
def _pn_list(n_max: int) -> tuple:
    p = [0] * (n_max + 1)
    p[0] = 1
    for n in range(1, n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return tuple(p)


def pn(n: int) -> int:
    """Number of partitions of n (Euler's pentagonal recurrence).

    >>> [pn(n) for n in range(8)]
    [1, 1, 2, 3, 5, 7, 11, 15]
    """
    if n < 0:
        return 0
    return _pn_list(max(n, 16))[n]


@dataclass
class StatTables:
    """``counts[stat][r][n]`` for residue r mod ``modulus`` and 0 <= n <= n_max."""

    modulus: int
    n_max: int
    oracle: str
    counts: dict = field(default_factory=dict)

    def get(self, stat: str, r: int, n: int) -> int:
        if not 0 <= n <= self.n_max:
            raise ResourceLimit(f"n={n} outside table range 0..{self.n_max}")
        return self.counts[stat][r % self.modulus][n]

    def N(self, r, n):
        return self.get("N", r, n)

    def NT(self, r, n):
        return self.get("NT", r, n)

    def M(self, r, n):
        return self.get("M", r, n)

    def Mw(self, r, n):
        return self.get("Mw", r, n)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stat", "modulus", "residue", "n", "count"])
        for stat in STATS:
            for r in range(self.modulus):
                for n in range(self.n_max + 1):
                    w.writerow([stat, self.modulus, r, n, self.counts[stat][r][n]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, oracle: str = "csv") -> "StatTables":
        rows = list(csv.DictReader(io.StringIO(text)))
        m = int(rows[0]["modulus"])
        n_max = max(int(r["n"]) for r in rows)
        counts = {s: [[0] * (n_max + 1) for _ in range(m)] for s in STATS}
        for r in rows:
            counts[r["stat"]][int(r["residue"])][int(r["n"])] = int(r["count"])
        return cls(m, n_max, oracle, counts)


# --- enumeration oracle -----------------------------------------------------

@lru_cache(maxsize=4)
def _enumerate_raw(n_max: int):
    """Full (unreduced) rank/crank distributions for n <= n_max.

    Returns dicts keyed by (n, statistic value) -> [count, weight].
    """
    rk, ck = {}, {}
    rk[(0, 0)] = [1, 0]
    ck[(0, 0)] = [1, 0]
    for n in range(1, n_max + 1):
        # ZS1 (reverse lexicographic) generation; x[1..m] is the partition,
        # x[h] is its last part larger than 1
        x = [1] * (n + 2)
        x[1] = n
        m = 1
        h = 1 if n > 1 else 0
        while True:
            ones = m - h
            key = (n, x[1] - m)
            e = rk.get(key)
            if e is None:
                rk[key] = [1, m]
            else:
                e[0] += 1
                e[1] += m
            if ones == 0:
                c = x[1]
            else:
                lo, hi = 1, h + 1  # count of x[1..h] greater than ones
                while lo < hi:
                    mid = (lo + hi) // 2
                    if x[mid] > ones:
                        lo = mid + 1
                    else:
                        hi = mid
                c = (lo - 1) - ones
            key = (n, c)
            e = ck.get(key)
            if e is None:
                ck[key] = [1, ones]
            else:
                e[0] += 1
                e[1] += ones
            if x[1] == 1:
                break
            if x[h] == 2:
                m += 1
                x[h] = 1
                h -= 1
            else:
                r = x[h] - 1
                t = m - h + 1
                x[h] = r
                while t >= r:
                    h += 1
                    x[h] = r
                    t -= r
                if t == 0:
                    m = h
                else:
                    m = h + 1
                    if t > 1:
                        h += 1
                        x[h] = t
    return rk, ck


def _tables_enumeration(mod: int, n_max: int) -> dict:
    rk, ck = _enumerate_raw(n_max)
    out = {s: [[0] * (n_max + 1) for _ in range(mod)] for s in STATS}
    for (n, v), (c, w) in rk.items():
        if n <= n_max:
            out["N"][v % mod][n] += c
            out["NT"][v % mod][n] += w
    for (n, v), (c, w) in ck.items():
        if n <= n_max:
            out["M"][v % mod][n] += c
            out["Mw"][v % mod][n] += w
    return out


# --- generating-function oracle ---------------------------------------------

def _dtype(n_max):
    # NT(r, m, n) <= n p(n) stays below 2^63 comfortably for n <= 250
    return np.int64 if n_max <= 250 else object


def _inv_poch_rows(N, dtype):
    """rows[t] = coefficients of 1/(q; q)_t up to q^N."""
    rows = [np.zeros(N + 1, dtype=dtype)]
    rows[0][0] = 1
    cur = rows[0].copy()
    for t in range(1, N + 1):
        cur = cur.copy()
        for n in range(t, N + 1):
            cur[n] += cur[n - t]
        rows.append(cur)
    return rows


def _tables_gf(mod: int, N: int) -> dict:
    dt = _dtype(N)
    cnt = np.zeros((mod, N + 1), dtype=dt)
    nt = np.zeros((mod, N + 1), dtype=dt)
    cnt[0][0] = 1  # empty partition
    # rank: sum_d q^{d^2} / ((z q; q)_d (z^-1 y q; q)_d); y marks rows below the square
    for d in range(1, isqrt(N) + 1):
        A = np.zeros((N + 1, mod), dtype=dt)
        A[d * d, 0] = 1
        B = np.zeros((N + 1, mod), dtype=dt)
        Bw = np.zeros((N + 1, mod), dtype=dt)
        B[0, 0] = 1
        for j in range(1, d + 1):
            for n in range(j, N + 1):
                A[n] += np.roll(A[n - j], 1)
                Bw[n] += np.roll(Bw[n - j] + B[n - j], -1)
                B[n] += np.roll(B[n - j], -1)
        for r1 in range(mod):
            a = A[:, r1]
            if not a.any():
                continue
            for r2 in range(mod):
                r = (r1 + r2) % mod
                cnt[r] += np.convolve(a, B[:, r2])[: N + 1]
                nt[r] += np.convolve(a, Bw[:, r2] + d * B[:, r2])[: N + 1]
    # crank: omega ones, t parts above omega, the rest in [2, omega]
    P = _inv_poch_rows(N, dt)
    Q = [None] + [np.concatenate(([P[w][0]], P[w][1:] - P[w][:-1])) for w in range(1, N + 1)]
    mc = np.zeros((mod, N + 1), dtype=dt)
    mw = np.zeros((mod, N + 1), dtype=dt)
    mc[0][0] = 1
    for L in range(2, N + 1):  # no ones: crank is the largest part
        mc[L % mod][L:] += Q[L][: N + 1 - L]
    for w in range(1, N + 1):
        t = 0
        while w + (w + 1) * t <= N:
            s = w + (w + 1) * t
            series = np.convolve(P[t][: N + 1 - s], Q[w][: N + 1 - s])[: N + 1 - s]
            r = (t - w) % mod
            mc[r][s:] += series
            mw[r][s:] += w * series
            t += 1
    conv = lambda arr: [[int(v) for v in row] for row in arr]
    return {"N": conv(cnt), "NT": conv(nt), "M": conv(mc), "Mw": conv(mw)}


_CACHE: dict = {}


def stat_tables(m: int, n_max: int, oracle: str = "gf-dp") -> StatTables:
    """Rank/crank tables mod m for 0 <= n <= n_max."""
    if oracle not in ORACLE_LIMITS:
        raise ValueError(f"unknown oracle {oracle!r}")
    if n_max > ORACLE_LIMITS[oracle]:
        raise ResourceLimit(f"oracle {oracle} is limited to n <= {ORACLE_LIMITS[oracle]}")
    if m < 1 or n_max < 0:
        raise ValueError("modulus must be positive and n_max nonnegative")
    for (mm, nn, oo), tab in list(_CACHE.items()):
        if mm == m and oo == oracle and nn >= n_max:
            return tab if nn == n_max else _restrict(tab, n_max)
    counts = _tables_enumeration(m, n_max) if oracle == "enumeration" else _tables_gf(m, n_max)
    tab = StatTables(m, n_max, oracle, counts)
    _CACHE[(m, n_max, oracle)] = tab
    return tab


def _restrict(tab: StatTables, n_max: int) -> StatTables:
    return StatTables(tab.modulus, n_max, tab.oracle,
                      {s: [row[: n_max + 1] for row in rows] for s, rows in tab.counts.items()})


# --- derived series ------------------------------------------------------------

def _crank_count(tab, r, n, gf_convention):
    c = tab.M(r, n)
    if gf_convention and n == 1:
        # generating-function convention: coefficient of q in the crank product
        m = tab.modulus
        c = (-1 if r % m == 0 else 0) + (1 if r % m == 1 % m else 0) + (1 if r % m == (-1) % m else 0)
    return c


def d_series(a: int, M: int, order: int, stat: str = "rank", gf_crank: bool = True) -> PSeries:
    """sum_{n < order} (N(a, M, n) - p(n)/M) q^n, or the crank analogue.

    With ``gf_crank`` the crank counts at n = 1 follow the generating-function
    convention M(0,1) = -1, M(+-1,1) = 1 instead of the combinatorial one.
    """
    tab = stat_tables(M, max(order - 1, 0))
    terms = {}
    for n in range(order):
        if stat == "rank":
            c = tab.N(a, n)
        elif stat == "crank":
            c = _crank_count(tab, a, n, gf_crank)
        else:
            raise ValueError("stat must be 'rank' or 'crank'")
        terms[n] = Fraction(c) - Fraction(pn(n), M)
    return PSeries(terms, order)


def nt_diff_series(s: int, p: int, order: int) -> PSeries:
    """sum_n (NT(s, p, n) - NT(p - s, p, n)) q^n."""
    tab = stat_tables(p, max(order - 1, 0))
    return PSeries({n: tab.NT(s, n) - tab.NT(p - s, n) for n in range(order)}, order)


def mw_diff_series(s: int, p: int, order: int) -> PSeries:
    """sum_n (M_omega(s, p, n) - M_omega(p - s, p, n)) q^n."""
    tab = stat_tables(p, max(order - 1, 0))
    return PSeries({n: tab.Mw(s, n) - tab.Mw(p - s, n) for n in range(order)}, order)


# --- closed forms for D(a, M) and D_C(a, M), M = 5, 7 -----------------------------
#
# Each entry: (constant, [(coeff, q-shift, g_a, g_b)], basis coefficients).
# The theta-quotient basis is listed in _basis.  D(a) = D(M - a).

_F = Fraction
CLOSED_FORMS = {
    ("rank", 5, 0): (0, [(-2, 5, 5, 25)], (_F(4, 5), _F(4, 5), _F(-2, 5), _F(2, 5))),
    ("rank", 5, 1): (0, [(1, 5, 5, 25), (-1, 8, 10, 25)], (_F(-1, 5), _F(-1, 5), _F(3, 5), _F(-3, 5))),
    ("rank", 5, 2): (0, [(1, 8, 10, 25)], (_F(-1, 5), _F(-1, 5), _F(-2, 5), _F(2, 5))),
    ("crank", 5, 0): (0, [], (_F(4, 5), _F(-6, 5), _F(-2, 5), _F(2, 5))),
    ("crank", 5, 1): (0, [], (_F(-1, 5), _F(4, 5), _F(-2, 5), _F(-3, 5))),
    ("crank", 5, 2): (0, [], (_F(-1, 5), _F(-1, 5), _F(3, 5), _F(2, 5))),
    ("rank", 7, 0): (2, [(2, 7, 7, 49)],
                     (_F(-8, 7), _F(6, 7), _F(-2, 7), _F(4, 7), _F(2, 7), _F(-4, 7))),
    ("rank", 7, 1): (-1, [(-1, 7, 7, 49), (1, 16, 21, 49)],
                     (_F(6, 7), _F(-1, 7), _F(5, 7), _F(-3, 7), _F(2, 7), _F(3, 7))),
    ("rank", 7, 2): (0, [(1, 13, 14, 49), (-1, 16, 21, 49)],
                     (_F(-1, 7), _F(-1, 7), _F(-2, 7), _F(4, 7), _F(-5, 7), _F(3, 7))),
    ("rank", 7, 3): (0, [(-1, 13, 14, 49)],
                     (_F(-1, 7), _F(-1, 7), _F(-2, 7), _F(-3, 7), _F(2, 7), _F(-4, 7))),
    ("crank", 7, 0): (0, [], (_F(6, 7), _F(-8, 7), _F(-2, 7), _F(4, 7), _F(2, 7), _F(-4, 7))),
    ("crank", 7, 1): (0, [], (_F(-1, 7), _F(6, 7), _F(-2, 7), _F(-3, 7), _F(-5, 7), _F(3, 7))),
    ("crank", 7, 2): (0, [], (_F(-1, 7), _F(-1, 7), _F(5, 7), _F(-3, 7), _F(2, 7), _F(-4, 7))),
    ("crank", 7, 3): (0, [], (_F(-1, 7), _F(-1, 7), _F(-2, 7), _F(4, 7), _F(2, 7), _F(3, 7))),
}


def _basis(M: int, order: int) -> list:
    J = lambda k: pochhammer(k, k, order)
    Jt = lambda a: jtriple(M * M, a, order)
    if M == 5:
        J5, J25 = J(5), J(25)
        return [J5 * J25 ** 3 * (Jt(5) ** 3).invert(),
                qpow(1) * J25 ** 2 * Jt(5).invert(),
                qpow(2) * J25 ** 2 * Jt(10).invert(),
                qpow(3) * J5 * J25 ** 3 * (Jt(10) ** 3).invert()]
    J7inv, J49 = J(7).invert(), J(49)
    return [Jt(21) ** 2 * J7inv,
            qpow(1) * J49 ** 2 * Jt(7).invert(),
            qpow(2) * Jt(14) ** 2 * J7inv,
            qpow(3) * J49 ** 2 * Jt(14).invert(),
            qpow(4) * J49 ** 2 * Jt(21).invert(),
            qpow(6) * Jt(7) ** 2 * J7inv]


def d_closed_form(a: int, M: int, order: int, stat: str = "rank") -> PSeries:
    """Mock theta and theta-quotient expression for D(a, M) or D_C(a, M), M in {5, 7}."""
    a %= M
    key = (stat, M, min(a, M - a))
    if key not in CLOSED_FORMS:
        raise ValueError(f"no closed form for stat={stat!r}, M={M}")
    c0, gs, coeffs = CLOSED_FORMS[key]
    out = PSeries({0: c0}, order)
    for c, sh, ga, gb in gs:
        out = out + mocktheta_g(ga, gb, order).shift(sh) * c
    for c, f in zip(coeffs, _basis(M, order)):
        out = out + f * c
    return out.truncate(order)
