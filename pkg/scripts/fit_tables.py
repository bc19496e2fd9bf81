"""Recompute every t-polynomial from scratch and compare with the shipped tables.

Usage: python3 scripts/fit_tables.py [--primes 5 7]
"""
from __future__ import annotations

import argparse
import time
from math import floor

from qrank.config import FitConfig
from qrank.theorems import Mp_series, Np_series, load_identities, modularize, t_poly_fit


def fmt(poly):
    return " + ".join(f"({a})t^{j}" for j, a in sorted(poly.items())) or "0"


def run(cfg: FitConfig) -> int:
    mismatches = 0
    for rec in load_identities():
        if rec.kind not in ("N", "M") or rec.p not in cfg.primes:
            continue
        t0 = time.perf_counter()
        top = floor(rec.check_bound) + 1 + cfg.extra
        fn = Np_series if rec.kind == "N" else Mp_series
        f = modularize(fn(rec.p, rec.s, rec.k, top + 1), rec.p, rec.k)
        fit = t_poly_fit(f, rec.p, cfg.lo, cfg.hi, bound=top)
        same = fit == {j: a for j, a in rec.rhs_poly.items() if a}
        mismatches += not same
        tag = "ok " if same else "DIFF"
        print(f"{tag} {rec.id:<8} {time.perf_counter() - t0:5.1f}s  fit: {fmt(fit)}")
        if not same:
            print(f"     {'':<8}        table: {fmt(rec.rhs_poly)}")
    print(f"{mismatches} row(s) differ from the table")
    return 1 if mismatches else 0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 7])
    ap.add_argument("--extra", type=int, default=3)
    ns = ap.parse_args()
    raise SystemExit(run(FitConfig(primes=tuple(ns.primes), extra=ns.extra)))


if __name__ == "__main__":
    main()
