"""Worst residuals of the analytic transformation laws over random samples."""
from __future__ import annotations

import argparse
import cmath
import math

import numpy as np

from qrank.modular import chi_eta
from qrank.numeric import appell_hat_num, eta_num, random_sl2, rel_residual, to_complex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=5)
    ns = ap.parse_args()
    rng = np.random.default_rng(ns.seed)
    appell = eta = 0.0
    done = 0
    while done < ns.samples:
        g = random_sl2(rng, cmax=8)
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.5))
        if g.act(tau).imag < 0.15:
            continue
        ell = int(rng.choice([1, 2, 3]))
        u = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3) * tau.imag)
        j = g.c * tau + g.d
        lhs = appell_hat_num(ell, u / j, g.act(tau))
        rhs = j * cmath.exp(-1j * math.pi * g.c * ell * u * u / j) * appell_hat_num(ell, u, tau)
        appell = max(appell, rel_residual(lhs, rhs))
        eta = max(eta, rel_residual(eta_num(g.act(tau)), to_complex(chi_eta(g)) * j ** 0.5 * eta_num(tau)))
        done += 1
    print(f"{done} samples: completed Appell law {appell:.2e}, eta multiplier {eta:.2e}")


if __name__ == "__main__":
    main()
