"""Run configurations shared by the CLI and the scripts."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class VerifyConfig:
    db: str | None = None            # None: $QRANK_DB or the shipped tables
    p: int | None = None
    ids: tuple[str, ...] = ()
    jobs: int = 1
    max_n: int = 1000                # largest partition size we are willing to tabulate
    errata: bool = False             # use recorded corrections instead of printed values
    paths: tuple[str, ...] = ("combinatorial", "modular")


@dataclass(frozen=True)
class ScanConfig:
    preset: str | None = None
    stat: str = "NT"
    p: int | None = None
    k: int | None = None
    weights: str | None = None       # "r:w,r:w,..."
    modulus: int = 0
    n_max: int = 12
    max_n: int = 1000
    oracle: str = "gf-dp"


@dataclass(frozen=True)
class FitConfig:
    primes: tuple[int, ...] = (5, 7)
    lo: int = -2
    hi: int = 4
    extra: int = 3                   # coefficients past the valence bound used as a sanity margin


@dataclass(frozen=True)
class SurveyConfig:
    seed: int = 1
    samples: int = 600
    levels: tuple[int, ...] = (1, 3)
    max_den: int = 12
    cmax: int = 12
    show: int = field(default=5)     # how many degenerate examples to print
