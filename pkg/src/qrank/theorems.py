"""N_p(s,k) and M_p(s,k): assembly by two independent routes, the modular
prefactor, t-polynomial fitting, and the identity database."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from math import ceil, floor

from .appell import Fps_crank_series, Fps_series, Lp_appell_series, Lp_series, eps_term
from .exact import kronecker
from .modular import CuspClass, Upk, cusp_set, eta_div_ledger, rv_condition, s_p, valence_bound
from .partitions import d_series, mw_diff_series, nt_diff_series, stat_tables
from .qseries import EtaSpec, PSeries, eta_expand, jprod, jtriple, pochhammer

__all__ = ["CaseData", "case_select", "chi12", "v_index", "Np_series", "Mp_series", "modularize",
           "prefactor_spec", "t_spec", "t_series", "t_poly_eval", "t_poly_fit", "FitFailed",
           "IdentityRecord", "load_identities", "default_db_path", "verify_record", "VerifyResult",
           "modular_exponents", "weighted_scan", "ex1_lhs", "ex1_rhs", "ex1_rhs_derived",
           "one_minus_t_check", "EX1_J7_POWER_CORRECTED"]


def chi12(p: int) -> int:
    return kronecker(12, p)


def v_index(p: int, m: int) -> int:
    """0 <= v < p with 2m + 6v + 1 == 0 (mod p)."""
    return (-(2 * m + 1) * pow(6, -1, p)) % p


@dataclass(frozen=True)
class CaseData:
    p: int
    s: int
    k: int
    case: str  # "minus", "plus" or "neither"
    v: int | None
    chi12: int
    c_exponent: Fraction | None

    @property
    def sign(self) -> int:
        """Sign of the L_p term on the side of the NT sum."""
        return {"minus": 1, "plus": -1, "neither": 0}[self.case]


def case_select(p: int, s: int, k: int) -> CaseData:
    if not (0 < 2 * s < p and 0 <= k < p):
        raise ValueError("need 0 < s < p/2 and 0 <= k < p")
    minus = (6 * k + s * s - s) % p == 0
    plus = (6 * k + s * s + s) % p == 0
    if minus and plus:
        raise AssertionError("both congruences hold")
    x = chi12(p)
    if not (minus or plus):
        return CaseData(p, s, k, "neither", None, x, None)
    v = v_index(p, s - 1 if minus else s)
    c = Fraction(3 * v * (p - v), 2 * p) - (k + s_p(p)) / p
    return CaseData(p, s, k, "minus" if minus else "plus", v, x, c)


def _dsum(p, s, k, stat, order):
    top = p * order + k
    out = PSeries({}, order)
    for r in range(1, p):
        w = Fraction(p - 2 * r, 2 * p)
        out = out + d_series((r - s) % p, p, top, stat=stat).dissect(p, k) * w
    return out


def _lp_correction_explicit(cd: CaseData, order) -> PSeries:
    c = cd.c_exponent
    return Lp_series(cd.p, cd.v, order - c).shift(c)


def _lp_correction_appell(cd: CaseData, order) -> PSeries:
    sh = Fraction(cd.k, cd.p)
    body = Lp_appell_series(cd.p, cd.v, order + sh) + eps_term(cd.p, cd.v)
    return body.shift(-sh).truncate(order).to_rational()


def Np_series(p: int, s: int, k: int, order: int, path: str = "combinatorial") -> PSeries:
    """N_p(s,k), known for exponents below ``order``."""
    cd = case_select(p, s, k)
    top = p * order + k
    if path == "combinatorial":
        base = nt_diff_series(s, p, top).dissect(p, k) - _dsum(p, s, k, "rank", order)
        corr = _lp_correction_explicit(cd, order) if cd.sign else None
    elif path == "modular":
        base = Upk(Fps_series(p, s, top), p, k).shift(-Fraction(k, p))
        corr = _lp_correction_appell(cd, order) if cd.sign else None
    else:
        raise ValueError(f"unknown path {path!r}")
    if corr is not None:
        base = base - corr * (cd.sign * cd.chi12)
    return base.truncate(order)


def Mp_series(p: int, s: int, k: int, order: int, path: str = "combinatorial") -> PSeries:
    """M_p(s,k); crank counts at n = 1 follow the generating function."""
    case_select(p, s, k)
    top = p * order + k
    if path == "combinatorial":
        base = mw_diff_series(s, p, top).dissect(p, k) - _dsum(p, s, k, "crank", order)
    elif path == "modular":
        base = Upk(Fps_crank_series(p, s, top), p, k).shift(-Fraction(k, p))
    else:
        raise ValueError(f"unknown path {path!r}")
    return base.truncate(order)


# --- modular prefactor and t ------------------------------------------------------

def _jprod_spec(p, a, power):
    """(q^a, q^{p-a}; q^p)^power as an eta spec."""
    return EtaSpec(-power * Fraction(p, 2) * ((Fraction(a, p)) ** 2 - Fraction(a, p) + Fraction(1, 6)),
                   (), ((p, a, power),))


def _jp_spec(p, power):
    return EtaSpec(-Fraction(p * power, 24), ((p, power),))


def prefactor_spec(p: int, k: int) -> EtaSpec:
    """(q, q^{p-1}; q^p)^2 / (q (q^p; q^p)^3) * G_p^{k + s_p + 1}."""
    e = k + int(s_p(p)) + 1
    spec = _jprod_spec(p, 1, 2) * _jp_spec(p, -3) * EtaSpec(-1)
    spec = spec * _jprod_spec(p, (p - 1) // 2, e) * _jprod_spec(p, (p - 3) // 2, -e)
    return spec


def modularize(f: PSeries, p: int, k: int) -> PSeries:
    """Multiply by the prefactor that makes N_p(s,k) a Gamma_1(p) function."""
    need = f.trunc - 1 - min(f.valuation(), f.trunc) + 1
    pre = eta_expand(prefactor_spec(p, k), need)
    return f * pre


_T_GEN = {5: ((5, 1, 5), (5, 2, -5)), 7: ((7, 1, 3), (7, 2, -2), (7, 3, -1))}


def t_spec(p: int) -> EtaSpec:
    if p not in _T_GEN:
        raise ValueError(f"no t defined for p = {p}")
    return EtaSpec(0, (), _T_GEN[p])


def t_series(p: int, order) -> PSeries:
    return eta_expand(t_spec(p), order)


def t_poly_eval(poly: dict, p: int, order) -> PSeries:
    out = PSeries({}, order)
    for j, a in poly.items():
        if not a:
            continue
        term = eta_expand(t_spec(p) ** j, order) if j else PSeries({0: 1}, order)
        out = out + term * Fraction(a)
    return out


class FitFailed(ArithmeticError):
    def __init__(self, exponent, msg="t-polynomial fit leaves a nonzero residual"):
        super().__init__(f"{msg} at q^{exponent}")
        self.exponent = exponent


def _solve(rows, rhs):
    """Exact least-pivot elimination; free variables set to zero."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncol = len(rows[0]) if rows else 0
    piv = []
    r = 0
    for c in range(ncol):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    sol = [Fraction(0)] * ncol
    for i, c in enumerate(piv):
        sol[c] = m[i][-1]
    return sol


def t_poly_fit(f: PSeries, p: int, lo: int = -2, hi: int = 4, bound=None) -> dict:
    """Exact coefficients a_j, lo <= j <= hi, with f = sum a_j t^j below ``bound``."""
    bound = f.trunc if bound is None else Fraction(bound)
    if bound > f.trunc:
        raise ValueError("bound beyond the known coefficients of f")
    basis = {j: eta_expand(t_spec(p) ** j, bound) for j in range(lo, hi + 1)}
    lo_e = min([lo] + list(f.terms))
    exps = [Fraction(e) for e in range(floor(lo_e), ceil(bound))]
    rows = [[basis[j].coeff(e) for j in range(lo, hi + 1)] for e in exps]
    rhs = [Fraction(f.coeff(e)) for e in exps]
    sol = _solve(rows, rhs)
    poly = {j: a for j, a in zip(range(lo, hi + 1), sol) if a}
    diff = f.truncate(bound) - t_poly_eval(poly, p, bound)
    if diff.terms:
        raise FitFailed(diff.valuation())
    return poly


# --- identity database ------------------------------------------------------------

def modular_exponents(p: int, k: int) -> dict:
    """The r_delta exponents that make the generalized eta product modular."""
    e = k + int(s_p(p)) + 1
    if p == 5:
        return {1: 2 - e, 2: e}
    return {1: 2, (p - 1) // 2: e, (p - 3) // 2: -e}


def _e_values(p, poly):
    """Magnitude of the most negative cusp divisor of sum a_j t^j."""
    led = eta_div_ledger(t_spec(p), p)
    js = [j for j, a in poly.items() if a] or [0]
    return {cc: max(Fraction(0), -min(j * led.values[cc] for j in js)) for cc in cusp_set(p)}


@dataclass
class IdentityRecord:
    id: str
    kind: str  # "N", "M" or "ex1"
    p: int
    s: int = 0
    k: int = 0
    rhs_poly: dict = field(default_factory=dict)
    check_bound: Fraction = Fraction(0)
    note: str = ""
    erratum: dict | None = None  # corrected polynomial, when the printed one is known to be wrong

    @property
    def statistic(self) -> str:
        return {"N": "NT", "M": "Mw"}.get(self.kind, self.kind)

    @property
    def rhs_prefactor(self) -> EtaSpec:
        return prefactor_spec(self.p, self.k)

    @property
    def g_power(self) -> int:
        return self.k + int(s_p(self.p)) + 1


class ParseError(ValueError):
    pass


def default_db_path() -> str:
    env = os.environ.get("QRANK_DB")
    if env:
        return env
    return str(resources.files("qrank") / "data" / "identities.json")


def load_identities(path: str | None = None) -> list[IdentityRecord]:
    path = path or default_db_path()
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read identity database {path}: {exc}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("identities"), list):
        raise ParseError(f"{path}: expected an object with an 'identities' list")
    out = []
    try:
        for row in raw["identities"]:
            kind = row["kind"]
            if kind in ("N", "M"):
                poly = {int(j): Fraction(a) for j, a in row["poly"].items()}
                p, k = int(row["p"]), int(row["k"])
                bound = valence_bound(p, k, _e_values(p, poly))
                fix = row.get("erratum")
                fix = {int(j): Fraction(a) for j, a in fix.items()} if fix else None
                out.append(IdentityRecord(row["id"], kind, p, int(row["s"]), k, poly, bound,
                                          row.get("note", ""), fix))
            elif kind == "ex1":
                out.append(IdentityRecord(row["id"], kind, 7, 0, 5, {}, Fraction(row.get("bound", 25)),
                                          row.get("note", "")))
            else:
                raise ParseError(f"unknown identity kind {kind!r}")
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed identity record: {exc}") from exc
    return out


@dataclass
class VerifyResult:
    id: str
    status: str  # "verified" or "refuted"
    bound: Fraction
    first_mismatch: Fraction | None = None
    detail: str = ""


def _stat_series(kind, p, s, k, order, path):
    return (Np_series if kind == "N" else Mp_series)(p, s, k, order, path)


def verify_record(rec: IdentityRecord, paths=("combinatorial", "modular"),
                  use_erratum: bool = False, bound=None) -> VerifyResult:
    """Compare both sides at every exponent up to and including the check bound.

    ``bound`` may raise the record's own bound (never lower it).  The printed
    right-hand side is used unless ``use_erratum`` is set and the record
    carries a correction.
    """
    if bound is not None:
        # only integer exponents occur, so q^25 covers a bound of 101/4
        if floor(Fraction(bound)) < floor(rec.check_bound):
            raise ValueError(f"bound {bound} is below the valence bound {rec.check_bound}")
        rec = replace(rec, check_bound=Fraction(bound))
    top = floor(rec.check_bound) + 1
    if rec.kind == "ex1":
        return _verify_ex1(rec, top, use_erratum)
    poly = rec.erratum if (use_erratum and rec.erratum) else rec.rhs_poly
    rhs = t_poly_eval(poly, rec.p, top)
    for path in paths:
        f = modularize(_stat_series(rec.kind, rec.p, rec.s, rec.k, top + 1, path), rec.p, rec.k)
        e = f.first_difference(rhs, top)
        if e is not None:
            hint = " (record carries a correction)" if rec.erratum and not use_erratum else ""
            return VerifyResult(rec.id, "refuted", rec.check_bound, e, f"{path} path{hint}")
    return VerifyResult(rec.id, "verified", rec.check_bound, detail="corrected" if poly is not rec.rhs_poly else "")


def _verify_ex1(rec, top, use_erratum):
    lhs = ex1_lhs(top)
    e = one_minus_t_check(top)
    if e is not None:
        return VerifyResult(rec.id, "refuted", rec.check_bound, e, "1 - t product")
    e = lhs.first_difference(ex1_rhs_derived(top), top)
    if e is not None:
        return VerifyResult(rec.id, "refuted", rec.check_bound, e, "(1 - t)^4 form")
    power = EX1_J7_POWER_CORRECTED if use_erratum else 1
    e = lhs.first_difference(ex1_rhs(top, power), top)
    if e is not None:
        fixed = lhs.first_difference(ex1_rhs(top, EX1_J7_POWER_CORRECTED), top) is None
        hint = f"; holds with (q^7;q^7)^{EX1_J7_POWER_CORRECTED}" if fixed else ""
        return VerifyResult(rec.id, "refuted", rec.check_bound, e, "product form" + hint)
    return VerifyResult(rec.id, "verified", rec.check_bound, detail="corrected" if power != 1 else "")


# --- named identities and scans ---------------------------------------------------

_EX1_WEIGHTS = {1: 1, 6: -1, 2: 3, 5: -3}


def ex1_lhs(order: int) -> PSeries:
    tab = stat_tables(7, 7 * order + 5)
    return PSeries({n: sum(w * tab.NT(r, 7 * n + 5) for r, w in _EX1_WEIGHTS.items())
                    for n in range(order)}, order)


# Cubing (q^7;q^7) is what the (1 - t)^4 form reduces to.
EX1_J7_POWER_CORRECTED = 3


def ex1_rhs(order, j7_power: int = 1) -> PSeries:
    """-7 (q^7;q^7)^j7_power (q^3,q^4;q^7) / ((q,q^6;q^7) (q^2,q^5;q^7)^2)."""
    num = pochhammer(7, 7, order) ** j7_power * jprod(7, 3, order)
    den = jprod(7, 1, order) * jprod(7, 2, order) ** 2
    return num * den.invert() * (-7)


def ex1_rhs_derived(order) -> PSeries:
    j = lambda a: jtriple(7, a, order)
    num = pochhammer(7, 7, order) ** 5 * j(2) ** 10
    den = j(1) ** 5 * j(3) ** 7
    return num * den.invert() * (1 - t_series(7, order)) ** 4 * (-7)


def one_minus_t_check(order):
    """First exponent where 1 - t and J_{7,1} J_{7,3}^2 / J_{7,2}^3 differ, or None."""
    j = lambda a: jtriple(7, a, order)
    rhs = j(1) * j(3) ** 2 * (j(2) ** 3).invert()
    return (1 - t_series(7, order)).first_difference(rhs, order)


def weighted_scan(stat: str, p: int, k: int, weights: dict, n_max: int, modulus: int = 0,
                  oracle: str = "gf-dp"):
    """Check sum_r w_r stat(r, p, p n + k) == 0 (mod modulus; exact if 0) for n <= n_max.

    A weight key may also be a ``(stat, r)`` pair, which mixes statistics in
    one combination.  Returns (holds, first failing n or None, values).
    """
    tab = stat_tables(p, p * n_max + k, oracle)
    get = {"NT": tab.NT, "Mw": tab.Mw, "N": tab.N, "M": tab.M}
    terms = [(key if isinstance(key, tuple) else (stat, key), w) for key, w in weights.items()]
    vals = []
    for n in range(n_max + 1):
        m = p * n + k
        if m >= 0:
            vals.append((n, sum(w * get[st](r, m) for (st, r), w in terms)))
    for n, v in vals:
        if (v % modulus if modulus else v) != 0:
            return False, n, vals
    return True, None, vals
