"""qrank command line: verify identities, scan congruences, expand series."""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import floor

from .config import ScanConfig, VerifyConfig
from .partitions import ResourceLimit, d_closed_form, d_series
from .qseries import dump_series, mocktheta_g
from .theorems import (ParseError, load_identities, verify_record, weighted_scan, _EX1_WEIGHTS)

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UnknownTarget(ValueError):
    pass


# --- verify -------------------------------------------------------------------------

def _needed_n(rec) -> int:
    return rec.p * (floor(rec.check_bound) + 3) + rec.k


def _verify_job(args):
    rec, use_erratum, max_n, paths = args
    t0 = time.perf_counter()
    row = {"id": rec.id, "p": rec.p, "bound": str(rec.check_bound)}
    if _needed_n(rec) > max_n:
        row.update(status="skipped", detail=f"needs partitions up to n={_needed_n(rec)} > --max-n {max_n}")
    else:
        try:
            res = verify_record(rec, paths, use_erratum)
            row.update(status=res.status, detail=res.detail)
            if res.first_mismatch is not None:
                row["first_mismatch"] = str(res.first_mismatch)
        except ResourceLimit as exc:
            row.update(status="skipped", detail=str(exc))
    row["seconds"] = round(time.perf_counter() - t0, 3)
    return row


def _summary(rows, out):
    width = max([len(r["id"]) for r in rows] + [2])
    print(f"{'id':<{width}}  {'status':<9} {'bound':>7}  detail", file=out)
    for r in rows:
        extra = r.get("detail", "")
        if "first_mismatch" in r:
            extra = f"first mismatch at q^{r['first_mismatch']}; {extra}"
        print(f"{r['id']:<{width}}  {r['status']:<9} {r.get('bound', ''):>7}  {extra}", file=out)
    counts = {s: sum(r["status"] == s for r in rows) for s in ("verified", "refuted", "skipped")}
    print(f"total {len(rows)}: " + ", ".join(f"{v} {k}" for k, v in counts.items()), file=out)


def _exit_code(rows) -> int:
    if any(r["status"] == "refuted" for r in rows):
        return EXIT_REFUTED
    if any(r["status"] == "skipped" for r in rows):
        return EXIT_RESOURCE
    return EXIT_OK


def cmd_verify(cfg: VerifyConfig, out) -> int:
    recs = load_identities(cfg.db)
    if cfg.p is not None:
        recs = [r for r in recs if r.p == cfg.p and r.kind != "ex1"]
    if cfg.ids:
        wanted = set(cfg.ids)
        recs = [r for r in recs if r.id in wanted]
        missing = wanted - {r.id for r in recs}
        if missing:
            raise ParseError(f"unknown identity id(s): {', '.join(sorted(missing))}")
    if not recs:
        raise ParseError("filters select no identities")
    jobs = [(r, cfg.errata, cfg.max_n, cfg.paths) for r in recs]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            rows = list(pool.map(_verify_job, jobs))
    else:
        rows = [_verify_job(j) for j in jobs]
    for r in rows:
        print(json.dumps(r, sort_keys=True), file=out)
    _summary(rows, out)
    return _exit_code(rows)


# --- scan ---------------------------------------------------------------------------

def _mirror(p, half):
    w = {m: m for m in range(1, half + 1)}
    w.update({p - m: -m for m in range(1, half + 1)})
    return w


PRESETS = {
    "mod5-weighted": [("NT", 5, 1, {m: m for m in range(1, 5)}, 5),
                     ("NT", 5, 4, {m: m for m in range(1, 5)}, 5)],
    "ex1-mod7": [("NT", 7, 5, dict(_EX1_WEIGHTS), 7)],
    "ex2": [("NT", 5, 1, {("NT", 2): 1, ("NT", 3): -1, ("Mw", 2): -1, ("Mw", 3): 1}, 0)],
    "ex3": [("Mw", 11, 6, _mirror(11, 5), 0)],
}


def _parse_weights(text: str) -> dict:
    out = {}
    for item in text.split(","):
        r, _, w = item.partition(":")
        try:
            out[int(r)] = int(w) if w else 1
        except ValueError as exc:
            raise ParseError(f"bad weight entry {item!r}; expected r:w") from exc
    return out


def cmd_scan(cfg: ScanConfig, out) -> int:
    if cfg.preset:
        specs = PRESETS[cfg.preset]
    else:
        if cfg.p is None or cfg.k is None or not cfg.weights:
            raise ParseError("scan needs --preset, or --p, --k and --weights")
        specs = [(cfg.stat, cfg.p, cfg.k, _parse_weights(cfg.weights), cfg.modulus)]
    rows = []
    for stat, p, k, w, mod in specs:
        label = f"{stat} p={p} {p}n+{k}" + (f" mod {mod}" if mod else "")
        n_max = cfg.n_max
        if p * n_max + k > cfg.max_n:
            rows.append({"id": label, "status": "skipped", "detail": f"needs n={p * n_max + k} > --max-n"})
            continue
        try:
            ok, wit, vals = weighted_scan(stat, p, k, w, n_max, mod, cfg.oracle)
        except ResourceLimit as exc:
            rows.append({"id": label, "status": "skipped", "detail": str(exc)})
            continue
        row = {"id": label, "status": "verified" if ok else "refuted", "bound": str(n_max),
               "values": [v for _, v in vals]}
        if not ok:
            row["detail"] = f"witness n={wit}"
        rows.append(row)
    for r in rows:
        print(json.dumps(r, sort_keys=True), file=out)
    _summary(rows, out)
    return _exit_code(rows)


# --- expand -------------------------------------------------------------------------

_INT = r"\s*(-?\d+)\s*"
_TARGETS = [
    (re.compile(rf"^(D|Dc)\({_INT},{_INT}(?:,{_INT})?\)$"), "d"),
    (re.compile(rf"^(D|Dc)closed\({_INT},{_INT}\)$"), "dclosed"),
    (re.compile(rf"^t@{_INT}$"), "t"),
    (re.compile(rf"^P@{_INT},{_INT}$"), "prefactor"),
    (re.compile(rf"^L_{_INT}\({_INT}\)$"), "L"),
    (re.compile(rf"^(F|Fc)_{_INT}\({_INT}\)$"), "F"),
    (re.compile(rf"^(N|M)_{_INT}\({_INT},{_INT}\)$"), "NM"),
    (re.compile(rf"^g\({_INT},{_INT}\)$"), "g"),
]


def expand_target(target: str, order: int, path: str = "combinatorial"):
    from . import appell, theorems
    from .qseries import eta_expand

    t = target.replace(" ", "")
    for rx, kind in _TARGETS:
        m = rx.match(t)
        if not m:
            continue
        g = m.groups()
        if kind == "d":
            stat = "crank" if g[0] == "Dc" else "rank"
            a, M = int(g[1]), int(g[2])
            if g[3] is None:
                return d_series(a, M, order, stat)
            k = int(g[3])
            return d_series(a, M, M * order + k + 1, stat).dissect(M, k).truncate(order)
        if kind == "dclosed":
            return d_closed_form(int(g[1]), int(g[2]), order, "crank" if g[0] == "Dc" else "rank")
        if kind == "t":
            return theorems.t_series(int(g[0]), order)
        if kind == "prefactor":
            return eta_expand(theorems.prefactor_spec(int(g[0]), int(g[1])), order)
        if kind == "L":
            return appell.Lp_series(int(g[0]), int(g[1]), order)
        if kind == "F":
            fn = appell.Fps_crank_series if g[0] == "Fc" else appell.Fps_series
            return fn(int(g[1]), int(g[2]), order)
        if kind == "NM":
            fn = theorems.Np_series if g[0] == "N" else theorems.Mp_series
            return fn(int(g[1]), int(g[2]), int(g[3]), order, path)
        if kind == "g":
            return mocktheta_g(int(g[0]), int(g[1]), order)
    raise UnknownTarget(f"unknown target {target!r}")


def cmd_expand(ns, out) -> int:
    s = expand_target(ns.target, ns.order, ns.path)
    out.write(f"# {ns.target}\n")
    out.write(dump_series(s))
    return EXIT_OK


# --- selftest -----------------------------------------------------------------------

def _selftest_checks():
    from .exact import zeta_pow
    from .appell import MatSL2
    from .modular import chi_eta, valence_bound
    from .theorems import one_minus_t_check

    def closed_d15():
        return d_series(1, 5, 21).first_difference(d_closed_form(1, 5, 21), 21) is None

    def first_row():
        rec = next(r for r in load_identities() if r.id == "N5(1,0)")
        return verify_record(rec).status == "verified"

    return [
        ("eta multiplier at T and S", lambda: chi_eta(MatSL2(1, 1, 0, 1)) == zeta_pow(24, 1)
            and chi_eta(MatSL2(0, -1, 1, 0)) == zeta_pow(8, -1)),
        ("valence bound p=5, k=4", lambda: valence_bound(5, 4) == 7),
        ("D(1,5) closed form to q^20", closed_d15),
        ("1 - t product to q^20", lambda: one_minus_t_check(21) is None),
        ("weighted NT mod 5, n <= 6", lambda: all(weighted_scan(*s[:4], 6, s[4])[0]
                                                 for s in PRESETS["mod5-weighted"])),
        ("N5(1,0) row", first_row),
    ]


def cmd_selftest(ns, out) -> int:
    rows = []
    for name, fn in _selftest_checks():
        t0 = time.perf_counter()
        try:
            ok = bool(fn())
            detail = ""
        except Exception as exc:  # a crash is a failed check, not a CLI error
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append({"id": name, "status": "verified" if ok else "refuted", "detail": detail,
                     "seconds": round(time.perf_counter() - t0, 3)})
    for r in rows:
        print(json.dumps(r, sort_keys=True), file=out)
    _summary(rows, out)
    return _exit_code(rows)


# --- entry point --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qrank", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="check identity records at their valence bounds")
    v.add_argument("--p", type=int, help="only records at this prime")
    v.add_argument("--id", action="append", help="record id, e.g. 'N5(1,0)' or ex1; repeatable")
    v.add_argument("--db", help="identity database (default: $QRANK_DB or the shipped tables)")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--max-n", type=int, default=1000, help="largest partition size to tabulate")
    v.add_argument("--errata", action="store_true", help="use corrected right-hand sides where recorded")

    s = sub.add_parser("scan", help="test weighted NT / M_omega combinations")
    s.add_argument("--preset", choices=sorted(PRESETS))
    s.add_argument("--stat", default="NT", choices=["NT", "Mw", "N", "M"])
    s.add_argument("--p", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--weights", help="comma list r:w, e.g. 1:1,6:-1,2:3,5:-3")
    s.add_argument("--modulus", type=int, default=0, help="0 means exact vanishing")
    s.add_argument("--n-max", type=int, default=12)
    s.add_argument("--max-n", type=int, default=1000)
    s.add_argument("--oracle", default="gf-dp", choices=["gf-dp", "enumeration"])

    e = sub.add_parser("expand", help="dump a named series")
    e.add_argument("--target", required=True,
                   help="D(a,M[,k]), Dc(a,M[,k]), Dclosed(a,M), t@p, P@p,k, L_p(v), F_p(s), "
                        "Fc_p(s), N_p(s,k), M_p(s,k), g(a,b)")
    e.add_argument("--order", type=int, default=20)
    e.add_argument("--path", default="combinatorial", choices=["combinatorial", "modular"])

    sub.add_parser("selftest", help="quick smoke checks")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if ns.cmd == "verify":
            cfg = VerifyConfig(ns.db, ns.p, tuple(ns.id or ()), ns.jobs, ns.max_n, ns.errata)
            return cmd_verify(cfg, sys.stdout)
        if ns.cmd == "scan":
            cfg = ScanConfig(ns.preset, ns.stat, ns.p, ns.k, ns.weights, ns.modulus, ns.n_max, ns.max_n, ns.oracle)
            return cmd_scan(cfg, sys.stdout)
        return {"expand": cmd_expand, "selftest": cmd_selftest}[ns.cmd](ns, sys.stdout)
    except ValueError as exc:  # ParseError, UnknownTarget and out-of-range arguments
        print(f"qrank: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"qrank: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
