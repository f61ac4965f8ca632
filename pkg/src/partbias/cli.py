"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from mpmath import mp

from .asymptotics import (
    DomainError,
    full_series_estimate,
    main_simplified,
    main_two_term,
    scaled_difference,
)
from .core import ResidueConfig, count_bias_table, rows_to_csv
from .numfmt import decimal_str
from .saddle import e_coefficients

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
NMAX_LIMIT = int(os.environ.get("PBL_NMAX_LIMIT", "200000"))

TABLES = {
    "1": (ResidueConfig(2, 0), 50),
    "2": (ResidueConfig(2, 1), 50),
    "3": (ResidueConfig(3, 0), 17),
}


class UsageError(Exception):
    pass


class ResourceLimit(Exception):
    pass


def _default_precision() -> int:
    raw = os.environ.get("PBL_PRECISION_BITS")
    if raw is None:
        return 128
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"PBL_PRECISION_BITS must be an integer, got {raw!r}")
    return v


def _common(p: argparse.ArgumentParser, nmax_default=None):
    p.add_argument("--N", type=int, default=2, help="modulus (>= 2)")
    p.add_argument("--K", type=int, default=0, help="parts must exceed K")
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--beta", type=int, default=2)
    p.add_argument("--nmax", "--n", dest="nmax", type=int, default=nmax_default,
                   help="largest n (or the single n for asym)")
    p.add_argument("--order", type=int, default=2, help="truncation order R")
    p.add_argument("--prec", type=int, default=None,
                   help="working precision in bits (default PBL_PRECISION_BITS or 128)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="partbias",
                                 description="Residue biases of partitions into distinct parts.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("exact", help="exact table n,d_ab,d_ba,diff")
    _common(p, 50)

    p = sub.add_parser("asym", help="asymptotic estimate of d_ab(n)")
    _common(p, 1000)
    p.add_argument("--formula", choices=("series", "two-term", "simplified"), default="series")
    p.add_argument("--allow-large-N", action="store_true")

    p = sub.add_parser("compare", help="exact counts against the series estimate")
    _common(p, 200)
    p.add_argument("--nmin", type=int, default=1)
    p.add_argument("--scaled", action="store_true",
                   help="emit (1/n, diff * n * exp(-pi sqrt(n/3))) instead")
    p.add_argument("--residue", type=int, default=None, help="keep only n = residue mod N")

    p = sub.add_parser("tables", help="reproduce the published tables")
    _common(p)
    p.add_argument("--which", required=True)

    p = sub.add_parser("figure-data", help="data series behind the published figures")
    _common(p)
    p.add_argument("--which", required=True)
    p.add_argument("--max-n", type=int, default=2000, help="upper n for figure 2")

    p = sub.add_parser("verify", help="run a verification suite (JSON lines)")
    _common(p, 2000)
    p.add_argument("--suite", choices=("conjectures", "expansion", "lemmas"), required=True)

    p = sub.add_parser("ladder", help="dump the E ladder for one residue gap as JSON")
    _common(p)
    p.add_argument("--res", type=int, required=True, help="[l_alpha - l_beta]_N in 1..N")
    return ap


def _cfg(args) -> ResidueConfig:
    try:
        return ResidueConfig(args.N, args.K, args.alpha, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc))


def _precision(args) -> int:
    prec = args.prec if args.prec is not None else _default_precision()
    if prec < 53:
        raise UsageError("precision must be at least 53 bits")
    if prec > 1 << 16:
        raise ResourceLimit(f"precision {prec} exceeds the supported maximum of 65536 bits")
    return prec


def _nmax(args, lo=0) -> int:
    if args.nmax is None:
        raise UsageError("--nmax is required")
    if args.nmax < lo:
        raise UsageError(f"--nmax must be >= {lo}")
    if args.nmax > NMAX_LIMIT:
        raise ResourceLimit(f"--nmax {args.nmax} exceeds the limit {NMAX_LIMIT} (set PBL_NMAX_LIMIT)")
    return args.nmax


def _emit_rows(header, rows, fmt) -> str:
    if fmt == "csv":
        return rows_to_csv(rows, header)
    return json.dumps([dict(zip(header, (r if isinstance(r, (int, float)) else str(r) for r in row)))
                       for row in rows]) + "\n"


def _int_rows(rows):
    """Big integers go out as decimal strings in JSON."""
    return [tuple(str(x) if isinstance(x, int) and not isinstance(x, bool) else x for x in r)
            for r in rows]


def cmd_exact(args) -> tuple[int, str]:
    cfg, nmax = _cfg(args), _nmax(args)
    t = count_bias_table(cfg, nmax)
    text = t.to_csv() if args.format == "csv" else t.to_json() + "\n"
    return EXIT_OK, text


def cmd_tables(args) -> tuple[int, str]:
    if args.which not in TABLES:
        raise UsageError(f"unknown table {args.which!r}; choose 1, 2 or 3")
    cfg, n = TABLES[args.which]
    t = count_bias_table(cfg, n)
    text = t.to_csv(start=1) if args.format == "csv" else t.to_json(start=1) + "\n"
    return EXIT_OK, text


def cmd_asym(args) -> tuple[int, str]:
    cfg, prec = _cfg(args), _precision(args)
    n = args.nmax
    if n is None or n < 1:
        raise UsageError("--n must be >= 1")
    if args.order < 1:
        raise UsageError("--order must be >= 1")
    try:
        if args.formula == "series":
            est = full_series_estimate(cfg, n, args.order, prec, args.allow_large_N)
        elif args.formula == "two-term":
            est = main_two_term(cfg, n, prec, args.allow_large_N)
        else:
            est = main_simplified(cfg, n, prec)
    except DomainError as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        return EXIT_OK, est.to_json() + "\n"
    rows = [(n, est.order, r, decimal_str(v, prec)) for r, v in est.terms]
    rows.append((n, est.order, "total", decimal_str(est.value, prec)))
    return EXIT_OK, rows_to_csv(rows, ("n", "R", "term", "value"))


def cmd_compare(args) -> tuple[int, str]:
    cfg, prec, nmax = _cfg(args), _precision(args), _nmax(args, 1)
    if args.order < 1:
        raise UsageError("--order must be >= 1")
    if args.residue is not None and not 0 <= args.residue < cfg.N:
        raise UsageError(f"--residue must lie in 0..{cfg.N - 1}")
    t = count_bias_table(cfg, nmax)
    ns = [n for n in range(max(1, args.nmin), nmax + 1)
          if args.residue is None or n % cfg.N == args.residue]
    if args.scaled:
        header = ("n", "inv_n", "diff", "scaled_diff")
        rows = []
        for n in ns:
            with mp.workprec(prec):
                inv = mp.mpf(1) / n
            rows.append((n, decimal_str(inv, prec), t.diff[n],
                         decimal_str(scaled_difference(t.diff[n], n, prec), prec)))
    else:
        try:
            header = ("n", "exact", "estimate", "ratio")
            rows = []
            for n in ns:
                est = full_series_estimate(cfg, n, args.order, prec).value
                with mp.workprec(prec):
                    ratio = t.d_ab[n] / est
                rows.append((n, t.d_ab[n], decimal_str(est, prec), decimal_str(ratio, prec)))
        except DomainError as exc:
            raise UsageError(str(exc))
    return EXIT_OK, _emit_rows(header, _int_rows(rows), args.format)


def cmd_figure_data(args) -> tuple[int, str]:
    prec = _precision(args)
    w = args.which
    if w == "1":
        t0, t1 = count_bias_table(ResidueConfig(2, 0), 100), count_bias_table(ResidueConfig(2, 1), 100)
        header = ("n", "diff_K0", "diff_K1")
        rows = [(n, t0.diff[n], t1.diff[n]) for n in range(101)]
    elif w == "2":
        if args.max_n < 10:
            raise UsageError("--max-n must be >= 10")
        if args.max_n > NMAX_LIMIT:
            raise ResourceLimit(f"--max-n {args.max_n} exceeds the limit {NMAX_LIMIT}")
        t0 = count_bias_table(ResidueConfig(2, 0), args.max_n)
        t1 = count_bias_table(ResidueConfig(2, 1), args.max_n)
        header = ("n", "inv_n", "scaled_K0", "scaled_K1")
        rows = []
        for n in range(10, args.max_n + 1):
            with mp.workprec(prec):
                inv = mp.mpf(1) / n
            rows.append((n, decimal_str(inv, prec),
                         decimal_str(scaled_difference(t0.diff[n], n, prec), prec),
                         decimal_str(scaled_difference(t1.diff[n], n, prec), prec)))
    elif w == "3":
        t = count_bias_table(ResidueConfig(3, 0), 100)
        header = ("n", "diff")
        rows = [(n, t.diff[n]) for n in range(101)]
    elif w == "4":
        t = count_bias_table(ResidueConfig(3, 0), 1000)
        header = ("n", "inv_n", "scaled")
        rows = []
        for n in range(10, 1001):
            with mp.workprec(prec):
                inv = mp.mpf(1) / n
            rows.append((n, decimal_str(inv, prec),
                         decimal_str(scaled_difference(t.diff[n], n, prec), prec)))
    else:
        raise UsageError(f"unknown figure {w!r}; choose 1, 2, 3 or 4")
    return EXIT_OK, _emit_rows(header, _int_rows(rows), args.format)


def cmd_verify(args) -> tuple[int, str]:
    from .verify import run_suite

    prec = _precision(args)
    nmax = _nmax(args, 30)
    records = run_suite(args.suite, nmax, prec)
    lines = [json.dumps(r) for r in records]
    failed = [r for r in records if not r["pass"]]
    if failed:
        lines.append(json.dumps({"check": "summary", "pass": False, "suite": args.suite,
                                 "failed": [r["check"] for r in failed]}))
        return EXIT_FAIL, "\n".join(lines) + "\n"
    lines.append(json.dumps({"check": "summary", "pass": True, "suite": args.suite,
                             "count": len(records)}))
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_ladder(args) -> tuple[int, str]:
    cfg, prec = _cfg(args), _precision(args)
    if not 1 <= args.res <= cfg.N:
        raise UsageError(f"--res must lie in 1..{cfg.N}")
    if args.order < 1:
        raise UsageError("--order must be >= 1")
    ell = [0] * cfg.N
    ell[cfg.alpha - 1] = args.res % cfg.N
    return EXIT_OK, e_coefficients(cfg, ell, args.order, prec).to_json() + "\n"


COMMANDS = {
    "exact": cmd_exact,
    "asym": cmd_asym,
    "compare": cmd_compare,
    "tables": cmd_tables,
    "figure-data": cmd_figure_data,
    "verify": cmd_verify,
    "ladder": cmd_ladder,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        status, text = COMMANDS[args.cmd](args)
    except UsageError as exc:
        print(f"partbias {args.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimit, MemoryError) as exc:
        print(f"partbias {args.cmd}: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
