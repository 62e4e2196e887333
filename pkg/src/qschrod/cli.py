"""Command line: ``qschrod <subcommand> [options]``.

Every run prints one line per check and can write a JSON report with
``--json PATH``. The exit code is 0 iff every check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__, suites
from .opalg import format_operator
from .parser import ParseError, parse_expr
from .tables import manifest

SCHEMA_VERSION = "1.0"

RELATION_CASES = suites.RELATION_CASES
HOPF_CASES = ("space", "time", "classical-space", "classical-time", "sl2-deformed", "sl2-mapped")
MAP_CASES = ("space", "time", "sl2")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qschrod", description="Exact checks for quantum Schrodinger algebras on lattices")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--list", action="store_true", help="print the table manifest and exit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the report to PATH")
    common.add_argument("-q", "--quiet", action="store_true", help="print only the summary line")
    sub = p.add_subparsers(dest="command")

    r = sub.add_parser("relations", parents=[common], help="commutation tables and Casimir identities")
    r.add_argument("--case", choices=RELATION_CASES, action="append")
    r.add_argument("--casimir", action="store_true", help="also check [E, X] = L E")

    h = sub.add_parser("hopf", parents=[common], help="homomorphism, coassociativity, group-likes")
    h.add_argument("--case", choices=HOPF_CASES, action="append")

    m = sub.add_parser("maps", parents=[common], help="nonlinear changes of basis")
    m.add_argument("--case", choices=MAP_CASES, action="append")

    b = sub.add_parser("bialgebra", parents=[common], help="r-matrices and cocommutators")
    b.add_argument("--r", choices=("rs", "rt", "sl2", "sa"), default="rs")
    b.add_argument("--z1", type=_rational)
    b.add_argument("--z2", type=_rational)
    b.add_argument("--lambda", dest="lam", type=_rational)

    lt = sub.add_parser("lattice", parents=[common], help="numeric checks on grids")
    lt.add_argument("--family", choices=("bk", "ci", "za"), default="bk")
    lt.add_argument("--nx", type=int, default=12)
    lt.add_argument("--nt", type=int, default=12)
    lt.add_argument("--sigma", type=_rational, default=Fraction(1, 10))
    lt.add_argument("--tau", type=_rational, default=Fraction(1, 20))
    lt.add_argument("--m", type=_rational, default=Fraction(1, 2))
    lt.add_argument("--tol", type=float, default=1e-9)
    lt.add_argument("--dump", metavar="PATH", help="write the first dispersion solution as grid records")

    ps = sub.add_parser("parse", parents=[common], help="normalize an operator expression")
    ps.add_argument("expr")

    sub.add_parser("all", parents=[common], help="run every suite")
    return p


def _relations(args) -> list:
    cases = args.case or list(RELATION_CASES)
    jobs = [lambda c=c: suites.relation_records(c) for c in cases]
    if args.casimir:
        jobs += [lambda c=c: suites.casimir_records(c) for c in cases if c in suites.FACTOR_CASES]
    return suites.run_parallel(jobs)


def _hopf(args) -> list:
    return suites.run_parallel([lambda c=c: suites.hopf_records(c) for c in args.case or HOPF_CASES])


def _maps(args) -> list:
    return suites.run_parallel([lambda c=c: suites.map_records(c) for c in args.case or MAP_CASES])


def _bialgebra(args, data: dict) -> list:
    overrides = (args.z1, args.z2, args.lam)
    if args.r != "sa" and any(v is not None for v in overrides):
        return [suites.Record("cli", f"bialg/{args.r}", "arguments", "error", {},
                              "--z1/--z2/--lambda apply only to --r sa")]
    recs, d = suites.bialgebra_records(args.r, *overrides)
    data["bialgebra"] = d
    return recs


def _lattice(args) -> list:
    recs = suites.lattice_records(args.family, args.nx, args.nt, args.sigma, args.tau, args.m, args.tol)
    if args.dump:
        from .lattice import DispersionSolution, Grid
        grid = Grid(args.nx, args.nt, float(args.sigma), float(args.tau), 0.3, 0.2)
        make = getattr(DispersionSolution, args.family)
        arg = Fraction(1, 2) if args.family == "ci" else Fraction(11, 10)
        with open(args.dump, "w") as fh:
            fh.write(make(arg, args.sigma, args.tau, args.m).on(grid).dump() + "\n")
    return recs


def _parse(args, data: dict) -> list:
    try:
        op = parse_expr(args.expr)
    except ParseError as exc:
        return [suites.Record("cli", "cli/parse", "parse", "error", {"position": exc.pos}, str(exc))]
    text = format_operator(op)
    data["normalForm"] = text
    ok = parse_expr(text) == op
    return [suites.Record("cli", "cli/parse", "parse", "pass" if ok else "fail", {}, text)]


def _all(args, data: dict) -> list:
    jobs = [lambda c=c: suites.relation_records(c) for c in RELATION_CASES]
    jobs += [lambda c=c: suites.casimir_records(c) for c in suites.FACTOR_CASES]
    jobs += [lambda c=c: suites.hopf_records(c) for c in HOPF_CASES]
    jobs += [lambda c=c: suites.map_records(c) for c in MAP_CASES]
    jobs += [lambda w=w: suites.bialgebra_records(w)[0] for w in ("rs", "rt", "sl2", "sa")]
    jobs += [lambda f=f: suites.lattice_records(f) for f in ("bk", "ci", "za")]
    return suites.run_parallel(jobs)


def build_report(command: str, records: list, data: dict | None = None) -> dict:
    passed = sum(r.passed for r in records)
    report = {
        "schemaVersion": SCHEMA_VERSION,
        "tool": {"name": "qschrod", "version": __version__},
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "command": command,
        "checks": [r.as_dict() for r in records],
        "summary": {"total": len(records), "passed": passed, "failed": len(records) - passed},
        "pass": bool(records) and passed == len(records),
    }
    if data:
        report["data"] = data
    return report


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list:
        for row in manifest():
            print("\t".join([row["case"], row["table"], row["entry"], row["anchor"]]))
        return 0
    if not args.command:
        parser.print_help()
        return 2
    data: dict = {}
    handlers = {
        "relations": lambda: _relations(args),
        "hopf": lambda: _hopf(args),
        "maps": lambda: _maps(args),
        "bialgebra": lambda: _bialgebra(args, data),
        "lattice": lambda: _lattice(args),
        "parse": lambda: _parse(args, data),
        "all": lambda: _all(args, data),
    }
    records = handlers[args.command]()
    report = build_report(args.command, records, data)
    if not args.quiet:
        for r in records:
            extra = f"  {r.detail}" if r.detail else ""
            print(f"{r.status.upper():5} {r.check_id}{extra}")
    s = report["summary"]
    print(f"{'PASS' if report['pass'] else 'FAIL'}: {s['passed']}/{s['total']} checks passed")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
