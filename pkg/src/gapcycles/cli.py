"""Command-line front end.

    gapcycles build 13 -o g13.gapc
    gapcycles sieve-check 13
    gapcycles census g13.gapc --max-gap 30
    gapcycles model --p0 7 --gap 22 --target 19
    gapcycles verify --p0 7 --target 19 --all-applicable
    gapcycles table82

Exit codes: 0 pass, 1 verification failure, 2 usage or precondition error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from typing import Sequence

from gapcycles import cycle as cyclemod
from gapcycles import reports
from gapcycles.census import census_all, census_gap, census_subpop
from gapcycles.cycle import DESK_MAX_PRIME, build_cycle, direct_sieve, recurse
from gapcycles.errors import CycleFileError, PreconditionError, ResourceError
from gapcycles.fixtures import TABLE_82
from gapcycles.pipeline import applicable_gaps, run_model, table82, verify_models
from gapcycles.primes import is_prime, next_prime
from gapcycles.storage import load_cycle, save_cycle

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("gapcycles")


def _bytes(text: str) -> int:
    m = re.fullmatch(r"(\d+)([KMG]?)B?", text.strip().upper())
    if not m:
        raise argparse.ArgumentTypeError(f"bad memory size {text!r}")
    scale = {"": 1, "K": 1024, "M": 1024**2, "G": 1024**3}[m.group(2)]
    return int(m.group(1)) * scale


def _gap_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _emit(args, rows, fields, payload) -> None:
    if args.format == "json":
        sys.stdout.write(reports.to_json(payload) + "\n")
    else:
        sys.stdout.write(reports.to_csv(rows, fields))


def _need_prime(p: int) -> None:
    if not is_prime(p) or p < 3:
        raise PreconditionError(f"{p} is not an odd prime")


def cmd_build(args) -> int:
    _need_prime(args.prime)
    if args.prime > DESK_MAX_PRIME and not args.override:
        raise ResourceError(
            f"G({args.prime}#) is past the desk-scale ceiling {DESK_MAX_PRIME}; pass --override"
        )
    prev = max(q for q in range(2, args.prime) if is_prime(q)) if args.prime > 3 else None
    if prev is None:
        cycle, trace = build_cycle(3), None
    else:
        base = build_cycle(prev, args.memory_limit)
        cycle, trace = recurse(
            base, args.prime, args.trace is not None, threads=args.threads,
            memory_limit=args.memory_limit,
        )
    save_cycle(cycle, args.out)
    if trace is not None:
        rows = [e._asdict() for e in trace]
        with open(args.trace, "w") as fh:
            fh.write(reports.to_csv(rows, ("copy_index", "position_in_copy", "absolute_offset")))
    print(f"G({cycle.prime}#): {cycle.length} gaps, span {cycle.span} -> {args.out}")
    return EXIT_OK


def cmd_sieve_check(args) -> int:
    _need_prime(args.prime)
    built = build_cycle(args.prime, args.memory_limit)
    oracle = direct_sieve(args.prime, args.memory_limit)
    ok = built == oracle
    print(f"G({args.prime}#) recursion vs direct sieve: {'pass' if ok else 'FAIL'} "
          f"({built.length} gaps)")
    return EXIT_OK if ok else EXIT_FAIL


def _load(args):
    if args.prime is not None:
        _need_prime(args.prime)
        return build_cycle(args.prime, args.memory_limit)
    if args.cycle is None:
        raise PreconditionError("give a cycle file or --prime")
    return load_cycle(args.cycle, skip_sum_check=args.skip_sum_check)


def cmd_census(args) -> int:
    cycle = _load(args)
    top = args.gap if args.gap is not None else args.max_gap
    if top is None:
        raise PreconditionError("give --gap or --max-gap")
    if top > cycle.span:
        note = f"gap {top} exceeds the span {cycle.span} of G({cycle.prime}#); no driving terms"
        fields = reports.SUBPOP_FIELDS if args.subpop else reports.CENSUS_FIELDS
        _emit(args, [], fields, reports.census_json([], note))
        if args.format != "json":
            print(f"# {note}", file=sys.stderr)
        return EXIT_OK
    if args.subpop:
        if args.gap is None:
            raise PreconditionError("--subpop needs a single --gap")
        sp = census_subpop(cycle, args.gap, threads=args.threads)
        rows = reports.subpop_rows(sp)
        _emit(args, rows, reports.SUBPOP_FIELDS, reports.census_json(rows))
        return EXIT_OK
    if args.gap is not None:
        censuses = [census_gap(cycle, args.gap, args.max_len, threads=args.threads)]
    else:
        censuses = list(census_all(cycle, args.max_gap, threads=args.threads).values())
    rows = reports.census_rows(censuses)
    _emit(args, rows, reports.CENSUS_FIELDS, reports.census_json(rows))
    return EXIT_OK


def cmd_model(args) -> int:
    kwargs = {}
    if args.fixture:
        if (args.p0, args.gap) != (TABLE_82.p0, TABLE_82.gap):
            raise PreconditionError("the shipped fixture covers --p0 37 --gap 82 only")
        kwargs = {"initial": TABLE_82.census(), "n2": TABLE_82.n2}
    target = args.target if args.target is not None else next_prime(args.p0)
    run = run_model(
        args.p0, args.gap, target, exact=args.exact, memory_limit=args.memory_limit,
        threads=args.threads, **kwargs,
    )
    _emit(args, reports.model_rows(run, args.precision), reports.MODEL_FIELDS,
          reports.model_json(run, args.precision))
    return EXIT_OK


def _perturbation(text: str | None):
    if text is None:
        return None
    gap, j, delta = (int(x) for x in text.split(":"))

    def perturb(g: int, counts: list[int]) -> list[int]:
        if g == gap:
            counts = counts + [0] * (j - len(counts))
            counts[j - 1] += delta
        return counts

    return perturb


def cmd_verify(args) -> int:
    gaps = applicable_gaps(args.p0) if args.all_applicable else args.gaps
    if not gaps:
        raise PreconditionError("give --gaps or --all-applicable")
    report = verify_models(
        args.p0, args.target, gaps, exact=args.exact, perturb=_perturbation(args.perturb),
        memory_limit=args.memory_limit, threads=args.threads,
    )
    _emit(args, reports.verify_rows(report), reports.VERIFY_FIELDS, reports.verify_json(report))
    print(f"# {sum(c.passed for c in report.checks)}/{len(report.checks)} checks pass",
          file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_table82(args) -> int:
    result = table82(exact=args.exact)
    _emit(args, reports.table82_rows(result, args.precision), reports.TABLE_FIELDS,
          reports.table82_json(result, args.precision))
    for name in result.computed:
        print(f"# {name}: {'within tolerance' if result.column_passed(name) else 'OUT of tolerance'}",
              file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    arith = common.add_mutually_exclusive_group()
    arith.add_argument("--exact", dest="exact", action="store_true", default=True,
                       help="exact rational arithmetic (default)")
    arith.add_argument("--float", dest="exact", action="store_false",
                       help="IEEE double arithmetic")
    common.add_argument("--memory-limit", type=_bytes, default=cyclemod.DEFAULT_MEMORY_LIMIT)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="gapcycles", description=__doc__.split("\n")[0],
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="build G(p#) and write a cycle file")
    p.add_argument("prime", type=int)
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--trace", metavar="CSV", help="also write the fusion trace")
    p.add_argument("--override", action="store_true", help=f"allow primes above {DESK_MAX_PRIME}")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sieve-check", parents=[common], help="compare recursion with direct sieve")
    p.add_argument("prime", type=int)
    p.set_defaults(func=cmd_sieve_check)

    p = sub.add_parser("census", parents=[common], help="driving-term counts")
    p.add_argument("cycle", nargs="?", help="cycle file")
    p.add_argument("--prime", type=int, help="build G(p#) in memory instead of reading a file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--gap", type=int)
    g.add_argument("--max-gap", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--subpop", action="store_true", help="split by first/last gap class")
    p.add_argument("--skip-sum-check", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("model", parents=[common], help="population model for one gap")
    p.add_argument("--p0", type=int, required=True)
    p.add_argument("--gap", type=int, required=True)
    p.add_argument("--target", type=int)
    p.add_argument("--fixture", action="store_true", help="use the shipped G(37#) counts for gap 82")
    p.add_argument("--precision", type=int, default=12)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("verify", parents=[common], help="models vs censuses of built cycles")
    p.add_argument("--p0", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--gaps", type=_gap_list)
    g.add_argument("--all-applicable", action="store_true")
    p.add_argument("--perturb", metavar="GAP:J:DELTA",
                   help="add DELTA to the initial count n_{GAP,J} (negative control)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table82", parents=[common], help="regression against published gap-82 data")
    p.add_argument("--precision", type=int, default=10)
    p.set_defaults(func=cmd_table82)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (PreconditionError, CycleFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
