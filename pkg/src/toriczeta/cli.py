"""Command-line front end: ``toriczeta run`` and ``toriczeta verify``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .algebra_io import MODES, InputError, build_problem, load_document
from .engine import FIT_POINTS, RunConfig, default_jobs, topological_zeta_function
from .euler import CacheFormatError, read_cache_records

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REDUCE = 2
EXIT_EULER = 3
EXIT_VERIFY = 4

CACHE_ENV = "ZETA_EULER_CACHE"


def output_document(outcome, problem, name=None, timing: float | None = None) -> dict:
    doc: dict = {"name": name, "mode": problem.mode, "rank": problem.rank}
    if outcome.ok:
        R = outcome.result
        doc["status"] = "ok"
        if R is None:
            doc["regular_data"] = len(outcome.regular)
        else:
            den = [[A, B, m] for (A, B), m in R.factors]
            if R.constant != 1:
                den.insert(0, [0, -R.constant, 1])
            doc["numerator"] = list(R.numerator)
            doc["denominator"] = den
            doc["degree"] = R.degree if not R.is_zero() else None
            m = R.magic(problem.rank)
            doc["magic"] = None if m is None else str(m)
            doc["formula"] = str(R)
    else:
        doc["status"] = "fail"
        doc["phase"] = outcome.phase
        doc["reason"] = outcome.reason
        doc["datum"] = outcome.datum
    stats = {k: v for k, v in outcome.stats.items() if not k.endswith("seconds")}
    if timing is not None:
        stats["wall_seconds"] = round(timing, 3)
    doc["stats"] = stats
    return doc


def rational_function_from_document(doc: dict):
    from .topeval import RationalFunction1V

    from collections import Counter

    fac = Counter()
    for A, B, m in doc["denominator"]:
        fac[(A, B)] += m
    return RationalFunction1V.build(doc["numerator"], fac)


def _cache_path(args) -> str | None:
    return args.euler_cache or os.environ.get(CACHE_ENV) or None


def cmd_run(args) -> int:
    try:
        inp = load_document(args.input, args.mode)
    except FileNotFoundError:
        print(f"error: cannot read {args.input}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cache = _cache_path(args)
    if cache and os.path.exists(cache):
        try:
            read_cache_records(cache)
        except CacheFormatError as exc:
            print(f"error: Euler cache {cache}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    problem = build_problem(inp)
    cfg = RunConfig(depth_cap=args.depth_cap, jobs=args.jobs, trace=args.trace, euler_cache_path=cache,
                    mode=inp.mode, stage1_only=args.stage1_only, progress=not args.quiet, points=args.points)
    t0 = time.perf_counter()
    expected = -inp.rank if inp.mode == "subalgebra" else None
    outcome = topological_zeta_function(problem.T0, problem.beta, problem.shifts, cfg, expected_degree=expected)
    elapsed = time.perf_counter() - t0
    if not args.quiet:
        print(f"wall time: {elapsed:.2f} s", file=sys.stderr)
    doc = output_document(outcome, problem, inp.name, elapsed if args.timing else None)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if outcome.ok:
        return EXIT_OK
    if outcome.phase == "interpolation":
        print(f"error: {outcome.reason}; try a larger --points", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_REDUCE if outcome.phase == "reduce" else EXIT_EULER


def cmd_verify(args) -> int:
    from .verify import run_suites

    cache = _cache_path(args)
    report, ok = run_suites(seed=args.seed, cache_path=cache, quick=args.quick)
    for line in report:
        print(line)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toriczeta", description="Topological zeta functions of algebras via toric data.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="compute a topological zeta function")
    r.add_argument("input", help="input document (JSON)")
    r.add_argument("--mode", choices=MODES, help="override the document's mode")
    r.add_argument("--depth-cap", type=int, default=3)
    r.add_argument("--jobs", type=int, default=default_jobs())
    r.add_argument("--trace", metavar="PATH", help="write Stage I decisions as JSON lines")
    r.add_argument("--euler-cache", metavar="PATH", help=f"persistent Euler cache (default ${CACHE_ENV})")
    r.add_argument("--seed", type=int, default=0, help="accepted for symmetry with verify; evaluation points are fixed")
    r.add_argument("--points", type=int, default=FIT_POINTS,
                   help="evaluation points for the final reconstruction (bounds the result's total degree)")
    r.add_argument("--output", "-o", metavar="PATH")
    r.add_argument("--stage1-only", action="store_true", help="stop after partitioning into regular data")
    r.add_argument("--timing", action="store_true", help="include wall time in the output document")
    r.add_argument("--quiet", "-q", action="store_true", help="no progress on stderr")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="run the built-in property suites")
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--euler-cache", metavar="PATH")
    v.add_argument("--quick", action="store_true", help="fewer random samples")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "depth_cap", 1) < 1 or getattr(args, "jobs", 1) < 1 or getattr(args, "points", 2) < 2:
        print("error: --depth-cap and --jobs must be positive, --points at least 2", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
