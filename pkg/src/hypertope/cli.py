"""Command-line front end.

Exit codes: 0 success (every check passed), 1 runtime failure or a failed
check, 2 usage error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .coset_enum import DEFAULT_CAPACITY, CapacityExceeded
from .families import (
    Stage,
    admissible,
    analyze_presentation,
    verify_lemma31,
    verify_prop23,
    verify_theorem32,
)
from .geometry import dump_incidence
from .permgroup import DEFAULT_ELEMENT_CEILING, ElementCeilingExceeded
from .presentations import (
    FAMILIES,
    ParameterError,
    PresentationFormatError,
    build_paper_presentation,
    load_presentation,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_range(text: str) -> range:
    """``"a..b"`` (inclusive) or a single integer."""
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 2..5, got {text!r}") from None
    if b < a:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(a, b + 1)


def _report(command: str, params: dict, stages: list[Stage], verdict: str, timings: bool) -> dict:
    return {
        "tool_version": __version__,
        "command": command,
        "params": params,
        "stages": [s.as_dict(timings) for s in stages],
        "verdict": verdict,
    }


def _timed(fn, *args, **kw):
    start = time.perf_counter()
    out = fn(*args, **kw)
    return out, (time.perf_counter() - start) * 1000


def _compact(w) -> str:
    if w is None:
        return ""
    if isinstance(w, dict):
        return ", ".join(f"{k}={{{_compact(v)}}}" if isinstance(v, dict) else f"{k}={v}"
                         for k, v in w.items())
    return str(w)


def _emit(args, report: dict) -> None:
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=False, ensure_ascii=False))
        return
    print(f"{report['command']} {_compact(report['params'])}".rstrip())
    for st in report["stages"]:
        mark = "PASS" if st["pass"] else "FAIL"
        line = f"  [{mark}] {st['name']}"
        if "witness" in st:
            line += f": {_compact(st['witness'])}"
        if st["elapsed_ms"] is not None:
            line += f" ({st['elapsed_ms']} ms)"
        print(line)
    print(f"verdict: {report['verdict']}")


def _limits(args) -> dict:
    return {"capacity": args.capacity, "element_ceiling": args.element_ceiling}


def cmd_prop23(args) -> int:
    if args.b_range.start < 2:
        raise UsageError(f"b ≥ 2 violated (b={args.b_range.start})")
    stages = []
    for b in args.b_range:
        rep, ms = _timed(verify_prop23, b, **_limits(args))
        stages.append(Stage(f"b={b}", rep.passed, rep.as_dict(), ms))
    ok = all(s.passed for s in stages)
    failed = [s.name for s in stages if not s.passed]
    verdict = "all pass" if ok else "failed for " + ", ".join(failed)
    params = {"b_range": [args.b_range.start, args.b_range.stop - 1]}
    _emit(args, _report("prop23", params, stages, verdict, args.timings))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_lemma31(args) -> int:
    if args.b_range.start < 2:
        raise UsageError(f"b ≥ 2 violated (b={args.b_range.start})")
    stages = []
    for b in args.b_range:
        rep, ms = _timed(verify_lemma31, b, **_limits(args))
        stages.append(Stage(f"b={b}", rep.passed, {"M1": rep.m1, "M2": rep.m2}, ms))
    ok = all(s.passed for s in stages)
    verdict = "all pass" if ok else "failed for " + ", ".join(s.name for s in stages if not s.passed)
    params = {"b_range": [args.b_range.start, args.b_range.stop - 1]}
    _emit(args, _report("lemma31", params, stages, verdict, args.timings))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_theorem(args) -> int:
    n, s, t, l = args.n, args.s, args.t, args.l
    try:
        build_paper_presentation("G", n=n, s=s, t=t, l=l)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    rep = verify_theorem32(n, s, t, l, deep=args.deep, verify_incidence=args.verify_incidence,
                           keep_geometry=bool(args.dump_incidence), **_limits(args))
    if args.dump_incidence and rep.geometry is not None:
        dump_incidence(rep.geometry, args.dump_incidence)
    params = {"n": n, "s": s, "t": t, "l": l, "branch": rep.branch, "deep": args.deep}
    verdict = ("PASS: " if rep.passed else "FAIL: ") + rep.verdict
    _emit(args, _report("theorem", params, rep.stages, verdict, args.timings))
    return EXIT_OK if rep.passed else EXIT_FAIL


def _sweep_job(job):
    (n, s, t, l), deep, limits = job
    start = time.perf_counter()
    try:
        rep = verify_theorem32(n, s, t, l, deep=deep, **limits)
    except (CapacityExceeded, ElementCeilingExceeded) as exc:
        return (n, s, t, l), False, {"error": str(exc)}, (time.perf_counter() - start) * 1000
    witness = {"branch": rep.branch, "verdict": rep.verdict}
    if not rep.passed:
        witness["failed_stage"] = rep.stages[-1].name
    return (n, s, t, l), rep.passed, witness, (time.perf_counter() - start) * 1000


def cmd_sweep(args) -> int:
    tuples = list(itertools.product(args.n_range, args.s_range, args.t_range, args.l_range))
    jobs = [(p, args.deep, _limits(args)) for p in tuples if admissible(*p)]
    skipped = len(tuples) - len(jobs)
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_job, jobs))
    else:
        results = [_sweep_job(j) for j in jobs]
    # pool.map keeps submission order, so the report is ordered by parameters
    stages = [Stage("G({},{},{},{})".format(*p), ok, w, ms) for p, ok, w, ms in results]
    ok = all(s.passed for s in stages)
    passed = sum(s.passed for s in stages)
    verdict = f"{passed}/{len(stages)} admissible tuples pass, {skipped} skipped"
    params = {
        "n_range": [args.n_range.start, args.n_range.stop - 1],
        "s_range": [args.s_range.start, args.s_range.stop - 1],
        "t_range": [args.t_range.start, args.t_range.stop - 1],
        "l_range": [args.l_range.start, args.l_range.stop - 1],
        "executed": len(stages),
        "skipped": skipped,
    }
    _emit(args, _report("sweep", params, stages, verdict, args.timings))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_analyze(args) -> int:
    p = load_presentation(args.file)
    rep, ms = _timed(analyze_presentation, p, expected_order=args.expect_order,
                     verify_incidence=args.verify_incidence,
                     keep_geometry=bool(args.dump_incidence), **_limits(args))
    if args.dump_incidence and rep.geometry is not None:
        dump_incidence(rep.geometry, args.dump_incidence)
    d = rep.as_dict()
    stages = [Stage("order", rep.order_matches is not False,
                    {"order": rep.order, "expected": rep.expected_order}, ms)]
    stages.append(Stage("involutions", rep.involutions, None))
    if rep.involutions:
        stages.append(Stage("c_group", bool(rep.c_group),
                            {"type": d["type"], "failures": d["c_group_failures"]}))
        stages.append(Stage("string_property", (0, 1, 2) in rep.string_orderings,
                            {"orderings": d["string_orderings"]}))
        if rep.tits is not None:
            stages.append(Stage("tits", rep.tits, None))
        stages.append(Stage("hypertope", rep.hypertope, None))
    params = {"file": str(args.file), "generators": list(p.generator_names),
              "relators": list(p.relator_texts or p.render_relators())}
    _emit(args, _report("analyze", params, stages, rep.verdict, args.timings))
    return EXIT_OK


def cmd_present(args) -> int:
    params = {}
    for item in args.params:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {item!r}")
        try:
            params[key] = int(value)
        except ValueError:
            raise UsageError(f"parameter {key} must be an integer") from None
    try:
        p = build_paper_presentation(args.kind, **params)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(p.to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--capacity", type=int, default=DEFAULT_CAPACITY,
                        help="maximum number of cosets defined during enumeration")
    common.add_argument("--element-ceiling", type=int, default=DEFAULT_ELEMENT_CEILING,
                        help="refuse groups larger than this")
    common.add_argument("--timings", action="store_true",
                        help="fill elapsed_ms (off by default so output is reproducible)")

    parser = argparse.ArgumentParser(prog="hypertope", description=(
        "Concretize finitely presented 2-groups and verify regular hypertope constructions."))
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prop23", parents=[common], help="orders in the type {4,4} groups M1, M2")
    p.add_argument("--b-range", type=parse_range, required=True)
    p.set_defaults(func=cmd_prop23)

    p = sub.add_parser("lemma31", parents=[common], help="decomposition witnesses for M1, M2")
    p.add_argument("--b-range", type=parse_range, required=True)
    p.set_defaults(func=cmd_lemma31)

    p = sub.add_parser("theorem", parents=[common], help="verify one G(n, s, t, l)")
    for name in ("n", "s", "t", "l"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--deep", action="store_true", help="also check the quotient chain G1, G2, G3")
    p.add_argument("--verify-incidence", action="store_true",
                   help="cross-check incidence against coset intersection")
    p.add_argument("--dump-incidence", metavar="PATH")
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("sweep", parents=[common], help="verify every admissible tuple in a box")
    for name in ("n", "s", "t", "l"):
        p.add_argument(f"--{name}-range", type=parse_range, required=True)
    p.add_argument("--deep", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("analyze", parents=[common], help="full verdict for a presentation file")
    p.add_argument("--file", required=True)
    p.add_argument("--expect-order", type=int)
    p.add_argument("--verify-incidence", action="store_true")
    p.add_argument("--dump-incidence", metavar="PATH")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("present", help="print a built-in presentation in file format")
    p.add_argument("kind", choices=sorted(FAMILIES))
    p.add_argument("params", nargs="*", metavar="key=value")
    p.set_defaults(func=cmd_present)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be positive")
    if getattr(args, "capacity", 1) < 1 or getattr(args, "element_ceiling", 1) < 1:
        parser.error("--capacity and --element-ceiling must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PresentationFormatError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (CapacityExceeded, ElementCeilingExceeded, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
