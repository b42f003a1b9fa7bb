"""Command-line entry point.

Subcommands:
  run       execute an ExpLang program and print query bounds
  check     run the exact law suites (effect algebras, totalization, monads)
  gleason   run the finite-dimensional operator checks, printing a JSON report
  measures  convert between expectation weights and subset tables

Exit codes: 0 success, 1 a law check failed (or a table was rejected),
2 usage, parse, or runtime errors.  Exact rationals are printed as
"num/den" strings; nothing is written to disk without --out.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .effect.instances import (
    ChainEA,
    EffectModule,
    PowersetEA,
    UnitIntervalEM,
    catalog,
    two_element,
)
from .effect.laws import check_effect_algebra, check_effect_module
from .effect.predicates import FinSet
from .monads import Expectation, MeasureTable, check_monad_laws, phi, phi_inverse, NonAdditiveTableError
from .quantum.gleason import MAX_DIM, MIN_DIM, gleason_suite
from .rational import parse_rational
from .semantics.interp import DEFAULT_MAX_ITER, RuntimeProgramError, wp
from .semantics.syntax import ParseError, parse, parse_query
from .totalize import (
    cancellation_check,
    order_antisymmetry_check,
    roundtrip_check,
    totalize,
)

EXIT_OK = 0
EXIT_LAW_FAILURE = 1
EXIT_USAGE = 2


def _parse_init(text: str) -> dict[str, int]:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"expected var=value, got {part!r}")
        name, value = part.split("=", 1)
        out[name.strip()] = int(value.strip())
    if not out:
        raise ValueError("empty initial state")
    return out


def _cmd_run(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        parsed = parse(source)
        query = parse_query(args.query, parsed.decls)
        init = _parse_init(args.init)
        tol = parse_rational(args.tol) if args.tol is not None else Fraction(0)
        result = wp(parsed, query, init, max_iter=args.max_iter, tol=tol)
    except (ParseError, ValueError, RuntimeProgramError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(result.to_json()))
    else:
        print(f"wp in [{result.lo}, {result.hi}]")
        print(f"iterations={result.iterations} residual={result.residual}")
    return EXIT_OK


def _effect_suite(seed: int, cases: int):
    reports = []
    for inst in catalog():
        if isinstance(inst, EffectModule):
            reports.append(check_effect_module(inst, seed=seed, cases=cases))
        else:
            reports.append(check_effect_algebra(inst, seed=seed, cases=cases))
    return reports


def _totalize_suite(seed: int, cases: int):
    reports = []
    for inst in (two_element(), ChainEA(3), UnitIntervalEM(), PowersetEA(FinSet(["a", "b", "c"]))):
        reports.append(roundtrip_check(inst, seed=seed, samples=cases))
        monoid, _ = totalize(inst)
        reports.append(cancellation_check(monoid, seed=seed, samples=cases))
        reports.append(order_antisymmetry_check(monoid, seed=seed, samples=cases))
    return reports


def _cmd_check(args) -> int:
    suites = {
        "effect": _effect_suite(args.seed, args.cases),
        "totalize": _totalize_suite(args.seed, args.cases),
        "monads": [check_monad_laws(seed=args.seed, cases=args.cases)],
    }
    passed = all(r.passed for reports in suites.values() for r in reports)
    if args.json:
        payload = {
            "seed": args.seed,
            "cases": args.cases,
            "passed": passed,
            "suites": {name: [r.to_json() for r in reports] for name, reports in suites.items()},
        }
        print(json.dumps(payload))
    else:
        for name, reports in suites.items():
            for r in reports:
                for line in r.summary_lines():
                    print(f"{name}: {line}")
    return EXIT_OK if passed else EXIT_LAW_FAILURE


def _cmd_gleason(args) -> int:
    if not MIN_DIM <= args.dim <= MAX_DIM:
        print(f"error: --dim must be in {MIN_DIM}..{MAX_DIM}", file=sys.stderr)
        return EXIT_USAGE
    reports = gleason_suite(args.dim, trials=args.trials, seed=args.seed)
    passed = all(r.passed for r in reports)
    payload = {
        "dim": args.dim,
        "trials": args.trials,
        "seed": args.seed,
        "passed": passed,
        "reports": [r.to_json() for r in reports],
    }
    print(json.dumps(payload))
    return EXIT_OK if passed else EXIT_LAW_FAILURE


def _write_output(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_measures(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.direction == "phi":
            h = Expectation.from_json(data)
            table = phi(h)
            payload = {"atoms": list(table.domain.atoms), "table": table.to_json()}
        else:
            domain = FinSet(data["atoms"])
            table = MeasureTable.from_json(domain, data["table"])
            try:
                h = phi_inverse(table)
            except NonAdditiveTableError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_LAW_FAILURE
            payload = h.to_json()
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write_output(payload, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exmon",
        description="Exact expectation-monad toolkit: programs, law suites, operator checks.",
    )
    parser.add_argument("--version", action="version", version=f"exmon {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an ExpLang program")
    run.add_argument("file", help="program file")
    run.add_argument("--query", required=True, help="query predicate over final states")
    run.add_argument("--init", required=True, help="initial state, e.g. 'n=0,c=1'")
    run.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    run.add_argument("--tol", default=None, help="loop residual tolerance (rational)")
    run.add_argument("--json", action="store_true")
    run.set_defaults(fn=_cmd_run)

    check = sub.add_parser("check", help="run the exact law suites")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--cases", type=int, default=500)
    check.add_argument("--json", action="store_true")
    check.set_defaults(fn=_cmd_check)

    gleason = sub.add_parser("gleason", help="finite-dimensional operator checks")
    gleason.add_argument("--dim", type=int, required=True)
    gleason.add_argument("--trials", type=int, default=100)
    gleason.add_argument("--seed", type=int, default=0)
    gleason.add_argument("--json", action="store_true")  # output is JSON either way
    gleason.set_defaults(fn=_cmd_gleason)

    measures = sub.add_parser("measures", help="convert weights <-> subset tables")
    measures.add_argument("direction", choices=["phi", "phi-inverse"])
    measures.add_argument("file", help="input JSON file")
    measures.add_argument("--out", default=None, help="write result here instead of stdout")
    measures.add_argument("--json", action="store_true")  # output is JSON either way
    measures.set_defaults(fn=_cmd_measures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
