"""Command line interface: synth, check, simulate, bench."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import term as T
from .bench import format_table, rows_json, run_suite
from .driver import REALIZABLE, RunConfig, parameterized_synthesis
from .program import FormatError, emit_program, emit_witness, read_program, read_witness
from .simulate import POLICIES, simulate
from .smt import SolverError, SolverSession, SolverUnknown
from .spec import SpecError, format_params, load_spec
from .term import ParseError
from .verify import Consistent, check_consistency

EXIT_OK, EXIT_NEGATIVE, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _spec(path: str):
    _read(path)
    try:
        return load_spec(path)
    except (ParseError, SpecError) as e:
        raise UsageError(f"{path}: {e}") from None


def _config(args) -> RunConfig:
    return RunConfig(solver=args.solver, timeout=args.timeout, max_iter=args.max_iter,
                     similarity_threshold=args.similarity_threshold, seed=args.seed)


def _params_json(spec, p) -> dict:
    return {v.name: p[v] for v in spec.params}


def cmd_synth(args) -> int:
    spec = _spec(args.spec)
    result = parameterized_synthesis(spec, _config(args))
    program = emit_program(result.program) if result.program and result.status == REALIZABLE else None
    witness = emit_witness(result.witness) if result.witness and result.status == REALIZABLE else None
    if args.emit_program and program:
        Path(args.emit_program).write_text(program)
    if args.emit_witness and witness:
        Path(args.emit_witness).write_text(witness)
    if args.json:
        out = {"status": result.status, "reason": result.reason,
               "iterations": result.iterations, "wall_time": round(result.wall_time, 3),
               "params_used": [_params_json(spec, p) for p in result.params_used],
               "program": program, "witness": witness}
        if result.losing_params is not None:
            out["losing_params"] = _params_json(spec, result.losing_params)
        print(json.dumps(out, indent=2))
    else:
        line = f"{result.status}"
        if result.reason:
            line += f" ({result.reason})"
        print(line)
        print(f"instances: {len(result.params_used)} "
              f"[{', '.join(format_params(spec, p) for p in result.params_used)}], "
              f"time {result.wall_time:.1f}s")
        if program and not args.emit_program:
            print(program, end="")
        if witness and not args.emit_witness:
            print(witness, end="")
    return result.exit_code


def cmd_check(args) -> int:
    spec = _spec(args.spec)
    try:
        system = read_program(_read(args.program), spec)
        witness = read_witness(_read(args.witness), spec)
    except FormatError as e:
        raise UsageError(str(e)) from None
    with SolverSession(args.solver) as session:
        verdict = check_consistency(session, spec, system, witness)
    if isinstance(verdict, Consistent):
        print("Consistent")
        return EXIT_OK
    print(f"Inconsistent at {format_params(spec, verdict.params)}")
    for name in verdict.violated:
        print(f"  violated: {name}")
    return EXIT_NEGATIVE


def _parse_params(spec, items) -> dict:
    names = {v.name: v for v in spec.params}
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or name.strip() not in names:
            raise UsageError(f"bad --param '{item}'; expected one of "
                             f"{', '.join(names) or '(none)'} as name=value")
        try:
            out[names[name.strip()]] = int(value)
        except ValueError:
            raise UsageError(f"parameter value must be an integer: '{item}'") from None
    return out


def cmd_simulate(args) -> int:
    spec = _spec(args.spec)
    try:
        system = read_program(_read(args.program), spec)
        witness = read_witness(_read(args.witness), spec) if args.witness else None
    except FormatError as e:
        raise UsageError(str(e)) from None
    params = _parse_params(spec, args.param)
    with SolverSession(args.solver) as session:
        try:
            res = simulate(spec, system, params, args.steps, args.policy, witness, args.seed,
                           session)
        except ValueError as e:
            raise UsageError(str(e)) from None
    print(res.summary(spec))
    return EXIT_OK if res.ok else EXIT_NEGATIVE


def cmd_bench(args) -> int:
    config = RunConfig(solver=args.solver, timeout=args.timeout, seed=args.seed)

    def progress(row):
        if not args.json:
            print(f"  {row.name}: {row.result.status} ({row.result.wall_time:.1f}s)",
                  file=sys.stderr)

    suite = args.suite
    if suite and not Path(suite).is_dir():
        raise UsageError(f"no such suite directory: {suite}")
    rows = run_suite(suite, config, progress)
    print(rows_json(rows) if args.json else format_table(rows))
    return EXIT_OK if all(r.result.status == REALIZABLE for r in rows) else EXIT_UNKNOWN


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paramsynth",
                                description="Synthesis for parameterized GR(1) specifications.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize a controller and witness")
    s.add_argument("spec")
    s.add_argument("--solver", help="path of an SMT-LIB2 solver binary (default: z3)")
    s.add_argument("--timeout", type=float, default=600.0, help="overall seconds")
    s.add_argument("--max-iter", type=int, default=20)
    s.add_argument("--similarity-threshold", type=int, default=25)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--emit-program", metavar="PATH")
    s.add_argument("--emit-witness", metavar="PATH")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_synth)

    c = sub.add_parser("check", help="check a program and witness against a spec")
    c.add_argument("program")
    c.add_argument("witness")
    c.add_argument("spec")
    c.add_argument("--solver")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("simulate", help="run a program against a sampled environment")
    m.add_argument("program")
    m.add_argument("spec")
    m.add_argument("--param", action="append", metavar="NAME=VALUE")
    m.add_argument("--steps", type=int, default=1000)
    m.add_argument("--policy", choices=POLICIES, default="random")
    m.add_argument("--witness", help="also check invariant membership")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--solver")
    m.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--suite", help="directory of .spec files (default: built-in suite)")
    b.add_argument("--timeout", type=float, default=600.0, help="seconds per benchmark")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--solver")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverUnknown, SolverError) as e:
        print(f"error: solver: {e}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
