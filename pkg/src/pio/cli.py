"""Command-line entry point: check, run, invert, oracle, laws and lab.

Exit codes: 0 on success, 1 when a check fails or a counterexample is
found, 2 on usage errors (bad flags, unreadable files, malformed values).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import arrows, interp, lab, programs
from . import syntax as S
from .parser import ParseError, parse_program, parse_value, print_combinator, print_type, print_value
from .typecheck import ProgramTypeError, annotate_program, check_value

FUEL_ENV = "PIO_FUEL"


class UsageError(Exception):
    pass


class Diagnostics(Exception):
    """Located parse or type errors, one ``file:line:col: message`` per line."""

    def __init__(self, lines: list[str]):
        self.lines = lines
        super().__init__("\n".join(lines))


@dataclass
class RunReport:
    program: str
    name: str
    direction: str
    input: str
    kind: str  # defined | undefined | out_of_fuel
    value: str | None
    steps: int
    trace_fuel: int
    elapsed: float | None = None

    @classmethod
    def build(cls, program, name, direction, v, result, steps, fuel, elapsed=None):
        if isinstance(result, interp.Defined):
            kind, value = "defined", print_value(result.value)
        elif isinstance(result, interp.OutOfFuel):
            kind, value = "out_of_fuel", None
        else:
            kind, value = "undefined", None
        return cls(program, name, direction, print_value(v), kind, value, steps,
                   fuel.max_trace_steps, elapsed)

    def records(self) -> dict:
        rec = {"program": self.program, "name": self.name, "direction": self.direction,
               "input": self.input, "result": {"kind": self.kind, "value": self.value},
               "steps": self.steps, "trace_fuel": self.trace_fuel}
        if self.elapsed is not None:
            rec["elapsed_seconds"] = self.elapsed
        return rec

    def lines(self) -> list[str]:
        if self.kind == "defined":
            return [self.value]
        if self.kind == "out_of_fuel":
            return [f"out of fuel after {self.steps} steps"]
        return ["undefined"]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _emit(args, records: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(records, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _load_source(path: str):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from None
    return parse_program(text, str(p))


def _diagnostics(path: str, exc: Exception) -> list[str]:
    if isinstance(exc, ParseError):
        return [f"{path}:{exc.line}:{exc.column}: parse error: {exc.message}"]
    if isinstance(exc, ProgramTypeError):
        return [f"{path}:{d.line}:{d.column}: type error in {d.name}: {e}" for d, e in exc.errors]
    return [f"{path}: {exc}"]


def _load_typed(path: str) -> programs.Loaded:
    try:
        prog = _load_source(path)
        return programs.Loaded(prog, annotate_program(prog))
    except (ParseError, ProgramTypeError) as exc:
        raise Diagnostics(_diagnostics(path, exc)) from None


def _fuel(flag: int | None) -> interp.Fuel:
    if flag is None:
        env = os.environ.get(FUEL_ENV)
        if env is not None:
            try:
                flag = int(env)
            except ValueError:
                raise UsageError(f"{FUEL_ENV} must be an integer, got {env!r}") from None
        else:
            flag = interp.DEFAULT_TRACE_FUEL
    if flag < 1:
        raise UsageError("fuel must be positive")
    return interp.Fuel(max_trace_steps=flag)


def _pick(loaded: programs.Loaded, name: str | None) -> str:
    if name is None:
        return loaded.program.main().name
    if name not in loaded.typed:
        raise UsageError(f"no declaration named {name!r}; have {', '.join(loaded.program.names)}")
    return name


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    loaded = _load_typed(args.file)
    decls = [{"name": n, "type": str(t.type)} for n, t in loaded.typed.items()]
    records = {"program": Path(args.file).name, "ok": True, "declarations": decls}
    _emit(args, records, [f"{d['name']} : {d['type']}" for d in decls])
    return 0


def cmd_run(args) -> int:
    loaded = _load_typed(args.file)
    name = _pick(loaded, args.name)
    fuel = _fuel(args.fuel)
    ty = loaded.typed[name].type
    domain = ty.codomain if args.backward else ty.domain
    try:
        v = parse_value(args.input)
    except ParseError as exc:
        raise UsageError(f"--input:{exc.column}: {exc.message}") from None
    if not check_value(v, domain):
        raise UsageError(f"input {print_value(v)} does not have type {print_type(domain)}")
    c = loaded.combinator(name)
    c = S.structural_dagger(c) if args.backward else S.eliminate_inv(c)
    start = time.perf_counter()
    result, steps = interp.evaluate(c, v, fuel)
    elapsed = round(time.perf_counter() - start, 6) if args.timing else None
    report = RunReport.build(Path(args.file).name, name, "backward" if args.backward else "forward",
                             v, result, steps, fuel, elapsed)
    _emit(args, report.records(), report.lines())
    return 0 if result.defined else 1


def cmd_invert(args) -> int:
    loaded = _load_typed(args.file)
    name = _pick(loaded, args.name)
    ty = loaded.typed[name].type
    inverse = S.structural_dagger(loaded.combinator(name))
    source = print_combinator(inverse)
    records = {"program": Path(args.file).name, "name": name,
               "type": str(S.CombinatorType(ty.codomain, ty.domain)), "inverse": source}
    _emit(args, records, [source])
    return 0


def _pio_files(paths: list[str]) -> list[Path]:
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(p.glob("*.pio")))
        elif p.exists():
            out.append(p)
        else:
            raise UsageError(f"{p}: no such file or directory")
    return out


def cmd_oracle(args) -> int:
    files = _pio_files(args.paths) if args.paths else programs.corpus_programs()
    for f in files:  # surface parse and type errors with locations first
        _load_typed(str(f))
    summary = programs.oracle_compare(files)
    records = {
        "programs": summary.programs, "declarations": summary.declarations,
        "inputs": summary.inputs, "mismatches": [vars(m) for m in summary.mismatches],
        "out_of_fuel": summary.out_of_fuel, "skipped_mu": summary.skipped, "ok": summary.ok,
    }
    lines = [summary.line()]
    lines += [f"mismatch {m.program}:{m.name} at {m.input}: interp {m.interp}, oracle {m.oracle}"
              for m in summary.mismatches]
    if summary.out_of_fuel:
        lines.append(f"{summary.out_of_fuel} runs ran out of fuel")
    _emit(args, records, lines)
    return 0 if summary.ok else 1


def cmd_laws(args) -> int:
    if args.size < 1:
        raise UsageError("--size must be at least 1")
    inst = arrows.INSTANCES[args.instance]()
    x = arrows.finite_type(args.size)
    z = arrows.finite_type(max(1, args.size - 1))
    report = arrows.check_laws(inst, (x, x, z), trials=args.trials, seed=args.seed)
    records = dict(report.records(), ok=report.ok)
    lines = report.lines() + [f"{'PASS' if report.ok else 'FAIL'} {inst.name}"]
    _emit(args, records, lines)
    return 0 if report.ok else 1


def cmd_lab(args) -> int:
    report = lab.run_suite(args.suite)
    _emit(args, report.records(), report.lines())
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="pio", description="Reversible combinator toolkit.")
    top.add_argument("--json", action="store_true", help="machine-readable output")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_, fn):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                       help="machine-readable output")
        p.set_defaults(fn=fn)
        return p

    p = command("check", "type-check a .pio file", cmd_check)
    p.add_argument("file")

    p = command("run", "evaluate a declaration on one input", cmd_run)
    p.add_argument("file")
    p.add_argument("--input", required=True, help="value, e.g. 'inl ()'")
    p.add_argument("--fuel", type=int, default=None,
                   help=f"trace iterations per loop (default {interp.DEFAULT_TRACE_FUEL}, env {FUEL_ENV})")
    p.add_argument("--backward", action="store_true", help="run the inverse")
    p.add_argument("--name", help="declaration to run (default: main)")
    p.add_argument("--timing", action="store_true", help="report elapsed time")

    p = command("invert", "print the inverse of a declaration", cmd_invert)
    p.add_argument("file")
    p.add_argument("--name", help="declaration to invert (default: main)")

    p = command("oracle", "compare the evaluator with the partial-injection oracle", cmd_oracle)
    p.add_argument("paths", nargs="*", help="files or directories (default: bundled corpus)")

    p = command("laws", "check the arrow laws for an instance", cmd_laws)
    p.add_argument("--instance", required=True, choices=sorted(arrows.INSTANCES))
    p.add_argument("--size", type=int, required=True, help="inhabitants of X and Y")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=4)

    p = command("lab", "run a finite-relations lab suite", cmd_lab)
    p.add_argument("--suite", required=True, choices=lab.SUITES)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"pio: error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"pio {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Diagnostics as exc:
        for line in exc.lines:
            print(line, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
