"""Whole-program workflows: corpus loading, round trips and the oracle sweep."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import interp, pinj
from . import syntax as S
from .parser import SourceProgram, parse_program
from .typecheck import TypedTerm, annotate_program

# mu-typed inputs are enumerated up to this many nested folds (so depth < 4)
MU_INPUT_DEPTH = 3


def corpus_programs() -> list[Path]:
    root = Path(str(resources.files("pio") / "corpus" / "programs"))
    return sorted(root.glob("*.pio"))


@dataclass
class Loaded:
    program: SourceProgram
    typed: dict[str, TypedTerm]

    def combinator(self, name: str) -> S.Combinator:
        return self.program.resolved(name)


def load(path: str | Path) -> Loaded:
    path = Path(path)
    prog = parse_program(path.read_text(), str(path))
    return Loaded(prog, annotate_program(prog))


def inputs_for(a: S.ValueType) -> list[S.Value]:
    return interp.values_upto(a, MU_INPUT_DEPTH) if S.has_mu(a) else interp.enumerate_values(a)


def loop_bound(t: TypedTerm) -> int:
    """Largest ``|U| + 1`` over the traces of a mu-free typed term."""
    best = 0
    if t.loop is not None:
        best = interp.cardinality(t.loop) + 1
    return max([best] + [loop_bound(ch) for ch in t.children])


@dataclass
class Mismatch:
    program: str
    name: str
    input: str
    interp: str
    oracle: str


@dataclass
class OracleSummary:
    programs: int = 0
    declarations: int = 0
    inputs: int = 0
    skipped: list[str] = field(default_factory=list)
    mismatches: list[Mismatch] = field(default_factory=list)
    out_of_fuel: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.out_of_fuel

    def line(self) -> str:
        return f"{self.programs} programs, {self.inputs} inputs, {len(self.mismatches)} mismatches"


def _show(r: interp.EvalResult) -> str:
    if isinstance(r, interp.Defined):
        return str(r.value)
    if isinstance(r, interp.OutOfFuel):
        return f"out of fuel after {r.steps_used} steps"
    return "undefined"


def oracle_compare(paths, summary: OracleSummary | None = None) -> OracleSummary:
    """Compare the evaluator with the partial-injection denotation on every input.

    Each trace gets exactly ``|U| + 1`` iterations of fuel, the bound under
    which the oracle is exact; a mu-free program must never exhaust it.
    """
    summary = summary or OracleSummary()
    for path in paths:
        loaded = load(path)
        counted = False
        for name, tt in loaded.typed.items():
            label = f"{Path(path).name}:{name}"
            if pinj.mentions_mu(tt):
                summary.skipped.append(label)
                continue
            if not counted:
                summary.programs += 1
                counted = True
            summary.declarations += 1
            f = pinj.denote(tt)
            c = loaded.combinator(name)
            fuel = interp.Fuel(max_trace_steps=max(1, loop_bound(tt)))
            for i, v in enumerate(interp.enumerate_values(tt.type.domain)):
                summary.inputs += 1
                r = interp.run(c, v, fuel)
                if isinstance(r, interp.OutOfFuel):
                    summary.out_of_fuel += 1
                j = f(i)
                want = interp.Undefined if j is None else interp.Defined(pinj.value_at(j, tt.type.codomain))
                if r != want:
                    summary.mismatches.append(Mismatch(Path(path).name, name, str(v), _show(r), _show(want)))
    return summary


@dataclass
class RoundTrip:
    name: str
    inputs: int = 0
    defined: int = 0
    failures: list[tuple[str, str, str]] = field(default_factory=list)


def round_trip(loaded: Loaded, name: str, fuel: interp.Fuel | None = None) -> RoundTrip:
    """run then run_backward on every input; Defined results must come back exactly."""
    c = loaded.combinator(name)
    rt = RoundTrip(name)
    for v in inputs_for(loaded.typed[name].type.domain):
        rt.inputs += 1
        r = interp.run(c, v, fuel)
        if not isinstance(r, interp.Defined):
            continue
        rt.defined += 1
        back = interp.run_backward(c, r.value, fuel)
        if back != interp.Defined(v):
            rt.failures.append((str(v), str(r.value), _show(back)))
    return rt
