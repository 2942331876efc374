"""Scripted CLI invocations with golden outputs.

Run ``python tests/cli_cases.py`` to rewrite the files under tests/golden
after an intended output change; review the diff before committing.
"""

from __future__ import annotations

import contextlib
import io
import sys
from pathlib import Path

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
ROOT = HERE.parent
CORPUS = ROOT / "src" / "pio" / "corpus" / "programs"

# (case name, argv, expected exit code); paths are relative to CORPUS
CASES = [
    ("check_distrib", ["--json", "check", "distrib.pio"], 0),
    ("check_nat_text", ["check", "nat.pio"], 0),
    ("run_yank", ["run", "yank.pio", "--input", "inl ()", "--json"], 0),
    ("run_yank_text", ["run", "yank.pio", "--input", "inl ()"], 0),
    ("run_cnot", ["--json", "run", "cnot.pio", "--input", "(inr (), inl ())"], 0),
    ("run_backward_cnot", ["--json", "run", "cnot.pio", "--input", "(inr (), inr ())", "--backward"], 0),
    ("run_backward_nat", ["--json", "run", "nat.pio", "--backward", "--input", "inr fold inl ()"], 0),
    ("run_diverge", ["--json", "run", "diverge.pio", "--input", "()", "--fuel", "40"], 1),
    ("invert_distrib", ["--json", "invert", "distrib.pio"], 0),
    ("invert_distrib_text", ["invert", "distrib.pio"], 0),
    ("invert_toffoli", ["--json", "invert", "toffoli.pio"], 0),
    ("oracle_corpus", ["--json", "oracle", "."], 0),
    ("oracle_text", ["oracle", "not.pio", "trace_cnot.pio"], 0),
    ("laws_pure", ["--json", "laws", "--instance", "pure", "--size", "3"], 0),
    ("laws_error", ["--json", "laws", "--instance", "error", "--size", "2"], 0),
    ("laws_broken", ["--json", "laws", "--instance", "broken", "--size", "3"], 1),
    ("lab_frobenius", ["--json", "lab", "--suite", "frobenius"], 0),
    ("lab_fem", ["--json", "lab", "--suite", "fem"], 0),
    ("lab_kleisli", ["--json", "lab", "--suite", "kleisli"], 0),
    ("lab_ambilimit", ["--json", "lab", "--suite", "ambilimit"], 0),
    ("lab_fixedpoint", ["--json", "lab", "--suite", "fixedpoint"], 0),
]


def invoke(argv: list[str], cwd: Path = CORPUS) -> tuple[int, str, str]:
    """Run the CLI in-process from ``cwd``; returns (exit code, stdout, stderr)."""
    import os

    from pio.cli import main

    out, err = io.StringIO(), io.StringIO()
    old = Path.cwd()
    os.chdir(cwd)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(argv)
    finally:
        os.chdir(old)
    return code, out.getvalue(), err.getvalue()


def golden_path(name: str) -> Path:
    return GOLDEN / f"{name}.out"


def regenerate() -> None:
    GOLDEN.mkdir(exist_ok=True)
    for name, argv, want in CASES:
        code, out, err = invoke(argv)
        if code != want:
            raise SystemExit(f"{name}: exit {code}, expected {want}\n{err}")
        golden_path(name).write_text(out)


if __name__ == "__main__":
    sys.path.insert(0, str(ROOT / "src"))
    regenerate()
