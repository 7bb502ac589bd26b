"""Benchmark runner over a directory of specification files."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .driver import RunConfig, RunResult, parameterized_synthesis
from .spec import load_spec


def default_suite() -> Path:
    return Path(str(resources.files("paramsynth") / "benchmarks"))


def display_name(path: Path) -> str:
    return path.stem.replace("_", " ")


@dataclass
class BenchRow:
    name: str
    params: int
    states: int
    inputs: int
    m: int
    n: int
    result: RunResult

    def cells(self) -> list[str]:
        r = self.result
        return [self.name, str(self.params), str(self.states), str(self.inputs), str(self.m),
                str(self.n), r.status, str(len(r.params_used)), f"{r.wall_time:.1f}"]

    def as_dict(self) -> dict:
        r = self.result
        return {"benchmark": self.name, "P": self.params, "X": self.states, "I": self.inputs,
                "m": self.m, "n": self.n, "status": r.status, "P_used": len(r.params_used),
                "time": round(r.wall_time, 3), "reason": r.reason}


HEADER = ["benchmark", "|P|", "|X|", "|I|", "m", "n", "result", "|P'|", "time [s]"]


def run_suite(suite: Path | None = None, config: RunConfig | None = None, progress=None) -> list[BenchRow]:
    suite = Path(suite) if suite else default_suite()
    rows = []
    for path in sorted(suite.glob("*.spec")):
        spec = load_spec(path)
        result = parameterized_synthesis(spec, config)
        row = BenchRow(display_name(path), len(spec.params), len(spec.states), len(spec.inputs),
                       spec.m, spec.n, result)
        rows.append(row)
        if progress:
            progress(row)
    return rows


def format_table(rows: list[BenchRow]) -> str:
    table = [HEADER] + [r.cells() for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(HEADER))]
    out = []
    for k, line in enumerate(table):
        out.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w)
                             for i, (c, w) in enumerate(zip(line, widths))))
        if k == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out)


def rows_json(rows: list[BenchRow]) -> str:
    return json.dumps([r.as_dict() for r in rows], indent=2)
