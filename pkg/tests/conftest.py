from pathlib import Path

import pytest

from paramsynth.smt import SolverSession
from paramsynth.spec import load_spec

BENCH = Path(__file__).resolve().parents[1] / "src" / "paramsynth" / "benchmarks"

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def session():
    s = SolverSession()
    yield s
    s.close()


@pytest.fixture(scope="session")
def bench_dir():
    return BENCH


def bench_spec(name: str):
    return load_spec(BENCH / f"{name}.spec")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def intro_result(session):
    from paramsynth.driver import RunConfig, parameterized_synthesis
    spec = bench_spec("intro")
    return spec, parameterized_synthesis(spec, RunConfig(timeout=300), session)
