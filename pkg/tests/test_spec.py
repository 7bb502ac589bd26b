import pytest

from paramsynth import term as T
from paramsynth.spec import (admits, format_params, instantiate, parse_spec, print_spec,
                             validate, with_guarantees)
from paramsynth.term import ParseError

from conftest import bench_spec

SMALL = """
param max: int;
state x: int init 0;
input d: int;
init 0 < max;
envtrans -1 <= d && d <= 1;
action true |-> x := x + d;
action x < max |-> x := x + 1;
assume GF d = 0;
guarantee G x <= max;
guarantee GF x = max;
"""


def test_parse_small():
    s = parse_spec(SMALL, "small")
    assert [v.name for v in s.params] == ["max"]
    assert [v.name for v in s.states] == ["x"]
    assert [v.name for v in s.inputs] == ["d"]
    assert s.m == 1 and s.n == 1
    assert len(s.actions) == 2
    assert s.name == "small"


def test_print_roundtrip():
    s = parse_spec(SMALL)
    again = parse_spec(print_spec(s))
    assert print_spec(again) == print_spec(s)


def test_param_constraint_and_admits():
    s = parse_spec(SMALL)
    mx = s.params[0]
    assert admits(s, {mx: 1})
    assert not admits(s, {mx: 0})
    assert format_params(s, {mx: 3}) == "(max=3)"


def test_instantiate_removes_params():
    s = parse_spec(SMALL)
    c = instantiate(s, {s.params[0]: 4})
    assert c.params == ()
    assert all(v.kind.value != "param" for v in T.term_vars(c.initial))
    assert T.to_text(c.guarantees[0]) == "x = 4"


def test_instantiate_partial_rejected():
    s = bench_spec("intro")
    with pytest.raises(ValueError):
        instantiate(s, {s.params[0]: 0})


def test_validate_clean_and_errors(session):
    assert validate(SMALL, session) == []
    bad = SMALL.replace("guarantee GF x = max;", "guarantee GF x = d;")
    assert any("inputs" in msg for msg in validate(bad, session))
    unsat = SMALL.replace("init 0 < max;", "init 0 < max && max < 0;")
    assert any("unsatisfiable" in msg for msg in validate(unsat, session))


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_spec("param p: int;")
    with pytest.raises(ParseError):
        parse_spec(SMALL.replace("x := x + d", "x := x * d"))


def test_with_guarantees():
    s = parse_spec(SMALL)
    s2 = with_guarantees(s, list(s.guarantees) + [T.TRUE])
    assert s2.n == 2 and s.n == 1


@pytest.mark.parametrize("name", ["intro", "intro_v2", "minimal", "distinct_strategies",
                                  "win_by_assume_violation", "single_gate", "fetch1d"])
def test_benchmarks_are_valid(name, session):
    assert validate(bench_spec(name), session) == []
