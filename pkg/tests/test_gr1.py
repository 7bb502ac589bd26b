import itertools

import pytest

from paramsynth import term as T
from paramsynth.gr1 import (ConcreteSystem, Unrealizable, active_region, coax, deadlock_free, solve_fixpoint,
                            synthesize_concrete)
from paramsynth.spec import instantiate, with_guarantees

from conftest import bench_spec
from oracles import explicit_winning_region


def _concrete(name, **vals):
    spec = bench_spec(name)
    return instantiate(spec, {v: vals[v.name] for v in spec.params})


def _region_matches(inv, cspec, state_box, input_box):
    oracle = explicit_winning_region(cspec, state_box, input_box)
    xs = list(cspec.states)
    for vals in itertools.product(*(state_box[v] for v in xs)):
        sym = bool(T.evaluate(inv, dict(zip(xs, vals))))
        assert sym == (vals in oracle), f"disagree at {dict(zip([v.name for v in xs], vals))}"


def _boxes(cspec, states, inputs):
    by = {v.name: v for v in list(cspec.states) + list(cspec.inputs)}
    return ({by[k]: v for k, v in states.items()}, {by[k]: v for k, v in inputs.items()})


CASES = [
    ("intro", {"min": 0, "max": 2}, {"x": range(-2, 5)}, {"d": [-1, 0, 1]}),
    ("intro", {"min": -1, "max": 3}, {"x": range(-3, 6)}, {"d": [-1, 0, 1]}),
    ("intro_v2", {"min": 0, "max": 3}, {"x": range(-2, 6)}, {"d": [-1, 0, 1]}),
    ("minimal", {"max": 2}, {"x": range(-2, 5)}, {"d": [-1, 0, 1]}),
    ("distinct_strategies", {"p": -2}, {"x": range(-4, 3)}, {"d": [-1, 0, 1]}),
    ("single_gate", {"min": 0, "max": 3}, {"x": range(-2, 6)}, {"open": [False, True]}),
    ("win_by_assume_violation", {"min": 0, "max": 2}, {"x": range(-2, 5)}, {}),
    ("fetch1d", {"max": 2}, {"x": range(-1, 4), "t": range(-1, 4)}, {"n": range(0, 3)}),
]


@pytest.mark.parametrize("name,params,states,inputs", CASES,
                         ids=[f"{c[0]}-{'-'.join(map(str, c[1].values()))}" for c in CASES])
def test_winning_region_matches_explicit_oracle(session, name, params, states, inputs):
    cspec = _concrete(name, **params)
    its = solve_fixpoint(session, cspec)
    assert not isinstance(its, Unrealizable)
    _region_matches(its.inv, cspec, *_boxes(cspec, states, inputs))


def test_intro_inv_is_box(session):
    cspec = _concrete("intro", min=0, max=2)
    its = solve_fixpoint(session, cspec)
    assert T.to_text(its.inv) == "x >= 0 && x <= 2"


def test_coax(session):
    cspec = _concrete("intro", min=0, max=2)
    x = cspec.states[0]
    # every wind can be compensated when the target is three cells wide
    r = coax(session, cspec, T.and_(T.ge(T.var(x), T.const(0)), T.le(T.var(x), T.const(2))))
    assert session.equivalent(r, T.and_(T.ge(T.var(x), T.const(0)), T.le(T.var(x), T.const(2))))


def test_strategy_is_closed_and_deadlock_free(session):
    cspec = _concrete("intro", min=-1, max=2)
    system = synthesize_concrete(session, cspec)
    assert isinstance(system, ConcreteSystem)
    assert deadlock_free(session, system)
    x, d = cspec.states[0], cspec.inputs[0]
    for j, sub in enumerate(system.substrategies):
        for xv in range(-1, 3):
            for dv in (-1, 0, 1):
                env = {x: xv, d: dv}
                if not T.evaluate(active_region(cspec, j), env):
                    continue
                k = next(k for k, g in sub if T.evaluate(g, env))
                nxt = T.evaluate(cspec.update(k)[x], env)
                assert -1 <= nxt <= 2


def test_unsatisfiable_goal_is_unrealizable(session):
    spec = bench_spec("intro")
    spec = with_guarantees(spec, list(spec.guarantees) +
                           [T.gt(T.var(spec.states[0]), T.var(spec.params[1]))])
    cspec = instantiate(spec, {spec.params[0]: 0, spec.params[1]: 2})
    res = solve_fixpoint(session, cspec)
    assert isinstance(res, Unrealizable)
    assert res.initial_state
