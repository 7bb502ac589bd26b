from paramsynth import term as T
from paramsynth.driver import (REALIZABLE, UNKNOWN, UNREALIZABLE, RunConfig,
                               parameterized_synthesis, select_initial_params)
from paramsynth.spec import admits, param_key, with_guarantees

from conftest import bench_spec


def test_initial_params_smallest_admissible():
    spec = bench_spec("intro")
    p = select_initial_params(spec)
    assert admits(spec, p)
    assert param_key(spec, p) == (0, 2)
    assert param_key(bench_spec("minimal"), select_initial_params(bench_spec("minimal"))) == (1,)


def test_realizable_result_fields(intro_result):
    spec, res = intro_result
    assert res.status == REALIZABLE and res.exit_code == 0
    assert res.iterations == len(res.params_used)
    assert all(admits(spec, p) for p in res.params_used)
    assert len({param_key(spec, p) for p in res.params_used}) == len(res.params_used)


def test_unrealizable_reports_losing_params(session):
    spec = bench_spec("minimal")
    x = spec.states[0]
    spec = with_guarantees(spec, list(spec.guarantees) + [T.lt(T.var(x), T.const(0))])
    res = parameterized_synthesis(spec, RunConfig(timeout=60), session)
    assert res.status == UNREALIZABLE and res.exit_code == 1
    assert res.losing_params is not None


def test_timeout_is_unknown(session):
    res = parameterized_synthesis(bench_spec("distinct_strategies"), RunConfig(timeout=0.01),
                                  session)
    assert res.status == UNKNOWN and res.reason == "timeout" and res.exit_code == 2


def test_iteration_limit_is_unknown(session):
    res = parameterized_synthesis(bench_spec("distinct_strategies"), RunConfig(max_iter=1),
                                  session)
    assert res.status == UNKNOWN and res.exit_code == 2
