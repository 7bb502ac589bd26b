from paramsynth import term as T
from paramsynth.driver import REALIZABLE, Synthesizer
from paramsynth.spec import param_key
from paramsynth.verify import (Consistent, Counterexample, ParamSystem, RankingPair, Witness,
                               all_clauses, build_phi_inv, build_phi_rank, check_consistency,
                               effective_guards)

from conftest import bench_spec


def test_effective_guards_first_match():
    x = bench_spec("minimal").states[0]
    g = effective_guards([(0, T.le(T.var(x), T.const(0))), (1, T.TRUE)])
    assert [k for k, _ in g] == [0, 1]
    assert T.evaluate(g[0][1], {x: 0}) and not T.evaluate(g[1][1], {x: 0})
    assert T.evaluate(g[1][1], {x: 1})


def test_clause_names(intro_result):
    spec, res = intro_result
    inv_names = [c.name for c in build_phi_inv(spec, res.program, res.witness.inv)]
    rank_names = [c.name for c in build_phi_rank(spec, res.program, res.witness.inv,
                                                  res.witness.ranking)]
    assert "initial" in inv_names
    assert any(n.startswith("inductive[") for n in inv_names)
    assert any(n.startswith("deadlock-free[") for n in inv_names)
    assert any(n.startswith("rank-nonnegative[") for n in rank_names)
    assert any(n.startswith("rank-decrease[") for n in rank_names)
    assert len(all_clauses(spec, res.program, res.witness)) == len(inv_names) + len(rank_names)


def test_synthesized_witness_is_consistent(session, intro_result):
    spec, res = intro_result
    assert res.status == REALIZABLE
    assert isinstance(check_consistency(session, spec, res.program, res.witness), Consistent)


def test_wrong_invariant_is_caught(session, intro_result):
    spec, res = intro_result
    x = spec.states[0]
    weak = Witness(T.TRUE, res.witness.ranking)
    verdict = check_consistency(session, spec, res.program, weak)
    assert isinstance(verdict, Counterexample)
    assert any(n.startswith("inductive") or n.startswith("allowed") or n == "initial"
               for n in verdict.violated)
    bad_rank = Witness(res.witness.inv, [RankingPair(T.var(x))] * spec.n)
    verdict = check_consistency(session, spec, res.program, bad_rank)
    assert isinstance(verdict, Counterexample)


def test_empty_program_deadlocks(session):
    spec = bench_spec("minimal")
    system = ParamSystem(spec, [[(k, T.FALSE) for k in range(3)] for _ in range(spec.n)])
    x = spec.states[0]
    w = Witness(T.TRUE, [RankingPair(T.var(x))] * spec.n)
    verdict = check_consistency(session, spec, system, w)
    assert isinstance(verdict, Counterexample)
    assert any(n.startswith("deadlock-free") for n in verdict.violated)


def test_counterexample_avoids_known_and_is_small(session):
    spec = bench_spec("intro")
    synth = Synthesizer(spec, session=session)
    known = [{spec.params[0]: 0, spec.params[1]: 2}, {spec.params[0]: 1, spec.params[1]: 3}]
    for pv in known:
        synth.systems[param_key(spec, pv)] = synth.concrete(pv)
    program, inv = synth.generalize_system()
    x = spec.states[0]
    w = Witness(inv, [RankingPair(T.var(x))] * spec.n)
    verdict = check_consistency(session, spec, program, w, known)
    assert isinstance(verdict, Counterexample)
    assert param_key(spec, verdict.params) not in {(0, 2), (1, 3)}
    assert sum(abs(v) for v in verdict.params.values()) <= 4
