"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line
that is printed in the terminal summary."""

import itertools
import json
import time

import pytest

from paramsynth import term as T
from paramsynth.antiunify import anti_unify
from paramsynth.bench import run_suite
from paramsynth.cli import main
from paramsynth.driver import REALIZABLE, UNREALIZABLE, RunConfig, Synthesizer, parameterized_synthesis
from paramsynth.generalize import generalize_expr
from paramsynth.gr1 import solve_fixpoint
from paramsynth.simulate import sample_params, simulate
from paramsynth.smt import SolverSession
from paramsynth.spec import format_params, instantiate, param_key, with_guarantees
from paramsynth.verify import Consistent, Counterexample, RankingPair, Witness, check_consistency

import test_properties as props
from conftest import ACCEPTANCE_LINES, BENCH, bench_spec
from helpers import a, p, t, x, y
from oracles import explicit_winning_region


def report(cid: int, ok: bool, detail: str):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {cid}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_c1_anti_unify_shared_hole():
    es = [t("x <= 1 && y <= 1"), t("x <= 2 && y <= 2")]
    anti_unify(es)
    best = float("inf")
    for _ in range(50):
        t0 = time.perf_counter()
        r = anti_unify(es)
        best = min(best, time.perf_counter() - t0)
    h = r.holes[0] if len(r.holes) == 1 else None
    ok = (h is not None
          and r.generalizer == T.and_(T.le(T.var(x), T.var(h)), T.le(T.var(y), T.var(h)))
          and [s[h] for s in r.substitutions] == [T.const(1), T.const(2)]
          and best < 1e-3)
    report(1, ok, f"anti-unify gives {T.to_text(r.generalizer)} with "
                  f"{[T.to_text(s[h]) for s in r.substitutions] if h else '?'} "
                  f"in {best * 1e3:.3f} ms (limit 1 ms)")


def test_c2_generalize_with_case_split(session):
    inst = {2: t("a >= 2 && a <= 4"), 1: t("a >= 1 && a <= 3"),
            -2: t("a <= -2 || a >= 0"), -3: t("a <= -3 || a >= -1")}
    t0 = time.monotonic()
    g = generalize_expr(inst, [p], states=[a], session=session)
    dt = time.monotonic() - t0
    expected = t("ite(p >= 1, a >= p && a <= p + 2, a <= p || a >= p + 2)")
    at_values = all(session.equivalent(T.instantiate_params(g, {p: v}), e)
                    for v, e in inst.items())
    valid = all(session.is_valid(T.iff(T.instantiate_params(g, {p: v}),
                                       T.instantiate_params(expected, {p: v})))
                for v in (-3, -2, 1, 2))
    report(2, at_values and valid and dt < 30,
           f"generalize gives {T.to_text(g)}; matches instances {at_values}, "
           f"equivalent to the expected split at p in {{-3,-2,1,2}} {valid}, "
           f"{dt:.2f}s (limit 30s)")


def test_c3_generalize_similar(session):
    inst = {2: t("x >= 2 && 2 >= y"), 3: t("y < 4 && x >= 3")}
    t0 = time.monotonic()
    g = generalize_expr(inst, [p], states=[x, y], session=session)
    dt = time.monotonic() - t0
    ok = session.equivalent(g, t("x >= p && y <= p"))
    report(3, ok and dt < 10, f"generalize gives {T.to_text(g)}; equivalent to "
                              f"x >= p && y <= p {ok}, {dt:.2f}s (limit 10s)")


def test_c4_concrete_fixpoint_against_oracle(session):
    spec = bench_spec("intro")
    cspec = instantiate(spec, {spec.params[0]: 0, spec.params[1]: 2})
    xv, dv = cspec.states[0], cspec.inputs[0]
    t0 = time.monotonic()
    its = solve_fixpoint(session, cspec)
    dt = time.monotonic() - t0
    inv_ok = session.equivalent(its.inv, T.and_(T.ge(T.var(xv), T.const(0)),
                                                T.le(T.var(xv), T.const(2))))
    oracle = explicit_winning_region(cspec, {xv: range(-2, 5)}, {dv: [-1, 0, 1]})
    agree = all(bool(T.evaluate(its.inv, {xv: v})) == ((v,) in oracle) for v in range(-2, 5))
    report(4, inv_ok and agree and dt < 60,
           f"intro at (0,2) invariant {T.to_text(its.inv)}; equals 0<=x<=2 {inv_ok}, "
           f"explicit oracle agrees on x in [-2,4] {agree}, {dt:.2f}s (limit 60s)")


def test_c5_synth_intro(tmp_path, capsys):
    spec_path = str(BENCH / "intro.spec")
    prog, wit = tmp_path / "intro.prog", tmp_path / "intro.wit"
    t0 = time.monotonic()
    code = main(["synth", spec_path, "--json", "--emit-program", str(prog),
                 "--emit-witness", str(wit)])
    dt = time.monotonic() - t0
    out = json.loads(capsys.readouterr().out)
    checked = main(["check", str(prog), str(wit), spec_path]) if code == 0 else None
    capsys.readouterr()
    used = len(out["params_used"])
    ok = code == 0 and out["status"] == REALIZABLE and used <= 6 and dt < 300 and checked == 0
    report(5, ok, f"synth intro {out['status']} with |P'| = {used} (limit 6) in {dt:.1f}s "
                  f"(limit 300s); check exit code {checked}")


def test_c6_benchmarks_and_simulation():
    rows = run_suite(None, RunConfig(timeout=600))
    solved, problems = 0, []
    with SolverSession() as s:
        for row in rows:
            res = row.result
            if res.status != REALIZABLE or res.wall_time > 600:
                problems.append(f"{row.name}: {res.status} ({res.reason})")
                continue
            spec = bench_spec(row.name.replace(" ", "_"))
            if not isinstance(check_consistency(s, spec, res.program, res.witness), Consistent):
                problems.append(f"{row.name}: witness fails check")
                continue
            bad_runs = 0
            for k, pv in enumerate(sample_params(spec, 10, seed=7)):
                sim = simulate(spec, res.program, pv, 1000, "random", res.witness, seed=k,
                               session=s)
                if not sim.ok or sim.steps != 1000:
                    bad_runs += 1
                    problems.append(f"{row.name} at {format_params(spec, pv)}: "
                                    f"{sim.deadlocks} deadlocks, {len(sim.disallowed)} "
                                    f"disallowed, {len(sim.left_invariant)} invariant exits")
            if not bad_runs:
                solved += 1
    summary = ", ".join(f"{r.name} {r.result.status} {r.result.wall_time:.1f}s"
                        for r in rows)
    report(6, solved >= 5 and not problems,
           f"{solved}/{len(rows)} benchmarks realizable, checked and simulated cleanly "
           f"(10 valuations x 1000 steps each; need 5): {summary}"
           + (f"; problems: {'; '.join(problems)}" if problems else ""))


def test_c7_counterexample_for_weak_ranking(session):
    spec = bench_spec("intro")
    synth = Synthesizer(spec, session=session)
    known = [{spec.params[0]: 0, spec.params[1]: 2}, {spec.params[0]: 1, spec.params[1]: 3}]
    for pv in known:
        synth.systems[param_key(spec, pv)] = synth.concrete(pv)
    program, inv = synth.generalize_system()
    r = T.var(spec.states[0])
    verdict = check_consistency(session, spec, program,
                                Witness(inv, [RankingPair(r)] * spec.n), known)
    ok = (isinstance(verdict, Counterexample)
          and param_key(spec, verdict.params) not in {(0, 2), (1, 3)}
          and any(n.startswith("rank-nonnegative") for n in verdict.violated))
    detail = (f"counterexample {format_params(spec, verdict.params)} violating "
              f"{', '.join(verdict.violated)}" if isinstance(verdict, Counterexample)
              else "no counterexample")
    report(7, ok, f"ranking r = x on the two-instance intro system: {detail}")


def test_c8_unsatisfiable_goal(session):
    spec = bench_spec("intro")
    xv, mx = spec.states[0], spec.params[1]
    spec = with_guarantees(spec, list(spec.guarantees) + [T.gt(T.var(xv), T.var(mx))])
    t0 = time.monotonic()
    res = parameterized_synthesis(spec, RunConfig(timeout=120), session)
    dt = time.monotonic() - t0
    report(8, res.status == UNREALIZABLE and dt < 120,
           f"intro with GF x > max gives {res.status} ({res.reason}) in {dt:.2f}s "
           f"(limit 120s)")


def test_c9_property_suites(session):
    t0 = time.monotonic()
    failures = []
    suites = [
        ("1000 random terms", lambda: props.test_random_terms_substitution_and_normalization()),
        ("500 anti-unify pairs", lambda: props.test_anti_unify_reconstruction_and_minimality()),
        ("50 planted synthesis problems",
         lambda: [props.test_planted_func_synth(session, k) for k in range(50)]),
        ("100 qe formulas", lambda: props.test_qe_against_brute_force(session)),
    ]
    for name, run in suites:
        try:
            run()
        except Exception as e:  # report every suite, not only the first failure
            failures.append(f"{name}: {type(e).__name__}")
    dt = time.monotonic() - t0
    report(9, not failures and dt < 300,
           f"property suites ({', '.join(n for n, _ in suites)}) "
           f"{'all pass' if not failures else 'failed: ' + '; '.join(failures)} "
           f"in {dt:.1f}s (limit 300s)")
