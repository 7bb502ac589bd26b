import pytest

from paramsynth import term as T
from paramsynth.sygus import (Application, SynthesisFailure, SynthProblem, Unknown,
                              enumerate_terms, func_synth, hole_grammar, hole_var,
                              interpolant_grammar, ranking_grammar)
from paramsynth.term import Kind, Sort, Var

from helpers import p, q, x


def _fit_problem(grammar, formals, cases):
    """Unknown f with f(args) = value for each (args, value) case."""
    apps, conj = [], []
    for k, (args, value) in enumerate(cases):
        ph = Var(f"_c{k}", Kind.BOUND, Sort.INT)
        apps.append(Application(ph, "f", {v: T.const(args[v]) for v in formals}))
        conj.append(T.eq(T.var(ph), T.const(value)))
    return SynthProblem([Unknown("f", grammar, tuple(formals))], T.and_(*conj), apps)


def test_enumeration_is_size_ordered():
    g = hole_grammar([p], [], [], Sort.INT)
    sizes = [T.node_count(e) for e, _ in enumerate_terms(g, [{p: 0}], 3)]
    assert sizes == sorted(sizes)


def test_enumeration_prunes_equivalent_vectors():
    g = hole_grammar([p], [], [], Sort.INT)
    pts = [{p: v} for v in range(-2, 3)]
    vecs = [vec for _, vec in enumerate_terms(g, pts, 5)]
    assert len(vecs) == len(set(vecs))


def test_ground_fit(session):
    g = hole_grammar([p, q], [], [], Sort.INT)
    cases = [({p: 1, q: 2}, 4), ({p: 3, q: 0}, 4), ({p: 0, q: 0}, 1)]
    sol = func_synth(_fit_problem(g, [p, q], cases), session, max_size=7)["f"]
    for args, value in cases:
        assert T.evaluate(sol, args) == value


def test_universal_constraint_uses_cegis(session):
    # f(x) >= x and f(x) >= -x for all x, with f from the ranking grammar
    g = ranking_grammar([], [x])
    ph1 = Var("_r", Kind.BOUND, Sort.INT)
    constraint = T.and_(T.ge(T.var(ph1), T.var(x)), T.ge(T.var(ph1), T.neg(T.var(x))))
    problem = SynthProblem([Unknown("f", g, (x,))], constraint,
                           [Application(ph1, "f", {x: T.var(x)})])
    sol = func_synth(problem, session, max_size=8)["f"]
    assert session.is_valid(T.and_(T.ge(sol, T.var(x)), T.ge(sol, T.neg(T.var(x)))))


def test_failure_when_grammar_too_small(session):
    g = hole_grammar([p], [], [], Sort.INT)
    cases = [({p: 0}, 7), ({p: 1}, -5), ({p: 2}, 13)]
    with pytest.raises(SynthesisFailure):
        func_synth(_fit_problem(g, [p], cases), session, max_size=3, timeout=5)


def test_interpolant_grammar_terms_are_boolean():
    g = interpolant_grammar([p], [0, 1])
    for e, _ in enumerate_terms(g, [{p: 0}, {p: 1}], 5):
        assert e.sort is Sort.BOOL


def test_hole_var():
    h = hole_var("h", Sort.INT)
    assert h.kind is Kind.HOLE and str(h) == "?h"
