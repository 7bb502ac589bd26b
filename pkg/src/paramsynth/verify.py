"""Proof obligations for parameterized controllers.

A controller is proven correct by an invariant (safety, no deadlocks) and,
per guarantee, a ranking function r with an assumption selector l: every
step of the substrategy in charge keeps r from increasing, and a step on
which the selected assumption holds makes r decrease.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import term as T
from .gr1 import ConcreteSystem
from .smt import SolverSession
from .spec import ParamSpec
from .sygus import (Application, SynthesisFailure, SynthProblem, Unknown, func_synth,
                    ranking_grammar, selector_grammar)
from .term import TRUE, Kind, Sort, Term, Var

log = logging.getLogger(__name__)


@dataclass
class ParamSystem:
    """A controller: per guarantee j, prioritized (action index, guard) pairs.

    Guards range over parameters, states and inputs.  With counter value j,
    substrategy j acts unless guarantee j holds, in which case control passes
    to substrategy j+1 (cyclically) for this step already."""
    spec: ParamSpec
    substrategies: list[list[tuple[int, Term]]]

    @property
    def n(self) -> int:
        return len(self.substrategies)


@dataclass
class RankingPair:
    r: Term
    l: Term = field(default_factory=lambda: T.const(1))


@dataclass
class Witness:
    inv: Term
    ranking: list[RankingPair]


@dataclass
class Consistent:
    pass


@dataclass
class Counterexample:
    params: dict[Var, int]
    violated: list[str]


@dataclass
class Clause:
    name: str
    formula: Term


# ----------------------------------------------------------------- clauses

def effective_guards(sub: Sequence[tuple[int, Term]]) -> list[tuple[int, Term]]:
    """First-match semantics: a guard fires only when no earlier one does."""
    out, earlier = [], []
    for k, g in sub:
        out.append((k, T.and_(g, *(T.not_(e) for e in earlier))))
        earlier.append(g)
    return out


def _next(t: Term, spec: ParamSpec, k: int) -> Term:
    return T.replace_vars(t, dict(spec.update(k)))


def _same_step(spec: ParamSpec, k: int) -> Term:
    """Some action of the specification allows the step of action k."""
    uk = spec.update(k)
    disj = []
    for a in range(len(spec.actions)):
        ua = spec.update(a)
        eqs = [T.iff(uk[x], ua[x]) if x.sort is Sort.BOOL else T.eq(uk[x], ua[x])
               for x in spec.states if uk[x] != ua[x]]
        disj.append(T.and_(spec.guard(a), *eqs))
    return T.or_(*disj)


def _acting(spec, system: ParamSystem, j: int):
    """(condition, substrategy index) pairs for counter value j."""
    goal = spec.guarantees[j]
    return [(T.not_(goal), j, "stay"), (goal, (j + 1) % system.n, "advance")]


def build_phi_inv(spec: ParamSpec, system: ParamSystem, inv: Term) -> list[Clause]:
    clauses = [Clause("initial", T.implies(spec.initial, inv))]
    for j in range(system.n):
        deadlock = []
        for cond, s, tag in _acting(spec, system, j):
            eff = effective_guards(system.substrategies[s])
            for k, g in eff:
                pre = T.and_(inv, spec.env_trans, cond, g)
                clauses.append(Clause(f"inductive[c={j + 1},{tag},action={k + 1}]",
                                      T.implies(pre, _next(inv, spec, k))))
                clauses.append(Clause(f"allowed[c={j + 1},{tag},action={k + 1}]",
                                      T.implies(pre, _same_step(spec, k))))
            deadlock.append(T.implies(cond, T.or_(*(g for _, g in system.substrategies[s]))))
        clauses.append(Clause(f"deadlock-free[c={j + 1}]",
                              T.implies(T.and_(inv, spec.env_trans), T.and_(*deadlock))))
    return clauses


def build_phi_rank(spec: ParamSpec, system: ParamSystem, inv: Term,
                   ranking: Sequence[RankingPair]) -> list[Clause]:
    m = spec.m
    clauses = []
    for j in range(system.n):
        r, l = ranking[j].r, ranking[j].l
        clauses.append(Clause(f"rank-nonnegative[c={j + 1}]", T.implies(inv, T.ge(r, T.const(0)))))
        if m >= 2:
            clauses.append(Clause(f"selector-range[c={j + 1}]", T.implies(
                inv, T.and_(T.ge(l, T.const(1)), T.le(l, T.const(m))))))
        goal = spec.guarantees[j]
        for k, g in effective_guards(system.substrategies[j]):
            pre = T.and_(inv, T.not_(goal), spec.env_trans, g)
            r_next = _next(r, spec, k)
            if m == 0:
                fair = TRUE
            elif m == 1:
                fair = spec.assumptions[0]
            else:
                fair = T.or_(*(T.and_(T.eq(l, T.const(i + 1)), e)
                               for i, e in enumerate(spec.assumptions)))
            clauses.append(Clause(f"rank-decrease[c={j + 1},action={k + 1}]",
                                  T.implies(T.and_(pre, fair), T.gt(r, r_next))))
            clauses.append(Clause(f"rank-nonincrease[c={j + 1},action={k + 1}]",
                                  T.implies(pre, T.ge(r, r_next))))
            if m >= 2:
                clauses.append(Clause(f"selector-order[c={j + 1},action={k + 1}]", T.implies(
                    T.and_(pre, T.eq(r, r_next)), T.ge(l, _next(l, spec, k)))))
    return clauses


def all_clauses(spec, system, witness: Witness) -> list[Clause]:
    return build_phi_inv(spec, system, witness.inv) + \
        build_phi_rank(spec, system, witness.inv, witness.ranking)


# ------------------------------------------------------------ consistency

def _abs_sum(params: Sequence[Var]) -> Term:
    return T.add(*(T.abs_(T.var(v)) for v in params)) if params else T.const(0)


def _exclude(params: Sequence[Var], points: Sequence[Mapping[Var, int]]) -> Term:
    return T.and_(*(T.not_(T.and_(*(T.eq(T.var(v), T.const(int(p[v]))) for v in params)))
                    for p in points))


def check_consistency(session: SolverSession, spec: ParamSpec, system: ParamSystem,
                      witness: Witness, known: Sequence[Mapping[Var, int]] = ()):
    """``Consistent`` if the witness proves the controller for every admissible
    parameter valuation; otherwise a ``Counterexample`` with small parameter
    values (preferring values outside ``known``) and the violated clauses."""
    clauses = all_clauses(spec, system, witness)
    broken = T.or_(*(T.not_(c.formula) for c in clauses))
    params = list(spec.params)
    base = [spec.param_constraint, broken]
    for attempt in ([_exclude(params, known)], []):
        if not params:
            model = session.model(*base, *attempt, get=[])
            if model is None:
                continue
            return Counterexample({}, _violated(session, spec, clauses, {}))
        model = session.model(*base, *attempt, get=params)
        if model is None:
            continue
        p = _minimize(session, params, base + attempt, {v: int(model[v]) for v in params})
        return Counterexample(p, _violated(session, spec, clauses, p))
    return Consistent()


def _minimize(session, params, assertions, p):
    """Binary search on the sum of absolute parameter values."""
    cost = _abs_sum(params)
    hi = sum(abs(p[v]) for v in params)
    lo = 0
    best = p
    while lo < hi:
        mid = (lo + hi) // 2
        model = session.model(*assertions, T.le(cost, T.const(mid)), get=params)
        if model is None:
            lo = mid + 1
        else:
            best = {v: int(model[v]) for v in params}
            hi = sum(abs(best[v]) for v in params)
    return best


def _violated(session, spec, clauses, p) -> list[str]:
    return [c.name for c in clauses
            if session.is_sat(T.not_(T.instantiate_params(c.formula, p)))]


# ----------------------------------------------------------------- ranking

def _concrete_rank_constraint(cs: ConcreteSystem, j: int, r_app, l_app, m: int) -> Term:
    """Ranking clauses for substrategy j of one concrete system; ``r_app(kind)``
    returns the placeholder for r at the current (None) or next state."""
    spec = cs.spec
    inv = cs.inv
    parts = [T.implies(inv, T.ge(r_app(None), T.const(0)))]
    if m >= 2:
        parts.append(T.implies(inv, T.and_(T.ge(l_app(None), T.const(1)),
                                           T.le(l_app(None), T.const(m)))))
    goal = spec.guarantees[j]
    for k, g in effective_guards(cs.substrategies[j]):
        pre = T.and_(inv, T.not_(goal), spec.env_trans, g)
        r, rn = r_app(None), r_app(k)
        if m == 0:
            fair = TRUE
        elif m == 1:
            fair = spec.assumptions[0]
        else:
            fair = T.or_(*(T.and_(T.eq(l_app(None), T.const(i + 1)), e)
                           for i, e in enumerate(spec.assumptions)))
        parts.append(T.implies(T.and_(pre, fair), T.gt(r, rn)))
        parts.append(T.implies(pre, T.ge(r, rn)))
        if m >= 2:
            parts.append(T.implies(T.and_(pre, T.eq(r, rn)), T.ge(l_app(None), l_app(k))))
    return T.and_(*parts)


def synthesize_ranking(session: SolverSession, spec: ParamSpec, systems: Sequence[ConcreteSystem],
                       j: int, timeout: float = 60.0, max_size: int = 12,
                       seed: int = 0) -> RankingPair:
    """Ranking function (and selector) for substrategy j valid on every given
    concrete system.  Raises ``SynthesisFailure`` when none is found."""
    m = spec.m
    formals = tuple(spec.params) + tuple(spec.states)
    unknowns = [Unknown("r", ranking_grammar(spec.params, spec.states), formals)]
    if m >= 2:
        unknowns.append(Unknown("l", selector_grammar(spec.params, spec.states, m), formals))
    apps: list[Application] = []
    conj = []
    for n, cs in enumerate(systems):
        val = T.valuation_terms(cs.valuation)
        cache: dict[tuple, Term] = {}

        def app(name, k, n=n, cs=cs, val=val, cache=cache):
            key = (name, k)
            if key not in cache:
                ph = Var(f"_{name}{n}_{'x' if k is None else k}", Kind.BOUND, Sort.INT)
                actuals = dict(val)
                upd = cs.spec.update(k) if k is not None else {}
                for x in spec.states:
                    actuals[x] = upd.get(x, T.var(x))
                apps.append(Application(ph, name, actuals))
                cache[key] = T.var(ph)
            return cache[key]

        conj.append(_concrete_rank_constraint(cs, j, lambda k: app("r", k),
                                              lambda k: app("l", k), m))
    problem = SynthProblem(unknowns, T.and_(*conj), apps)
    sol = func_synth(problem, session, max_size=max_size, timeout=timeout, seed=seed)
    return RankingPair(sol["r"], sol.get("l", T.const(1)))

