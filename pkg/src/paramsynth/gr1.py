"""Symbolic GR(1) solving for concrete (parameter-free) specifications.

The winning region is computed with the usual triply nested fixpoint over
SMT formulas; quantifiers over inputs are removed by the solver.  Justice
assumptions may mention inputs: in the innermost fixpoint an input
satisfying assumption ``i`` must lead to progress, any other input may keep
the play inside the current set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import term as T
from .smt import SolverSession
from .spec import ConcreteSpec
from .term import FALSE, TRUE, Sort, Term, Var

log = logging.getLogger(__name__)

OUTER_CAP = 64
MIDDLE_CAP = 256
INNER_CAP = 256


class FixpointCapReached(Exception):
    """An iteration cap was hit; the outcome is unknown."""


@dataclass
class StrategyIterates:
    inv: Term
    mY: list[list[Term]]            # [j][r]
    mX: list[list[list[Term]]]      # [j][r][i]


@dataclass
class Unrealizable:
    inv: Term
    initial_state: dict[Var, object] = field(default_factory=dict)


@dataclass
class ConcreteSystem:
    """Per guarantee j a list of (action index, guard), first match wins."""
    spec: ConcreteSpec
    inv: Term
    substrategies: list[list[tuple[int, Term]]]
    contexts: list[list[Term]]
    priority: list[list[int]]

    @property
    def valuation(self):
        return self.spec.valuation


# ------------------------------------------------------------ predecessors

def _post_some(cspec: ConcreteSpec, target: Term) -> Term:
    """Some action is enabled and leads into ``target``."""
    disj = []
    for k in range(len(cspec.actions)):
        succ = T.replace_vars(target, {x: u for x, u in cspec.update(k).items()})
        disj.append(T.and_(cspec.guard(k), succ))
    return T.or_(*disj)


def _for_all_inputs(session: SolverSession, cspec: ConcreteSpec, body: Term) -> Term:
    f = T.implies(cspec.env_trans, body)
    if cspec.inputs:
        f = T.forall(cspec.inputs, f)
    return session.qe(f)


def coax(session: SolverSession, cspec: ConcreteSpec, target: Term) -> Term:
    """States from which, for every admissible input, some enabled action
    leads into ``target``."""
    return _for_all_inputs(session, cspec, _post_some(cspec, target))


def wp(S: Term, k: int, cspec: ConcreteSpec) -> Term:
    """Inputs/states for which action ``k`` is enabled and leads into S."""
    succ = T.replace_vars(S, dict(cspec.update(k)))
    return T.implies(cspec.env_trans, T.and_(cspec.guard(k), succ))


# ------------------------------------------------------------------ fixpoint

def _simp(session, t: Term) -> Term:
    t = T.normalize(t)
    if t.is_const:
        return t
    return session.simplify_with_context(t, TRUE)


def _tidy(session, t: Term, states) -> Term:
    """Prefer the plain box form of a region when it is one."""
    if t.is_const or any(v.sort is not Sort.INT for v in states):
        return t
    box = session.box_hull(t, states)
    return box if box is not None and T.node_count(box) <= T.node_count(t) else t


def _same(session, a: Term, b: Term) -> bool:
    return a == b or session.equivalent(a, b)


def solve_fixpoint(session: SolverSession, cspec: ConcreteSpec):
    """Winning region and the intermediate iterates of the last outer pass,
    or ``Unrealizable`` when some initial state is losing."""
    n, m = cspec.n, cspec.m
    goals = [T.normalize(g) for g in cspec.guarantees]
    assumptions = [T.normalize(e) for e in cspec.assumptions]
    inv = TRUE
    for _outer in range(OUTER_CAP):
        start_inv = inv
        mY: list[list[Term]] = []
        mX: list[list[list[Term]]] = []
        for j in range(n):
            ys, xs = [], []
            y = FALSE
            goal_part = _simp(session, T.and_(goals[j], coax(session, cspec, inv)))
            for _middle in range(MIDDLE_CAP):
                start = _simp(session, T.or_(goal_part, coax(session, cspec, y)))
                if m == 0:
                    y_new = start
                    xs.append([])
                else:
                    y_new = FALSE
                    level = []
                    progress = _post_some(cspec, y)
                    for i in range(m):
                        x = inv
                        for _inner in range(INNER_CAP):
                            stay = _post_some(cspec, x)
                            body = T.or_(progress, T.and_(T.not_(assumptions[i]), stay))
                            x_new = _simp(session, T.or_(start, _for_all_inputs(session, cspec, body)))
                            if _same(session, x_new, x):
                                break
                            x = x_new
                        else:
                            raise FixpointCapReached("inner fixpoint cap reached")
                        level.append(x)
                        y_new = T.or_(y_new, x)
                    y_new = _simp(session, y_new)
                    xs.append(level)
                ys.append(y_new)
                if _same(session, y_new, y):
                    break
                y = y_new
            else:
                raise FixpointCapReached("middle fixpoint cap reached")
            mY.append(ys)
            mX.append(xs)
            inv = y
        if _same(session, inv, start_inv):
            inv = _tidy(session, inv, cspec.states)
            its = StrategyIterates(inv, mY, mX)
            bad = session.model(cspec.initial, T.not_(inv), get=cspec.states)
            if bad is not None:
                return Unrealizable(inv, bad)
            return its
    raise FixpointCapReached("outer fixpoint cap reached")


# ---------------------------------------------------------------- extraction

def _exact(levels: list[Term], r: int) -> Term:
    return levels[r] if r == 0 else T.and_(levels[r], T.not_(levels[r - 1]))


def strategy_guards(cspec: ConcreteSpec, its: StrategyIterates, j: int):
    """Unsimplified guards per action for substrategy ``j``.

    goal:     at a goal state, any move that stays winning;
    progress: move from rank r into a lower rank;
    stay:     remain in the current inner set while its assumption is absent,
              only when no progress move exists.
    """
    ys, xs = its.mY[j], its.mX[j]
    acts = range(len(cspec.actions))
    assumptions = list(cspec.assumptions)
    goal = T.normalize(cspec.guarantees[j])
    progress = {}
    stay = {}
    for k in acts:
        prog = [T.and_(_exact(ys, r), wp(ys[r - 1], k, cspec)) for r in range(1, len(ys))]
        progress[k] = T.or_(*prog)
        st = []
        for r, level in enumerate(xs):
            below = ys[r - 1] if r > 0 else FALSE
            for i, xi in enumerate(level):
                earlier = T.or_(below, *level[:i])
                st.append(T.and_(xi, T.not_(earlier), T.not_(assumptions[i]), wp(xi, k, cspec)))
        stay[k] = T.or_(*st)
    any_progress = T.or_(*progress.values())
    out = {}
    for k in acts:
        g1 = T.and_(goal, wp(its.inv, k, cspec))
        out[k] = T.or_(g1, progress[k], T.and_(stay[k], T.not_(any_progress)))
    return out, progress


def active_region(cspec: ConcreteSpec, j: int) -> Term:
    """States in which substrategy j can be in charge: its goal is not yet
    reached, or the previous goal was just reached (counter advanced)."""
    n = cspec.n
    if n == 1:
        return TRUE
    return T.or_(T.not_(cspec.guarantees[j]), cspec.guarantees[(j - 1) % n])


def _count_models(session, formula: Term, vs, cap: int = 40) -> int:
    if any(v.sort is Sort.REAL for v in vs):
        return 0
    blocked = []
    count = 0
    while count < cap:
        model = session.model(formula, *blocked, get=vs)
        if model is None:
            break
        count += 1
        blocked.append(T.not_(T.and_(*(T.eq(T.var(v), T.const(model[v], v.sort))
                                       if v.sort is not Sort.BOOL else
                                       (T.var(v) if model[v] else T.not_(T.var(v)))
                                       for v in vs))))
    return count


def action_priority(session, cspec: ConcreteSpec, its: StrategyIterates) -> list[list[int]]:
    """Per substrategy, actions ordered by how many progress moves they offer
    (ties keep the specification order)."""
    out = []
    vs = list(cspec.states) + list(cspec.inputs)
    for j in range(cspec.n):
        _, progress = strategy_guards(cspec, its, j)
        base = T.and_(its.inv, cspec.env_trans, active_region(cspec, j))
        counts = {k: _count_models(session, T.and_(base, g), vs) for k, g in progress.items()}
        out.append(sorted(counts, key=lambda k: (-counts[k], k)))
    return out


def extract_strategy(session: SolverSession, cspec: ConcreteSpec, its: StrategyIterates,
                     layout: list[list[int]] | None = None) -> ConcreteSystem:
    """Prioritized guards per substrategy.

    Actions are ranked per instance (``action_priority``) and each guard is
    made exclusive: it fires only where no higher-ranked action does.  The
    guards are then listed in ``layout`` order (default: the ranking) and
    simplified under the region not covered by earlier guards; exclusivity
    makes the listing order irrelevant to behavior."""
    priority = action_priority(session, cspec, its)
    if layout is None:
        layout = priority
    subs, ctxs = [], []
    for j in range(cspec.n):
        raw, _ = strategy_guards(cspec, its, j)
        exclusive = {}
        for pos, k in enumerate(priority[j]):
            exclusive[k] = T.and_(raw[k], *(T.not_(raw[e]) for e in priority[j][:pos]))
        base = T.and_(its.inv, cspec.env_trans, active_region(cspec, j))
        taken = []
        chosen, contexts = [], []
        for k in layout[j]:
            ctx = T.normalize(T.and_(base, *(T.not_(g) for g in taken)))
            g = session.simplify_with_context(T.normalize(exclusive[k]), ctx)
            contexts.append(ctx)
            chosen.append((k, g))
            taken.append(g)
        subs.append(chosen)
        ctxs.append(contexts)
    return ConcreteSystem(cspec, its.inv, subs, ctxs, priority)


def deadlock_free(session, system: ConcreteSystem) -> bool:
    cspec = system.spec
    for j, sub in enumerate(system.substrategies):
        none = T.and_(system.inv, cspec.env_trans, active_region(cspec, j),
                      *(T.not_(g) for _, g in sub))
        if session.is_sat(none):
            return False
    return True


def synthesize_concrete(session, cspec: ConcreteSpec, layout=None):
    its = solve_fixpoint(session, cspec)
    if isinstance(its, Unrealizable):
        return its
    return extract_strategy(session, cspec, its, layout)
