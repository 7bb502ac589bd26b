"""Run a controller against a sampled environment and watch for violations."""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from . import term as T
from .smt import SolverSession
from .spec import ParamSpec, admits, format_params
from .term import Sort, Var
from .verify import ParamSystem, Witness

POLICIES = ("random", "adversarial")


@dataclass
class SimResult:
    params: dict[Var, int]
    steps: int = 0
    deadlocks: int = 0
    disallowed: list[str] = field(default_factory=list)
    left_invariant: list[str] = field(default_factory=list)
    goal_visits: Counter = field(default_factory=Counter)
    assumption_hits: Counter = field(default_factory=Counter)
    env_stuck: bool = False

    @property
    def ok(self) -> bool:
        return not (self.deadlocks or self.disallowed or self.left_invariant)

    def summary(self, spec: ParamSpec) -> str:
        goals = ", ".join(f"{j + 1}:{self.goal_visits[j]}" for j in range(spec.n))
        lines = [f"params {format_params(spec, self.params)}: {self.steps} steps, "
                 f"{self.deadlocks} deadlocks, {len(self.disallowed)} disallowed moves, "
                 f"{len(self.left_invariant)} invariant exits; goal visits {goals}"]
        if self.env_stuck:
            lines.append("  environment had no admissible input; run stopped")
        lines += [f"  {m}" for m in (self.disallowed + self.left_invariant)[:5]]
        return "\n".join(lines)


class Simulator:
    def __init__(self, spec: ParamSpec, system: ParamSystem, params: Mapping[Var, int],
                 witness: Witness | None = None, policy: str = "random", seed: int = 0,
                 session: SolverSession | None = None):
        if policy not in POLICIES:
            raise ValueError(f"unknown policy {policy}; use one of {', '.join(POLICIES)}")
        if set(params) != set(spec.params):
            missing = [v.name for v in spec.params if v not in params]
            raise ValueError(f"missing parameter values: {', '.join(missing)}")
        if not admits(spec, params):
            raise ValueError(f"parameters {format_params(spec, params)} violate the "
                             "parameter constraint")
        self.spec = spec
        self.system = system
        self.params = {v: int(params[v]) for v in spec.params}
        self.witness = witness
        self.policy = policy
        self.rng = random.Random(seed)
        self.session = session
        scale = max([abs(v) for v in self.params.values()] + [1])
        self.radius = 2 * scale + 3

    # ------------------------------------------------------------ sampling

    def _sample(self, vs, constraint: T.Term, env: dict, tries: int = 60) -> dict | None:
        """Random values for ``vs`` satisfying ``constraint`` under ``env``."""
        for _ in range(tries):
            cand = {v: (self.rng.random() < 0.5) if v.sort is Sort.BOOL
                    else self.rng.randint(-self.radius, self.radius) for v in vs}
            if T.evaluate(constraint, {**env, **cand}):
                return cand
        if self.session is None:
            return None
        fixed = T.instantiate_params(constraint, env)
        model = self.session.model(fixed, get=list(vs))
        if model is None:
            return None
        return {v: model[v] for v in vs}

    def _inputs(self, state: dict, j: int) -> dict | None:
        spec = self.spec
        if not spec.inputs:
            return {}
        env = {**self.params, **state}
        if self.policy == "random":
            return self._sample(spec.inputs, spec.env_trans, env)
        # adversarial: among a few admissible inputs prefer those that avoid
        # the assumptions and keep the ranking high
        cands = [c for c in (self._sample(spec.inputs, spec.env_trans, env, tries=20)
                             for _ in range(8)) if c is not None]
        if not cands:
            return None

        def badness(ins):
            full = {**env, **ins}
            fair = sum(bool(T.evaluate(e, full)) for e in spec.assumptions)
            rank = 0
            if self.witness is not None:
                k = self._choose(full, j)
                if k is not None:
                    nxt = self._step(full, k)
                    r = self.witness.ranking[self._acting(full, j)].r
                    rank = T.evaluate(r, {**self.params, **nxt})
            return (-fair, rank)

        return max(cands, key=badness)

    # ----------------------------------------------------------- controller

    def _acting(self, full: dict, j: int) -> int:
        return (j + 1) % self.system.n if T.evaluate(self.spec.guarantees[j], full) else j

    def _choose(self, full: dict, j: int):
        for k, g in self.system.substrategies[self._acting(full, j)]:
            if T.evaluate(g, full):
                return k
        return None

    def _step(self, full: dict, k: int) -> dict:
        return {x: T.evaluate(u, full) for x, u in self.spec.update(k).items()}

    def initial_state(self) -> dict | None:
        return self._sample(self.spec.states, self.spec.initial, dict(self.params))

    def run(self, steps: int) -> SimResult:
        spec = self.spec
        res = SimResult(dict(self.params))
        state = self.initial_state()
        if state is None:
            res.env_stuck = True
            return res
        j = 0
        for t in range(steps):
            ins = self._inputs(state, j)
            if ins is None:
                res.env_stuck = True
                break
            full = {**self.params, **state, **ins}
            for i, e in enumerate(spec.assumptions):
                if T.evaluate(e, full):
                    res.assumption_hits[i] += 1
            if T.evaluate(spec.guarantees[j], full):
                res.goal_visits[j] += 1
            acting = self._acting(full, j)
            k = self._choose(full, j)
            if k is None:
                res.deadlocks += 1
                res.steps = t
                return res
            if not T.evaluate(spec.guard(k), full):
                res.disallowed.append(f"step {t}: action {k + 1} not allowed at {_show(full)}")
            state = self._step(full, k)
            j = acting
            if self.witness is not None and not T.evaluate(self.witness.inv,
                                                            {**self.params, **state}):
                res.left_invariant.append(f"step {t}: left the invariant at {_show(state)}")
            res.steps = t + 1
        return res


def _show(env: dict) -> str:
    return ", ".join(f"{v.name}={val}" for v, val in env.items())


def simulate(spec: ParamSpec, system: ParamSystem, params: Mapping[Var, int], steps: int = 1000,
             policy: str = "random", witness: Witness | None = None, seed: int = 0,
             session: SolverSession | None = None) -> SimResult:
    return Simulator(spec, system, params, witness, policy, seed, session).run(steps)


def sample_params(spec: ParamSpec, count: int, seed: int = 0, box: int = 8) -> list[dict[Var, int]]:
    """Distinct admissible parameter valuations drawn from a box."""
    rng = random.Random(seed)
    pool = [dict(zip(spec.params, vals))
            for vals in itertools.product(range(-box, box + 1), repeat=len(spec.params))]
    pool = [p for p in pool if admits(spec, p)]
    rng.shuffle(pool)
    return pool[:count]
