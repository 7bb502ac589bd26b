"""Parameterized synthesis loop: solve small instances, generalize, verify,
and add the counterexample parameters until the witness holds for all."""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field

from . import term as T
from .generalize import DEFAULT_THRESHOLD, Generalizer
from .gr1 import ConcreteSystem, FixpointCapReached, Unrealizable, extract_strategy, solve_fixpoint
from .smt import SolverSession, SolverUnknown
from .spec import ParamSpec, admits, format_params, instantiate, param_key
from .sygus import SynthesisFailure
from .term import Var
from .verify import (Consistent, Counterexample, ParamSystem, Witness, check_consistency,
                     synthesize_ranking)

log = logging.getLogger(__name__)

REALIZABLE = "Realizable"
UNREALIZABLE = "Unrealizable"
UNKNOWN = "Unknown"


@dataclass
class RunConfig:
    solver: str | None = None
    timeout: float = 600.0
    max_iter: int = 20
    similarity_threshold: int = DEFAULT_THRESHOLD
    seed: int = 0
    solver_timeout: float = 10.0
    ranking_timeout: float = 60.0
    hole_timeout: float = 5.0


@dataclass
class RunResult:
    status: str
    program: ParamSystem | None = None
    witness: Witness | None = None
    params_used: list[dict[Var, int]] = field(default_factory=list)
    iterations: int = 0
    wall_time: float = 0.0
    reason: str = ""
    losing_params: dict[Var, int] | None = None

    @property
    def exit_code(self) -> int:
        return {REALIZABLE: 0, UNREALIZABLE: 1}.get(self.status, 2)


class Timeout(Exception):
    pass


def select_initial_params(spec: ParamSpec, session: SolverSession | None = None,
                          box: int = 6) -> dict[Var, int]:
    """Admissible valuation with the smallest absolute values (fewer negative
    entries first, then lexicographic)."""
    params = list(spec.params)
    if not params:
        return {}
    cands = itertools.product(range(-box, box + 1), repeat=len(params))
    for vals in sorted(cands, key=lambda v: (sum(map(abs, v)), sum(x < 0 for x in v), v)):
        p = dict(zip(params, vals))
        if admits(spec, p):
            return p
    if session is not None:
        model = session.model(spec.param_constraint, get=params)
        if model is not None:
            return {v: int(model[v]) for v in params}
    raise ValueError("no admissible parameter valuation found")


class Synthesizer:
    def __init__(self, spec: ParamSpec, config: RunConfig | None = None,
                 session: SolverSession | None = None):
        self.spec = spec
        self.config = config or RunConfig()
        self.own = session is None
        self.session = session or SolverSession(self.config.solver,
                                                timeout=self.config.solver_timeout)
        self.gen = Generalizer(self.session, spec.params, spec.states, spec.inputs,
                               self.config.similarity_threshold,
                               synth_timeout=self.config.hole_timeout, seed=self.config.seed)
        self.systems: dict[tuple, ConcreteSystem] = {}
        self.layout = None
        self.deadline = None

    def close(self):
        if self.own:
            self.session.close()

    def _check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise Timeout()

    def concrete(self, p: dict[Var, int]):
        cspec = instantiate(self.spec, p)
        its = solve_fixpoint(self.session, cspec)
        if isinstance(its, Unrealizable):
            return its
        system = extract_strategy(self.session, cspec, its, self.layout)
        if self.layout is None:
            self.layout = [[k for k, _ in sub] for sub in system.substrategies]
        return system

    def generalize_system(self) -> tuple[ParamSystem, T.Term]:
        systems = list(self.systems.values())
        vals = [s.valuation for s in systems]
        inv = self.gen.generalize([(p, s.inv) for p, s in zip(vals, systems)], target="inv")
        subs = []
        for j in range(self.spec.n):
            sub = []
            for pos, (k, _) in enumerate(systems[0].substrategies[j]):
                inst = [(p, s.substrategies[j][pos][1]) for p, s in zip(vals, systems)]
                ctxs = [s.contexts[j][pos] for s in systems]
                self._check_time()
                g = self.gen.generalize(inst, ctxs, target=("guard", j, pos))
                sub.append((k, g))
            subs.append(sub)
        return ParamSystem(self.spec, subs), inv

    def run(self) -> RunResult:
        cfg = self.config
        t0 = time.monotonic()
        self.deadline = t0 + cfg.timeout
        result = RunResult(UNKNOWN)
        try:
            self._loop(result)
        except Timeout:
            result.status, result.reason = UNKNOWN, "timeout"
        except FixpointCapReached as e:
            result.status, result.reason = UNKNOWN, str(e)
        except SolverUnknown as e:
            result.status, result.reason = UNKNOWN, f"solver: {e}"
        result.params_used = [s.valuation for s in self.systems.values()]
        result.wall_time = time.monotonic() - t0
        return result

    def _loop(self, result: RunResult):
        spec = self.spec
        pending = [select_initial_params(spec, self.session)]
        for it in range(1, self.config.max_iter + 1):
            result.iterations = it
            for p in pending:
                self._check_time()
                log.info("solving instance %s", format_params(spec, p))
                sys_p = self.concrete(p)
                if isinstance(sys_p, Unrealizable):
                    result.status = UNREALIZABLE
                    result.losing_params = p
                    result.reason = f"instance {format_params(spec, p)} is unrealizable"
                    return
                self.systems[param_key(spec, p)] = sys_p
            self._check_time()
            program, inv = self.generalize_system()
            ranking = []
            for j in range(spec.n):
                self._check_time()
                budget = min(self.config.ranking_timeout,
                             max(1.0, self.deadline - time.monotonic()))
                try:
                    ranking.append(synthesize_ranking(self.session, spec,
                                                      list(self.systems.values()), j,
                                                      timeout=budget, seed=self.config.seed))
                except SynthesisFailure as e:
                    result.status, result.reason = UNKNOWN, f"no ranking function for guarantee {j + 1}: {e}"
                    return
            witness = Witness(inv, ranking)
            if log.isEnabledFor(logging.DEBUG):
                log.debug("candidate invariant %s", T.to_text(inv))
                for j, sub in enumerate(program.substrategies):
                    log.debug("strategy %d: %s; rank %s; select %s", j + 1,
                              "; ".join(f"{k + 1}: {T.to_text(g)}" for k, g in sub),
                              T.to_text(ranking[j].r), T.to_text(ranking[j].l))
            result.program, result.witness = program, witness
            self._check_time()
            verdict = check_consistency(self.session, spec, program, witness,
                                        [s.valuation for s in self.systems.values()])
            if isinstance(verdict, Consistent):
                result.status = REALIZABLE
                return
            assert isinstance(verdict, Counterexample)
            key = param_key(spec, verdict.params)
            log.info("counterexample %s violates %s", format_params(spec, verdict.params),
                     ", ".join(verdict.violated[:4]))
            if key in self.systems:
                result.status = UNKNOWN
                result.reason = "witness fails on an already solved instance"
                return
            pending = [verdict.params]
        result.status, result.reason = UNKNOWN, "iteration limit reached"


def parameterized_synthesis(spec: ParamSpec, config: RunConfig | None = None,
                            session: SolverSession | None = None) -> RunResult:
    synth = Synthesizer(spec, config, session)
    try:
        return synth.run()
    finally:
        synth.close()
