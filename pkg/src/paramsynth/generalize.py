"""Generalize a family of parameter-indexed expressions into one expression.

Similar expressions (same variables, small differences) are anti-unified and
their holes filled by synthesized parameter-dependent terms.  Whatever stays
dissimilar is combined with case splits whose conditions separate the
parameter sets.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import term as T
from .antiunify import anti_unify, hole_namer
from .smt import SolverSession, interpolate
from .sygus import Application, SynthesisFailure, SynthProblem, Unknown, func_synth, hole_grammar
from .term import Kind, Sort, Term, Var

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 25


@dataclass(frozen=True, order=True)
class Similarity:
    d_v: int
    d_s: int

    def similar(self, threshold: int = DEFAULT_THRESHOLD) -> bool:
        return self.d_v == 0 and self.d_s <= threshold


def _program_vars(t: Term) -> frozenset[Var]:
    return frozenset(v for v in T.term_vars(t) if v.kind is not Kind.HOLE)


def similarity(es: Sequence[Term]) -> Similarity:
    es = list(es)
    var_sets = [_program_vars(e) for e in es]
    d_v = len(frozenset.union(*var_sets) - frozenset.intersection(*var_sets))
    au = anti_unify(es)
    d_s = sum(max(T.node_count(s[h]) for s in au.substitutions) ** 2 for h in au.holes)
    return Similarity(d_v, d_s)


@dataclass
class GenNode:
    label: Term
    params: list[dict[Var, object]]
    children: list[tuple[dict[Var, Term], "GenNode"]] = field(default_factory=list)
    leaf_terms: list[Term] = field(default_factory=list)
    index: int = 0

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class GenForest:
    """Roots of the generalization forest; each node knows its leaves."""
    roots: list[GenNode]
    counter: itertools.count = field(default_factory=itertools.count)

    def new_node(self, label, params, children=(), leaf_terms=()) -> GenNode:
        return GenNode(label, list(params), list(children), list(leaf_terms), next(self.counter))


class Generalizer:
    """Holds the variable classes, the solver and the caches for one run."""

    def __init__(self, session: SolverSession, params: Sequence[Var], states: Sequence[Var] = (),
                 inputs: Sequence[Var] = (), threshold: int = DEFAULT_THRESHOLD,
                 synth_timeout: float = 5.0, max_size: int = 8, seed: int = 0):
        self.session = session
        self.params = list(params)
        self.states = list(states)
        self.inputs = list(inputs)
        self.threshold = threshold
        self.synth_timeout = synth_timeout
        self.max_size = max_size
        self.seed = seed
        self.cache: dict[object, tuple[list, Term]] = {}
        self.hole_cache: dict[tuple, Term | None] = {}

    # -------------------------------------------------------------- entry

    def generalize(self, instances: Sequence[tuple[Mapping[Var, object], Term]],
                   contexts: Sequence[Term] | None = None, target=None) -> Term:
        instances = [(dict(p), e) for p, e in instances]
        if not instances:
            raise ValueError("nothing to generalize")
        ctxs = list(contexts) if contexts is not None else [T.TRUE] * len(instances)
        if target is not None and target in self.cache:
            cached = self.cache[target][1]
            if self._covers(cached, instances, ctxs):
                return cached
        result = self._generalize(instances, ctxs)
        if target is not None:
            self.cache[target] = (instances, result)
        return result

    def _covers(self, expr: Term, instances, ctxs) -> bool:
        for (p, e), ctx in zip(instances, ctxs):
            got = T.instantiate_params(expr, p)
            if got != e and not self.session.equivalent(got, e, ctx):
                return False
        return True

    def _generalize(self, instances, ctxs) -> Term:
        first = instances[0][1]
        if all(e == first for _, e in instances[1:]):
            return first
        # semantic shortcut: some instance's expression fits all instances
        seen = set()
        for p, e in instances:
            if e in seen or T.term_vars(e) & set(self.params):
                continue
            seen.add(e)
            if self._covers(e, instances, ctxs):
                return e
        forest = GenForest([])
        for p, e in instances:
            e = T.normalize(e)
            forest.roots.append(forest.new_node(e, [p], leaf_terms=[e]))
        self.cluster_similar(forest)
        return self.generalize_dissimilar(forest)

    # ------------------------------------------------------------ phases

    def cluster_similar(self, forest: GenForest):
        """Merge the most similar pair of roots whose holes can be filled,
        until no similar pair is left.  Labels of merged nodes are the filled
        generalizations, so no holes remain afterwards."""
        blocked: set[tuple[int, int]] = set()
        while len(forest.roots) > 1:
            cands = []
            for a, b in itertools.combinations(forest.roots, 2):
                if (a.index, b.index) in blocked:
                    continue
                d = similarity(a.leaf_terms + b.leaf_terms)
                if d.similar(self.threshold):
                    cands.append((d, a.index, b.index, a, b))
            if not cands:
                return
            _, _, _, a, b = min(cands, key=lambda c: c[:3])
            filled = self._fill_holes(a.params + b.params, a.leaf_terms + b.leaf_terms)
            if filled is None:
                log.debug("holes not fillable; keeping clusters of %d and %d apart",
                          len(a.params), len(b.params))
                blocked.add((a.index, b.index))
                continue
            self._merge(forest, a, b, filled)

    def _merge(self, forest: GenForest, a: GenNode, b: GenNode, label: Term) -> GenNode:
        leaves = a.leaf_terms + b.leaf_terms
        children = [(anti_unify([label, child.label], hole_namer("g")).substitutions[1], child)
                    for child in (a, b)]
        node = forest.new_node(label, a.params + b.params, children, leaves)
        forest.roots = [r for r in forest.roots if r is not a and r is not b] + [node]
        return node

    def _fill_holes(self, params: list[dict], leaves: list[Term]) -> Term | None:
        au = anti_unify(leaves)
        fill = {}
        for h in au.holes:
            cases = tuple((tuple(sorted((v.name, val) for v, val in p.items())), s[h])
                          for p, s in zip(params, au.substitutions))
            key = (h.sort, cases)
            if key not in self.hole_cache:
                expr = self.synthesize_hole(h.sort, [(p, s[h]) for p, s in
                                                     zip(params, au.substitutions)])
                self.hole_cache[key] = None if expr is None else T.normalize(expr)
            if self.hole_cache[key] is None:
                return None
            fill[h] = self.hole_cache[key]
        return T.substitute(au.generalizer, fill)

    def synthesize_hole(self, sort: Sort, cases: list[tuple[dict, Term]]) -> Term | None:
        """Smallest grammar term e over parameters, states and inputs with
        e[p] equivalent to the given value for every case (p, value)."""
        consts = sorted({c.value for _, val in cases for c in T.subterms(val)
                         if c.op == "const" and c.sort is not Sort.BOOL})
        grammar = hole_grammar(self.params, self.states, self.inputs, sort, consts)
        formals = tuple(self.params + self.states + self.inputs)
        apps, conj = [], []
        for k, (p, value) in enumerate(cases):
            ph = Var(f"_case{k}", Kind.BOUND, value.sort)
            actuals = {v: T.var(v) for v in formals}
            actuals.update(T.valuation_terms({v: p[v] for v in self.params if v in p}))
            apps.append(Application(ph, "h", actuals))
            conj.append(T.eq(T.var(ph), value))
        problem = SynthProblem([Unknown("h", grammar, formals)], T.and_(*conj), apps)
        try:
            return func_synth(problem, self.session, max_size=self.max_size,
                              timeout=self.synth_timeout, seed=self.seed)["h"]
        except SynthesisFailure:
            return None

    def generalize_dissimilar(self, forest: GenForest) -> Term:
        members = {id(r): [r.label] for r in forest.roots}
        while len(forest.roots) > 1:
            best = None
            for a, b in itertools.combinations(forest.roots, 2):
                d = similarity(members[id(a)] + members[id(b)])
                if best is None or d < best[0]:
                    best = (d, a, b)
            _, a, b = best
            cond = interpolate(a.params, b.params)
            label = T.ite(cond, a.label, b.label)
            node = forest.new_node(label, a.params + b.params, [({}, a), ({}, b)],
                                   a.leaf_terms + b.leaf_terms)
            members[id(node)] = members[id(a)] + members[id(b)]
            forest.roots = [r for r in forest.roots if r is not a and r is not b] + [node]
        return forest.roots[0].label


def generalize_expr(instances, params: Sequence[Var] | None = None, states: Sequence[Var] = (),
                    inputs: Sequence[Var] = (), session: SolverSession | None = None,
                    contexts: Sequence[Term] | None = None,
                    threshold: int = DEFAULT_THRESHOLD) -> Term:
    """One-shot generalization.  ``instances`` is a sequence of
    (parameter valuation, expression) pairs or a mapping from parameter-value
    tuples (ordered like ``params``) to expressions."""
    if isinstance(instances, Mapping):
        if params is None:
            raise ValueError("params are needed to interpret tuple keys")
        pairs = []
        for key, e in instances.items():
            key = key if isinstance(key, tuple) else (key,)
            pairs.append((dict(zip(params, key)), e))
        instances = pairs
    instances = list(instances)
    if params is None:
        params = sorted({v for p, _ in instances for v in p}, key=lambda v: v.name)
    own = session is None
    session = session or SolverSession()
    try:
        g = Generalizer(session, params, states, inputs, threshold)
        return g.generalize(instances, contexts)
    finally:
        if own:
            session.close()
