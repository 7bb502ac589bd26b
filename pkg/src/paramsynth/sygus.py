"""Enumerative syntax-guided synthesis with counterexample pruning.

Candidates are enumerated bottom-up in nondecreasing node count.  Terms that
agree on every known point are merged (observational equivalence), and a
candidate is only sent to the solver after it satisfies every stored
counterexample.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from . import term as T
from .term import Kind, Sort, Term, Var


class SynthesisFailure(Exception):
    """No candidate within the size/time budget satisfies the constraint."""


@dataclass(frozen=True)
class Rule:
    """One production.  ``op == "leaf"`` emits ``leaf``; ``op == "chain"``
    includes nonterminal ``children[0]``; otherwise a term node ``op`` over
    the children nonterminals (``value`` is the node payload)."""
    op: str
    children: tuple[str, ...] = ()
    leaf: Term | None = None
    value: object = None


@dataclass
class Grammar:
    start: str
    rules: dict[str, list[Rule]]
    sorts: dict[str, Sort]

    def order(self) -> list[str]:
        """Nonterminals with chain targets before their users."""
        out: list[str] = []
        seen: set[str] = set()

        def visit(nt, stack=()):
            if nt in seen:
                return
            if nt in stack:
                raise ValueError(f"chain cycle through {nt}")
            for r in self.rules.get(nt, []):
                if r.op == "chain":
                    visit(r.children[0], stack + (nt,))
            seen.add(nt)
            out.append(nt)

        for nt in self.rules:
            visit(nt)
        return out


def leaf(t: Term) -> Rule:
    return Rule("leaf", leaf=t)


def chain(nt: str) -> Rule:
    return Rule("chain", (nt,))


def node(op: str, *children: str, value=None) -> Rule:
    return Rule(op, tuple(children), value=value)


def _build(rule: Rule, args: list[Term]) -> Term:
    op = rule.op
    if op == "add":
        return T.add(*args)
    if op == "sub":
        return T.sub(*args)
    if op == "neg":
        return T.neg(args[0])
    if op == "mul":
        return T.mul(rule.value, args[0])
    if op in T.CMP_OPS:
        return T._cmp(op, *args)
    if op == "and":
        return T.and_(*args)
    if op == "or":
        return T.or_(*args)
    if op == "not":
        return T.not_(args[0])
    if op == "ite":
        return T.ite(*args)
    if op == "abs":
        return T.abs_(args[0])
    if op == "floor":
        return T.floor(args[0])
    raise ValueError(f"unsupported grammar operator {op}")


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class Enumerator:
    """Bottom-up enumeration of a grammar, level by level (node count)."""

    def __init__(self, grammar: Grammar, points: Sequence[Mapping[Var, object]]):
        self.g = grammar
        self.points = [dict(p) for p in points]
        self.order = grammar.order()
        self.bank: dict[str, dict[int, list]] = {nt: {} for nt in self.order}
        self.seen: dict[str, set] = {nt: set() for nt in self.order}
        self.done = 0
        self.count = 0

    def _vec_leaf(self, t: Term):
        out = []
        for p in self.points:
            try:
                out.append(T.evaluate(t, p))
            except T.EvaluationError:
                out.append(None)
        return tuple(out)

    def _grow(self, size: int):
        for nt in self.order:
            level = []
            seen = self.seen[nt]
            for rule in self.g.rules.get(nt, []):
                if rule.op == "leaf":
                    if size != 1:
                        continue
                    vec = self._vec_leaf(rule.leaf)
                    if vec not in seen:
                        seen.add(vec)
                        level.append((rule.leaf, vec))
                elif rule.op == "chain":
                    for t, vec in self.bank[rule.children[0]].get(size, []):
                        if vec not in seen:
                            seen.add(vec)
                            level.append((t, vec))
                else:
                    k = len(rule.children)
                    for sizes in _compositions(size - 1, k):
                        pools = [self.bank[c].get(s, []) for c, s in zip(rule.children, sizes)]
                        if any(not pool for pool in pools):
                            continue
                        for combo in itertools.product(*pools):
                            vec = self._combine(rule, [c[1] for c in combo])
                            if vec in seen:
                                continue
                            seen.add(vec)
                            level.append((_build(rule, [c[0] for c in combo]), vec))
            self.bank[nt][size] = level
            self.count += len(level)

    def _combine(self, rule: Rule, vecs: list[tuple]):
        out = []
        for i in range(len(self.points)):
            vals = [v[i] for v in vecs]
            if rule.op == "ite":
                c = vals[0]
                out.append(None if c is None else (vals[1] if c else vals[2]))
                continue
            if any(v is None for v in vals):
                out.append(None)
                continue
            out.append(T.apply_op(rule.op, vals, rule.value))
        return tuple(out)

    def level(self, size: int, nt: str | None = None) -> list[tuple[Term, tuple]]:
        while self.done < size:
            self.done += 1
            self._grow(self.done)
        return self.bank[nt or self.g.start].get(size, [])


def enumerate_terms(grammar: Grammar, points, max_size: int) -> Iterator[tuple[Term, tuple]]:
    """Start-symbol terms in nondecreasing size, one per value vector."""
    e = Enumerator(grammar, points)
    for s in range(1, max_size + 1):
        yield from e.level(s)


# ------------------------------------------------------------------ grammars

def _int_consts(values) -> list[Term]:
    out = []
    for v in sorted(set(values)):
        out.append(T.const(v, Sort.INT if Fraction(v).denominator == 1 else Sort.REAL))
    return out


def hole_grammar(params: Sequence[Var], states: Sequence[Var], inputs: Sequence[Var],
                 sort: Sort, constants: Sequence = ()) -> Grammar:
    """Grammar for hole values: Boolean combinations and linear integer terms
    with if-then-else over parameters, state and input variables."""
    numeric = [v for v in list(params) + list(states) + list(inputs) if v.sort.numeric]
    bools = [v for v in list(states) + list(inputs) if v.sort is Sort.BOOL]
    consts = [0, 1] + [c for c in constants if c not in (0, 1)]
    rules = {
        "I": [leaf(T.var(v)) for v in numeric] + [leaf(c) for c in _int_consts(consts)]
        + [node("add", "I", "I"), node("sub", "I", "I"), node("ite", "B", "I", "I")],
        "B": [leaf(T.var(v)) for v in bools]
        + [node("le", "I", "I"), node("not", "B"), node("and", "B", "B")],
    }
    return Grammar("B" if sort is Sort.BOOL else "I", rules,
                   {"I": Sort.INT if all(v.sort is Sort.INT for v in numeric) else Sort.REAL,
                    "B": Sort.BOOL})


def ranking_grammar(params: Sequence[Var], states: Sequence[Var]) -> Grammar:
    """Sums of variables and absolute differences of sums."""
    ints = [v for v in list(params) + list(states) if v.sort is Sort.INT]
    reals = [v for v in states if v.sort is Sort.REAL]
    rules = {
        "R": [chain("S"), node("add", "S", "R")],
        "S": [chain("V"), node("abs", "D")],
        "D": [node("sub", "T", "T")],
        "T": [chain("X"), node("add", "X", "T")],
        "X": [chain("V"), leaf(T.const(1))],
        "V": [leaf(T.var(v)) for v in ints] + ([node("floor", "XR")] if reals else []),
        "XR": [leaf(T.var(v)) for v in reals],
    }
    return Grammar("R", rules, {"R": Sort.INT, "S": Sort.INT, "D": Sort.INT, "T": Sort.INT,
                                "X": Sort.INT, "V": Sort.INT, "XR": Sort.REAL})


def selector_grammar(params: Sequence[Var], states: Sequence[Var], m: int) -> Grammar:
    """Piecewise choice of an assumption index 1..m."""
    ints = [v for v in list(params) + list(states) if v.sort is Sort.INT]
    bools = [v for v in states if v.sort is Sort.BOOL]
    rules = {
        "L": [leaf(T.const(j)) for j in range(1, m + 1)] + [node("ite", "B", "L", "L")],
        "B": [leaf(T.var(v)) for v in bools] + [node("le", "I", "I")],
        "I": [leaf(T.var(v)) for v in ints] + [leaf(T.const(0)), leaf(T.const(1)),
                                               node("add", "I", "I"), node("sub", "I", "I")],
    }
    return Grammar("L", rules, {"L": Sort.INT, "B": Sort.BOOL, "I": Sort.INT})


def interpolant_grammar(params: Sequence[Var], constants: Sequence) -> Grammar:
    """Disjunctions of conjunctions of (in)equalities over parameters and the
    constants occurring in the point sets."""
    terms = [T.var(v) for v in params] + _int_consts(constants)
    rules = {
        "X": [chain("A"), node("or", "A", "X")],
        "A": [chain("C"), node("and", "C", "A")],
        "C": [node("eq", "I", "I"), node("le", "I", "I")],
        "I": [leaf(t) for t in terms],
    }
    return Grammar("X", rules, {"X": Sort.BOOL, "A": Sort.BOOL, "C": Sort.BOOL,
                                "I": Sort.INT})


# ------------------------------------------------------------------ problems

@dataclass
class Unknown:
    name: str
    grammar: Grammar
    formals: tuple[Var, ...]


@dataclass
class Application:
    """An occurrence ``placeholder = unknown(actuals)`` in the constraint."""
    placeholder: Var
    unknown: str
    actuals: dict[Var, Term]


@dataclass
class SynthProblem:
    unknowns: list[Unknown]
    constraint: Term
    applications: list[Application]
    seeds: list[dict[Var, object]] = field(default_factory=list)

    def free_vars(self) -> list[Var]:
        placeholders = {a.placeholder for a in self.applications}
        fv = set(T.term_vars(self.constraint)) - placeholders
        for a in self.applications:
            for t in a.actuals.values():
                fv |= T.term_vars(t)
        return sorted(fv)

    def instantiate(self, cands: Mapping[str, Term]) -> Term:
        mapping = {a.placeholder: T.replace_vars(cands[a.unknown], a.actuals)
                   for a in self.applications}
        return T.replace_vars(self.constraint, mapping)


def _default(v: Var):
    return False if v.sort is Sort.BOOL else 0


def func_synth(problem: SynthProblem, session=None, max_size: int = 12,
               timeout: float = 30.0, seed: int = 0) -> dict[str, Term]:
    """Smallest-first candidates (per unknown) making the constraint valid."""
    start = time.monotonic()
    rng = random.Random(seed)
    free = problem.free_vars()
    cexs: list[dict[Var, object]] = [dict(s) for s in problem.seeds]
    zero = {v: _default(v) for v in free}
    if zero not in cexs:
        cexs.append(zero)
    if free:
        cexs.append({v: (rng.random() < 0.5) if v.sort is Sort.BOOL else rng.randint(-3, 3)
                     for v in free})
    apps_of = {u.name: [a for a in problem.applications if a.unknown == u.name]
               for u in problem.unknowns}
    rejected: set[tuple] = set()

    while True:
        if time.monotonic() - start > timeout:
            raise SynthesisFailure("time budget exhausted")
        # points per unknown, and their location for each (cex, application)
        enums, where = {}, {}
        for u in problem.unknowns:
            pts: list[dict] = []
            index: dict[tuple, int] = {}
            for ci, cex in enumerate(cexs):
                for a in apps_of[u.name]:
                    pt = {f: T.evaluate(a.actuals[f], cex) if f in a.actuals else _default(f)
                          for f in u.formals}
                    key = tuple(sorted((v.name, str(val)) for v, val in pt.items()))
                    if key not in index:
                        index[key] = len(pts)
                        pts.append(pt)
                    where[(ci, a.placeholder)] = index[key]
            enums[u.name] = Enumerator(u.grammar, pts)
        outcome = _search(problem, session, enums, where, cexs, max_size, start, timeout,
                          rejected)
        if isinstance(outcome, dict) and "__cex__" not in outcome:
            return outcome
        if outcome is None:
            raise SynthesisFailure("search space exhausted")
        cex = {v: outcome["__cex__"].get(v, _default(v)) for v in free}
        cexs.append(cex)


def _search(problem, session, enums, where, cexs, max_size, start, timeout, rejected):
    names = [u.name for u in problem.unknowns]
    k = len(names)
    for total in range(k, k * max_size + 1):
        for sizes in _compositions(total, k) if k > 1 else [(total,)]:
            if any(s > max_size for s in sizes):
                continue
            pools = [enums[n].level(s) for n, s in zip(names, sizes)]
            if any(not p for p in pools):
                continue
            for combo in itertools.product(*pools):
                if time.monotonic() - start > timeout:
                    raise SynthesisFailure("time budget exhausted")
                vecs = {n: c[1] for n, c in zip(names, combo)}
                if not _passes(problem, vecs, where, cexs):
                    continue
                cands = {n: c[0] for n, c in zip(names, combo)}
                key = tuple(cands[n] for n in names)
                if key in rejected:
                    continue
                formula = problem.instantiate(cands)
                fv = T.term_vars(formula)
                if not fv:
                    if T.evaluate(formula, {}):
                        return cands
                    rejected.add(key)
                    continue
                if session is None:
                    raise ValueError("a solver session is needed for non-ground constraints")
                res = session.check_sat([T.not_(formula)], get=sorted(fv))
                if res.unsat:
                    return cands
                rejected.add(key)
                if res.sat:
                    return {"__cex__": res.model}
    return None


def _passes(problem, vecs, where, cexs) -> bool:
    for ci, cex in enumerate(cexs):
        env = dict(cex)
        for a in problem.applications:
            val = vecs[a.unknown][where[(ci, a.placeholder)]]
            if val is None:
                return True  # cannot judge; let the solver decide
            env[a.placeholder] = val
        try:
            if not T.evaluate(problem.constraint, env):
                return False
        except T.EvaluationError:
            return True
    return True


def hole_var(name: str, sort: Sort) -> Var:
    return Var(name, Kind.HOLE, sort)
