"""Syntactic anti-unification (least general generalization) of n terms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from . import term as T
from .term import Kind, Sort, Term, Var


@dataclass(frozen=True)
class AntiUnifyResult:
    generalizer: Term
    substitutions: tuple[dict[Var, Term], ...]

    @property
    def holes(self) -> list[Var]:
        return T.holes(self.generalizer)


def _head(t: Term):
    """Function symbol of a node: operator, payload, arity and sorts."""
    if t.op == "var":
        return ("var", t.value)
    if t.op == "const":
        return ("const", t.sort, T._hashable(t.value))
    child_sort = t.args[0].sort if t.op == "eq" else None
    return (t.op, t.sort, T._hashable(t.value) if t.op != "mul" else t.value,
            len(t.args), child_sort)


def hole_namer(prefix: str = "h", start: int = 1) -> Callable[[Sort], Var]:
    counter = itertools.count(start)

    def fresh(sort: Sort) -> Var:
        return Var(f"{prefix}{next(counter)}", Kind.HOLE, sort)

    return fresh


def anti_unify(es: Sequence[Term], fresh: Callable[[Sort], Var] | None = None) -> AntiUnifyResult:
    """Most specific term-with-holes that every input instantiates.

    Identical heads are pushed inward; positions holding the same tuple of
    subterms share a hole.  Holes are named in first-occurrence order.
    Holes already present in the inputs are treated as ordinary symbols.
    """
    es = list(es)
    if not es:
        raise ValueError("anti_unify needs at least one term")
    fresh = fresh or hole_namer()
    memo: dict[tuple, Var] = {}
    subs: list[dict[Var, Term]] = [dict() for _ in es]

    def go(ts: tuple) -> Term:
        first = ts[0]
        if all(t == first for t in ts[1:]):
            return first
        head = _head(first)
        if all(_head(t) == head for t in ts[1:]) and first.args:
            args = tuple(go(tuple(t.args[i] for t in ts)) for i in range(len(first.args)))
            return T.rebuild(first, args)
        h = memo.get(ts)
        if h is None:
            sorts = {t.sort for t in ts}
            sort = sorts.pop() if len(sorts) == 1 else Sort.REAL
            h = fresh(sort)
            memo[ts] = h
            for sub, t in zip(subs, ts):
                sub[h] = t
        return T.var(h)

    g = go(tuple(es))
    return AntiUnifyResult(g, tuple(subs))
