"""Text formats for synthesized controllers and their correctness witnesses.

Program::

    strategy 1:
      if d + x >= min + 1: x := x - 1 + d  # action 1
      elif true: x := x + d  # action 2

The action number is authoritative; the assignments are informational and
checked against the specification when reading.

Witness::

    invariant x >= min && x <= max;
    ranking 1 r: abs(min - x); l: 1;
"""

from __future__ import annotations

import re

from . import term as T
from .spec import ParamSpec
from .syntax import parse_term
from .term import ParseError
from .verify import ParamSystem, RankingPair, Witness


class FormatError(ValueError):
    pass


def _assignments(spec: ParamSpec, k: int) -> str:
    upd = spec.actions[k].update
    if not upd:
        return "skip"
    return ", ".join(f"{x.name} := {T.to_text(u)}" for x, u in upd.items())


def emit_program(system: ParamSystem) -> str:
    spec = system.spec
    lines = [f"# controller for {spec.name or 'specification'}; "
             f"{system.n} strategies, counter advances when its goal holds"]
    for j, sub in enumerate(system.substrategies):
        lines.append(f"strategy {j + 1}:")
        for pos, (k, g) in enumerate(sub):
            kw = "if" if pos == 0 else "elif"
            lines.append(f"  {kw} {T.to_text(g)}: {_assignments(spec, k)}  # action {k + 1}")
    return "\n".join(lines) + "\n"


_STRATEGY = re.compile(r"^strategy\s+(\d+)\s*:\s*$")
_BRANCH = re.compile(r"^(if|elif)\s+(.*?):\s+(.*?)\s*#\s*action\s+(\d+)\s*$")


def read_program(text: str, spec: ParamSpec) -> ParamSystem:
    ctx = list(spec.params) + list(spec.states) + list(spec.inputs)
    subs: list[list] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _STRATEGY.match(line)
        if m:
            if int(m.group(1)) != len(subs) + 1:
                raise FormatError(f"line {lineno}: strategies must be numbered 1, 2, ...")
            subs.append([])
            continue
        m = _BRANCH.match(line)
        if not m or not subs:
            raise FormatError(f"line {lineno}: cannot read '{line}'")
        if (m.group(1) == "if") != (not subs[-1]):
            raise FormatError(f"line {lineno}: 'if' starts a strategy, 'elif' continues it")
        k = int(m.group(4)) - 1
        if not 0 <= k < len(spec.actions):
            raise FormatError(f"line {lineno}: no action {k + 1} in the specification")
        try:
            g = parse_term(m.group(2), ctx)
        except ParseError as e:
            raise FormatError(f"line {lineno}: {e}") from None
        if m.group(3).strip() != _assignments(spec, k):
            raise FormatError(f"line {lineno}: assignments do not match action {k + 1}")
        subs[-1].append((k, g))
    if len(subs) != spec.n:
        raise FormatError(f"expected {spec.n} strategies, found {len(subs)}")
    return ParamSystem(spec, subs)


def emit_witness(witness: Witness) -> str:
    lines = [f"invariant {T.to_text(witness.inv)};"]
    for j, rp in enumerate(witness.ranking):
        lines.append(f"ranking {j + 1} r: {T.to_text(rp.r)}; l: {T.to_text(rp.l)};")
    return "\n".join(lines) + "\n"


_INVARIANT = re.compile(r"^invariant\s+(.*?);?\s*$")
_RANKING = re.compile(r"^ranking\s+(\d+)\s+r\s*:\s*(.*?)\s*;\s*(?:l\s*:\s*(.*?)\s*;?)?\s*$")


def read_witness(text: str, spec: ParamSpec) -> Witness:
    ctx = list(spec.params) + list(spec.states)
    inv = None
    ranking: dict[int, RankingPair] = {}

    def parse(src, lineno):
        try:
            return parse_term(src, ctx)
        except ParseError as e:
            raise FormatError(f"line {lineno}: {e}") from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _INVARIANT.match(line)
        if m:
            inv = parse(m.group(1), lineno)
            continue
        m = _RANKING.match(line)
        if not m:
            raise FormatError(f"line {lineno}: cannot read '{line}'")
        sel = parse(m.group(3), lineno) if m.group(3) else T.const(1)
        ranking[int(m.group(1))] = RankingPair(parse(m.group(2), lineno), sel)
    if inv is None:
        raise FormatError("witness has no invariant")
    missing = [j for j in range(1, spec.n + 1) if j not in ranking]
    if missing:
        raise FormatError(f"witness has no ranking function for strategy {missing[0]}")
    return Witness(inv, [ranking[j] for j in range(1, spec.n + 1)])
