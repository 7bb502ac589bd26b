"""Parameterized GR(1) specifications: data model, DSL parser and printer,
instantiation and validation.

DSL statements (each ends with ``;``, ``#`` starts a comment)::

    param <name>: int;
    state <name>: int|real|bool [init <expr>];
    input <name>: int|real|bool;
    init <expr>;
    envtrans <expr>;
    action <guard> |-> <var> := <expr> {, <var> := <expr>};
    assume GF <expr>;
    guarantee G <expr>;
    guarantee GF <expr>;

State variables that an action does not assign keep their value.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from . import term as T
from .syntax import KEYWORDS, Token, TermParser, tokenize
from .term import Kind, ParseError, Sort, Term, Var


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class Action:
    guard: Term
    update: dict[Var, Term]

    def updated(self, states) -> dict[Var, Term]:
        return {x: self.update.get(x, T.var(x)) for x in states}


@dataclass(frozen=True)
class ParamSpec:
    params: tuple[Var, ...]
    states: tuple[Var, ...]
    inputs: tuple[Var, ...]
    init: Term
    env_trans: Term
    actions: tuple[Action, ...]
    assumptions: tuple[Term, ...]
    guarantees: tuple[Term, ...]
    safety: tuple[Term, ...] = ()
    state_init: dict[Var, Term] = field(default_factory=dict)
    name: str = ""

    @property
    def m(self) -> int:
        return len(self.assumptions)

    @property
    def n(self) -> int:
        return len(self.guarantees)

    @property
    def initial(self) -> Term:
        """Initial condition including per-variable initial values."""
        return T.and_(self.init, *(T.eq(T.var(x), e) if x.sort.numeric else T.iff(T.var(x), e)
                                   for x, e in self.state_init.items()))

    @property
    def param_constraint(self) -> Term:
        """Conjuncts of the initial condition that mention only parameters."""
        ps = set(self.params)
        return T.and_(*(c for c in T.conjuncts(self.initial) if T.term_vars(c) <= ps))

    def guard(self, k: int) -> Term:
        """Guard of action ``k`` with the global guarantees conjoined."""
        return T.and_(self.actions[k].guard, *self.safety)

    def update(self, k: int) -> dict[Var, Term]:
        return self.actions[k].updated(self.states)

    def transition(self) -> Term:
        """Symbolic transition relation over unprimed and primed states."""
        disj = []
        for k in range(len(self.actions)):
            eqs = [_assign(x.primed(), u) for x, u in self.update(k).items()]
            disj.append(T.and_(self.guard(k), *eqs))
        return T.or_(*disj)

    @property
    def sorts(self) -> set[Sort]:
        return {v.sort for v in self.params + self.states + self.inputs}

    def variables(self) -> dict[str, Var]:
        return {v.name: v for v in self.params + self.states + self.inputs}


@dataclass(frozen=True)
class ConcreteSpec(ParamSpec):
    valuation: dict[Var, int] = field(default_factory=dict)


def _assign(xp: Var, u: Term) -> Term:
    return T.iff(T.var(xp), u) if xp.sort is Sort.BOOL else T.eq(T.var(xp), u)


# --------------------------------------------------------------------- parser

_SORT_WORDS = {"int": Sort.INT, "real": Sort.REAL, "bool": Sort.BOOL}


class _SpecParser(TermParser):
    def __init__(self, text: str):
        toks = tokenize(text)
        for t in toks:
            if t.kind == "ident" and t.text.endswith("'"):
                raise ParseError(f"primed variable {t.text} is not allowed in specifications",
                                 t.offset)
        super().__init__(toks, {})
        self.params: list[Var] = []
        self.states: list[Var] = []
        self.inputs: list[Var] = []
        self.state_init: dict[Var, Term] = {}
        self.init: list[Term] = []
        self.env: list[Term] = []
        self.actions: list[Action] = []
        self.assume: list[Term] = []
        self.safety: list[Term] = []
        self.goals: list[Term] = []

    def ident(self) -> Token:
        tok = self.advance()
        if tok.kind != "ident":
            self.error("expected identifier", tok)
        return tok

    def declare(self, kind: Kind, target: list) -> Var:
        name = self.ident()
        if name.text in self.ctx or name.text in KEYWORDS:
            raise ParseError(f"duplicate or reserved name {name.text!r}", name.offset)
        self.expect(":")
        sort_tok = self.ident()
        sort = _SORT_WORDS.get(sort_tok.text)
        if sort is None:
            self.error("expected int, real or bool", sort_tok)
        if kind is Kind.PARAM and sort is not Sort.INT:
            raise ParseError("parameters must be integers", sort_tok.offset)
        v = Var(name.text, kind, sort)
        self.ctx[v.name] = v
        target.append(v)
        return v

    def bool_expr(self) -> Term:
        tok = self.tok
        t = self.parse_expr()
        if t.sort is not Sort.BOOL:
            raise ParseError("sort error: expected a Boolean expression", tok.offset)
        return t

    def statement(self):
        kw = self.ident()
        if kw.text == "param":
            self.declare(Kind.PARAM, self.params)
        elif kw.text == "state":
            v = self.declare(Kind.STATE, self.states)
            if self.at("init"):
                self.advance()
                tok = self.tok
                e = self.parse_expr()
                if (e.sort is Sort.BOOL) != (v.sort is Sort.BOOL):
                    raise ParseError("sort error: initial value of wrong sort", tok.offset)
                self.state_init[v] = e
        elif kw.text == "input":
            self.declare(Kind.INPUT, self.inputs)
        elif kw.text == "init":
            self.init.append(self.bool_expr())
        elif kw.text == "envtrans":
            self.env.append(self.bool_expr())
        elif kw.text == "action":
            self.action()
        elif kw.text == "assume":
            self.expect("GF")
            self.assume.append(self.bool_expr())
        elif kw.text == "guarantee":
            mode = self.ident()
            if mode.text == "G":
                self.safety.append(self.bool_expr())
            elif mode.text == "GF":
                tok = self.tok
                g = self.bool_expr()
                if any(v.kind is Kind.INPUT for v in T.term_vars(g)):
                    raise ParseError("a GF guarantee may not mention inputs", tok.offset)
                self.goals.append(g)
            else:
                self.error("expected G or GF", mode)
        else:
            self.error("expected a statement keyword", kw)
        self.expect(";")

    def action(self):
        guard = self.bool_expr()
        self.expect("|->")
        update: dict[Var, Term] = {}
        while True:
            name = self.ident()
            v = self.ctx.get(name.text)
            if v is None or v.kind is not Kind.STATE:
                raise ParseError(f"{name.text!r} is not a state variable", name.offset)
            if v in update:
                raise ParseError(f"{name.text!r} assigned twice", name.offset)
            self.expect(":=")
            tok = self.tok
            e = self.parse_expr()
            if (e.sort is Sort.BOOL) != (v.sort is Sort.BOOL) or (
                    v.sort is Sort.INT and e.sort is Sort.REAL):
                raise ParseError(f"sort error: cannot assign {e.sort.value} to {v.name}",
                                 tok.offset)
            update[v] = e
            if not self.at(","):
                break
            self.advance()
        self.actions.append(Action(guard, update))

    def parse(self, name: str) -> ParamSpec:
        while self.tok.kind != "eof":
            self.statement()
        if not self.goals:
            raise ParseError("at least one GF guarantee is required", self.tok.offset)
        if not self.actions:
            raise ParseError("at least one action is required", self.tok.offset)
        return ParamSpec(
            params=tuple(self.params), states=tuple(self.states), inputs=tuple(self.inputs),
            init=T.and_(*self.init), env_trans=T.and_(*self.env), actions=tuple(self.actions),
            assumptions=tuple(self.assume), guarantees=tuple(self.goals),
            safety=tuple(self.safety), state_init=dict(self.state_init), name=name)


def parse_spec(text: str, name: str = "") -> ParamSpec:
    return _SpecParser(text).parse(name)


def load_spec(path) -> ParamSpec:
    import pathlib
    p = pathlib.Path(path)
    return parse_spec(p.read_text(encoding="utf-8"), name=p.stem)


def print_spec(spec: ParamSpec) -> str:
    lines = []
    for v in spec.params:
        lines.append(f"param {v.name}: {v.sort.value};")
    for v in spec.states:
        init = f" init {T.to_text(spec.state_init[v])}" if v in spec.state_init else ""
        lines.append(f"state {v.name}: {v.sort.value}{init};")
    for v in spec.inputs:
        lines.append(f"input {v.name}: {v.sort.value};")
    if spec.init != T.TRUE:
        lines.append(f"init {T.to_text(spec.init)};")
    if spec.env_trans != T.TRUE:
        lines.append(f"envtrans {T.to_text(spec.env_trans)};")
    for a in spec.actions:
        ups = ", ".join(f"{x.name} := {T.to_text(u)}" for x, u in a.update.items())
        lines.append(f"action {T.to_text(a.guard)} |-> {ups};")
    for e in spec.assumptions:
        lines.append(f"assume GF {T.to_text(e)};")
    for e in spec.safety:
        lines.append(f"guarantee G {T.to_text(e)};")
    for e in spec.guarantees:
        lines.append(f"guarantee GF {T.to_text(e)};")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- instantiate

def instantiate(spec: ParamSpec, p: Mapping[Var, int]) -> ConcreteSpec:
    """Substitute the parameter valuation ``p`` everywhere."""
    missing = [v.name for v in spec.params if v not in p]
    if missing:
        raise SpecError(f"partial parameter valuation, missing {', '.join(missing)}")
    val = {v: int(p[v]) for v in spec.params}

    def inst(t):
        return T.instantiate_params(t, val)

    actions = tuple(Action(inst(a.guard), {x: inst(u) for x, u in a.update.items()})
                    for a in spec.actions)
    return ConcreteSpec(
        params=(), states=spec.states, inputs=spec.inputs, init=inst(spec.init),
        env_trans=inst(spec.env_trans), actions=actions,
        assumptions=tuple(inst(e) for e in spec.assumptions),
        guarantees=tuple(inst(e) for e in spec.guarantees),
        safety=tuple(inst(e) for e in spec.safety),
        state_init={x: inst(e) for x, e in spec.state_init.items()},
        name=spec.name, valuation=val)


def admits(spec: ParamSpec, p: Mapping[Var, int]) -> bool:
    """Whether ``p`` satisfies the parameter-only conjuncts of init."""
    return bool(T.evaluate(spec.param_constraint, dict(p)))


def param_key(spec: ParamSpec, p: Mapping[Var, int]) -> tuple:
    return tuple(int(p[v]) for v in spec.params)


def format_params(spec: ParamSpec, p: Mapping[Var, int]) -> str:
    return "(" + ", ".join(f"{v.name}={p[v]}" for v in spec.params) + ")"


# ------------------------------------------------------------------ validate

def validate(spec, session=None) -> list[str]:
    """Diagnostics for a spec (or spec text); empty when well-formed."""
    if isinstance(spec, str):
        try:
            spec = parse_spec(spec)
        except ParseError as e:
            msg = str(e)
            if "nonlinear" in msg:
                return [f"nonlinear: {msg}"]
            return [msg]
    diags = []
    allowed_state = set(spec.params) | set(spec.states)
    allowed_all = allowed_state | set(spec.inputs)

    def check(t: Term, allowed, what):
        for v in T.term_vars(t):
            if v.kind is Kind.HOLE:
                diags.append(f"{what} contains hole {v}")
            elif v.kind is Kind.PRIMED:
                diags.append(f"{what} mentions primed variable {v}")
            elif v not in allowed:
                diags.append(f"{what} mentions {v.name}, which is not allowed there")

    check(spec.initial, allowed_state, "init")
    check(spec.env_trans, allowed_all, "envtrans")
    for k, a in enumerate(spec.actions):
        check(a.guard, allowed_all, f"guard of action {k}")
        for x, u in a.update.items():
            if x not in spec.states:
                diags.append(f"action {k} assigns non-state {x.name}")
            check(u, allowed_all, f"update of {x.name} in action {k}")
    for e in spec.assumptions:
        check(e, allowed_all, "assumption")
    for e in spec.safety:
        check(e, allowed_all, "global guarantee")
    for e in spec.guarantees:
        check(e, allowed_state, "guarantee")
    if not spec.guarantees:
        diags.append("no GF guarantee")
    if any(v.sort is not Sort.INT for v in spec.params):
        diags.append("parameters must be integers")
    if not diags:
        from .smt import SolverSession
        own = session is None
        s = session or SolverSession()
        try:
            if not s.is_sat(spec.initial):
                diags.append("no initial valuation: init is unsatisfiable for every parameter valuation")
        finally:
            if own:
                s.close()
    return diags


def with_guarantees(spec: ParamSpec, guarantees) -> ParamSpec:
    return replace(spec, guarantees=tuple(guarantees))
