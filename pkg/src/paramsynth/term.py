"""Immutable first-order terms over linear integer/real arithmetic.

Terms are built from a small set of operators (see ``OPS``).  Associative
operators (``add``, ``and``, ``or``) are binary; chains are left-nested.
Multiplication only exists as scaling by a rational constant, so nonlinear
terms cannot be represented at all.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


class TermError(Exception):
    """Base class for term construction and evaluation errors."""


class SortError(TermError, TypeError):
    pass


class NonlinearError(TermError):
    pass


class EvaluationError(TermError):
    pass


class ParseError(TermError, ValueError):
    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class Sort(enum.Enum):
    BOOL = "bool"
    INT = "int"
    REAL = "real"

    @property
    def numeric(self) -> bool:
        return self is not Sort.BOOL


class Kind(enum.Enum):
    PARAM = "param"
    STATE = "state"
    INPUT = "input"
    HOLE = "hole"
    COUNTER = "counter"
    PRIMED = "primed"
    BOUND = "bound"


@dataclass(frozen=True, order=True)
class Var:
    name: str
    kind: Kind
    sort: Sort

    def __str__(self):
        return ("?" + self.name) if self.kind is Kind.HOLE else self.name

    def primed(self) -> "Var":
        return Var(self.name + "'", Kind.PRIMED, self.sort)


ARITH_OPS = ("add", "sub", "neg", "mul", "ite", "abs", "floor")
CMP_OPS = ("le", "lt", "ge", "gt", "eq")
BOOL_OPS = ("and", "or", "not", "implies")
QUANT_OPS = ("exists", "forall")
OPS = ("const", "var") + ARITH_OPS + CMP_OPS + BOOL_OPS + QUANT_OPS


class Term:
    """A term node.  ``value`` holds the constant, the ``Var``, the scaling
    coefficient of ``mul`` or the bound variables of a quantifier."""

    __slots__ = ("op", "args", "sort", "value", "_hash")

    def __init__(self, op: str, args: tuple = (), sort: Sort = Sort.BOOL, value=None):
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "args", tuple(args))
        object.__setattr__(self, "sort", sort)
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "_hash", hash((op, self.args, sort, _hashable(value))))

    def __setattr__(self, name, value):
        raise AttributeError("Term is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Term) or self._hash != other._hash:
            return False
        return (self.op == other.op and self.sort == other.sort
                and _same_value(self.value, other.value) and self.args == other.args)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return f"Term({to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    def __reduce__(self):
        return (Term, (self.op, self.args, self.sort, self.value))

    @property
    def is_const(self) -> bool:
        return self.op == "const"

    @property
    def is_var(self) -> bool:
        return self.op == "var"


def _hashable(value):
    if isinstance(value, bool):
        return ("b", value)
    return value


def _same_value(a, b):
    # keeps True distinct from 1 for constants of different sorts
    if isinstance(a, bool) or isinstance(b, bool):
        return type(a) is type(b) and a == b
    return a == b


# ---------------------------------------------------------------- constructors

TRUE = Term("const", (), Sort.BOOL, True)
FALSE = Term("const", (), Sort.BOOL, False)


def const(value, sort: Sort | None = None) -> Term:
    if isinstance(value, bool):
        return TRUE if value else FALSE
    if sort is None:
        sort = Sort.INT if isinstance(value, int) else Sort.REAL
    if sort is Sort.INT:
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise SortError(f"non-integral integer constant {value}")
            value = int(value)
        return Term("const", (), Sort.INT, int(value))
    if sort is Sort.REAL:
        return Term("const", (), Sort.REAL, Fraction(value))
    return TRUE if value else FALSE


def var(v: Var) -> Term:
    return Term("var", (), v.sort, v)


def _arith_sort(*ts: Term) -> Sort:
    for t in ts:
        if not t.sort.numeric:
            raise SortError(f"expected numeric term, got {to_text(t)}")
    return Sort.REAL if any(t.sort is Sort.REAL for t in ts) else Sort.INT


def _need_bool(*ts: Term):
    for t in ts:
        if t.sort is not Sort.BOOL:
            raise SortError(f"expected Boolean term, got {to_text(t)}")


def add(*ts: Term) -> Term:
    if not ts:
        return const(0)
    out = ts[0]
    _arith_sort(out)
    for t in ts[1:]:
        out = Term("add", (out, t), _arith_sort(out, t))
    return out


def sub(a: Term, b: Term) -> Term:
    return Term("sub", (a, b), _arith_sort(a, b))


def neg(a: Term) -> Term:
    return Term("neg", (a,), _arith_sort(a))


def mul(coef, t: Term) -> Term:
    sort = _arith_sort(t)
    coef = Fraction(coef)
    if coef.denominator == 1:
        coef = int(coef)
    else:
        sort = Sort.REAL
    return Term("mul", (t,), sort, coef)


def times(a: Term, b: Term) -> Term:
    """Product of two terms; one side must be a numeric literal."""
    _arith_sort(a, b)
    if a.is_const:
        return mul(a.value, b)
    if b.is_const:
        return mul(b.value, a)
    raise NonlinearError(f"nonlinear product {to_text(a)} * {to_text(b)}")


def _cmp(op: str, a: Term, b: Term) -> Term:
    if op == "eq" and a.sort is Sort.BOOL and b.sort is Sort.BOOL:
        return Term("eq", (a, b), Sort.BOOL)
    _arith_sort(a, b)
    return Term(op, (a, b), Sort.BOOL)


def le(a, b):
    return _cmp("le", a, b)


def lt(a, b):
    return _cmp("lt", a, b)


def ge(a, b):
    return _cmp("ge", a, b)


def gt(a, b):
    return _cmp("gt", a, b)


def eq(a, b):
    return _cmp("eq", a, b)


def ne(a, b):
    return not_(eq(a, b))


def and_(*ts: Term) -> Term:
    if not ts:
        return TRUE
    _need_bool(*ts)
    out = ts[0]
    for t in ts[1:]:
        out = Term("and", (out, t), Sort.BOOL)
    return out


def or_(*ts: Term) -> Term:
    if not ts:
        return FALSE
    _need_bool(*ts)
    out = ts[0]
    for t in ts[1:]:
        out = Term("or", (out, t), Sort.BOOL)
    return out


def not_(t: Term) -> Term:
    _need_bool(t)
    return Term("not", (t,), Sort.BOOL)


def implies(a: Term, b: Term) -> Term:
    _need_bool(a, b)
    return Term("implies", (a, b), Sort.BOOL)


def iff(a: Term, b: Term) -> Term:
    _need_bool(a, b)
    return Term("eq", (a, b), Sort.BOOL)


def ite(c: Term, a: Term, b: Term) -> Term:
    _need_bool(c)
    if a.sort is Sort.BOOL or b.sort is Sort.BOOL:
        _need_bool(a, b)
        return Term("ite", (c, a, b), Sort.BOOL)
    return Term("ite", (c, a, b), _arith_sort(a, b))


def abs_(t: Term) -> Term:
    return Term("abs", (t,), _arith_sort(t))


def floor(t: Term) -> Term:
    _arith_sort(t)
    return Term("floor", (t,), Sort.INT)


def exists(vs: Iterable[Var], body: Term) -> Term:
    _need_bool(body)
    vs = tuple(vs)
    return Term("exists", (body,), Sort.BOOL, vs) if vs else body


def forall(vs: Iterable[Var], body: Term) -> Term:
    _need_bool(body)
    vs = tuple(vs)
    return Term("forall", (body,), Sort.BOOL, vs) if vs else body


def conjuncts(t: Term) -> list[Term]:
    if t.op == "and":
        return conjuncts(t.args[0]) + conjuncts(t.args[1])
    if t == TRUE:
        return []
    return [t]


def disjuncts(t: Term) -> list[Term]:
    if t.op == "or":
        return disjuncts(t.args[0]) + disjuncts(t.args[1])
    if t == FALSE:
        return []
    return [t]


def rebuild(t: Term, args: tuple) -> Term:
    """Same node with new children (sort recomputed for arithmetic)."""
    if args == t.args:
        return t
    op = t.op
    if op == "add":
        return add(*args)
    if op == "sub":
        return sub(*args)
    if op == "neg":
        return neg(args[0])
    if op == "mul":
        return mul(t.value, args[0])
    if op in CMP_OPS:
        return _cmp(op, *args)
    if op == "ite":
        return ite(*args)
    if op == "abs":
        return abs_(args[0])
    if op == "floor":
        return floor(args[0])
    if op in ("exists", "forall"):
        return Term(op, args, Sort.BOOL, t.value)
    return Term(op, args, t.sort, t.value)


# ------------------------------------------------------------------ traversal

def term_vars(t: Term) -> frozenset[Var]:
    """Free variables of ``t`` (holes included)."""
    out: set[Var] = set()
    _collect_vars(t, out, frozenset())
    return frozenset(out)


def _collect_vars(t, out, bound):
    if t.op == "var":
        if t.value not in bound:
            out.add(t.value)
        return
    if t.op in QUANT_OPS:
        bound = bound | frozenset(t.value)
    for a in t.args:
        _collect_vars(a, out, bound)


def holes(t: Term) -> list[Var]:
    """Holes of ``t`` in left-to-right first-occurrence order."""
    seen: dict[Var, None] = {}

    def walk(u):
        if u.op == "var":
            if u.value.kind is Kind.HOLE:
                seen.setdefault(u.value, None)
            return
        for a in u.args:
            walk(a)

    walk(t)
    return list(seen)


def node_count(t: Term) -> int:
    return 1 + sum(node_count(a) for a in t.args)


def subterms(t: Term):
    yield t
    for a in t.args:
        yield from subterms(a)


def replace_vars(t: Term, mapping: Mapping[Var, Term]) -> Term:
    """Simultaneous replacement of free variables."""
    if not mapping:
        return t
    cache: dict = {}

    def go(u, m):
        if u.op == "var":
            return m.get(u.value, u)
        if u.op == "const":
            return u
        if u.op in QUANT_OPS:
            inner = {k: v for k, v in m.items() if k not in u.value}
            return rebuild(u, (go(u.args[0], inner),))
        key = (u, id(m))
        hit = cache.get(key)
        if hit is not None:
            return hit
        res = rebuild(u, tuple(go(a, m) for a in u.args))
        cache[key] = res
        return res

    return go(t, dict(mapping))


def _check_sub_sort(v: Var, t: Term):
    if v.sort is t.sort or (v.sort is Sort.REAL and t.sort is Sort.INT):
        return
    raise SortError(f"cannot substitute {to_text(t)} ({t.sort.value}) for {v} ({v.sort.value})")


def substitute(t: Term, s: Mapping[Var, Term]) -> Term:
    """Replace holes according to ``s`` (simultaneously)."""
    for v, u in s.items():
        if v.kind is not Kind.HOLE:
            raise SortError(f"substitution domain must consist of holes, got {v}")
        _check_sub_sort(v, u)
    return replace_vars(t, s)


def valuation_terms(p: Mapping[Var, object]) -> dict[Var, Term]:
    return {v: const(val, v.sort) for v, val in p.items()}


def instantiate_params(t: Term, p: Mapping[Var, object]) -> Term:
    """Replace parameters by the constants of valuation ``p``."""
    return replace_vars(t, valuation_terms(p))


# ---------------------------------------------------------------- evaluation

def apply_op(op: str, vals: list, value=None):
    """Semantics of a single operator on already evaluated children."""
    if op == "add":
        return vals[0] + vals[1]
    if op == "sub":
        return vals[0] - vals[1]
    if op == "neg":
        return -vals[0]
    if op == "mul":
        return value * vals[0]
    if op == "le":
        return vals[0] <= vals[1]
    if op == "lt":
        return vals[0] < vals[1]
    if op == "ge":
        return vals[0] >= vals[1]
    if op == "gt":
        return vals[0] > vals[1]
    if op == "eq":
        return vals[0] == vals[1]
    if op == "and":
        return vals[0] and vals[1]
    if op == "or":
        return vals[0] or vals[1]
    if op == "not":
        return not vals[0]
    if op == "implies":
        return (not vals[0]) or vals[1]
    if op == "ite":
        return vals[1] if vals[0] else vals[2]
    if op == "abs":
        return abs(vals[0])
    if op == "floor":
        return math.floor(vals[0])
    raise EvaluationError(f"cannot apply operator {op}")


def evaluate(t: Term, env: Mapping[Var, object]):
    """Evaluate a quantifier-free, hole-free term under a ground valuation."""
    op = t.op
    if op == "const":
        return t.value
    if op == "var":
        v = t.value
        if v.kind is Kind.HOLE:
            raise EvaluationError(f"hole {v} present")
        try:
            val = env[v]
        except KeyError:
            raise EvaluationError(f"unassigned variable {v}") from None
        if v.sort is Sort.INT and isinstance(val, Fraction):
            val = int(val)
        return val
    if op == "ite":
        return evaluate(t.args[1] if evaluate(t.args[0], env) else t.args[2], env)
    if op == "and":
        return bool(evaluate(t.args[0], env)) and bool(evaluate(t.args[1], env))
    if op == "or":
        return bool(evaluate(t.args[0], env)) or bool(evaluate(t.args[1], env))
    if op in QUANT_OPS:
        raise EvaluationError("cannot evaluate quantified term")
    return apply_op(op, [evaluate(a, env) for a in t.args], t.value)


# ------------------------------------------------------------------- ordering

_GROUP = {"const": 0, "var": 1}
for _op in ARITH_OPS:
    _GROUP[_op] = 2
for _op in CMP_OPS:
    _GROUP[_op] = 3
for _op in BOOL_OPS + QUANT_OPS:
    _GROUP[_op] = 4


def _shape(t: Term):
    if t.op == "const":
        return (0, (), "const", t.sort.value)
    if t.op == "var":
        v = t.value
        return (1, (), "var", f"{v.kind.value}:{v.name}")
    extra = ""
    if t.op == "mul":
        extra = str(t.value)
    elif t.op in QUANT_OPS:
        extra = ",".join(v.name for v in t.value)
    return (_GROUP[t.op], tuple(_shape(a) for a in t.args), t.op, extra)


def _consts(t: Term, out: list):
    if t.op == "const":
        out.append(Fraction(int(t.value)) if isinstance(t.value, bool) else Fraction(t.value))
    for a in t.args:
        _consts(a, out)
    return out


def term_key(t: Term):
    """Total order on terms: shape (children before operator), then constants."""
    return (_shape(t), tuple(_consts(t, [])))


# -------------------------------------------------------------- normalization

K_MULT = 8


def _lin(t: Term):
    """Linear form of an arithmetic term: (coefficients per atom, constant)."""
    op = t.op
    if op == "const":
        return {}, Fraction(t.value)
    if op == "add":
        a, ka = _lin(t.args[0])
        b, kb = _lin(t.args[1])
        return _merge(a, b, 1), ka + kb
    if op == "sub":
        a, ka = _lin(t.args[0])
        b, kb = _lin(t.args[1])
        return _merge(a, b, -1), ka - kb
    if op == "neg":
        a, ka = _lin(t.args[0])
        return {k: -c for k, c in a.items()}, -ka
    if op == "mul":
        a, ka = _lin(t.args[0])
        c = Fraction(t.value)
        return {k: c * v for k, v in a.items() if c * v != 0}, c * ka
    return {t: Fraction(1)}, Fraction(0)


def _merge(a, b, sign):
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + sign * c
        if s == 0:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _num(k: Fraction, sort: Sort) -> Term:
    return const(k, sort) if sort is Sort.REAL or k.denominator != 1 else const(int(k), sort)


def _lin_term(coefs: dict, k: Fraction, sort: Sort) -> Term:
    """Positive parts summed first, negative parts subtracted."""
    plus: list[Term] = []
    minus: list[Term] = []
    for atom in sorted(coefs, key=term_key):
        c = coefs[atom]
        (plus if c > 0 else minus).extend(_scaled(atom, abs(c), sort))
    if k > 0:
        plus.append(_num(k, sort))
    elif k < 0:
        minus.append(_num(-k, sort))
    if not plus and not minus:
        return _num(Fraction(0), sort)
    out = add(*plus) if plus else neg(minus.pop(0))
    for t in minus:
        out = sub(out, t)
    return out


def _scaled(atom: Term, c: Fraction, sort: Sort) -> list[Term]:
    if c == 1:
        return [atom]
    if sort is Sort.INT and c.denominator == 1 and c <= K_MULT:
        return [atom] * int(c)
    return [mul(c, atom)]


_FLIP = {"le": "ge", "ge": "le", "lt": "gt", "gt": "lt", "eq": "eq"}
_NEGATE = {"le": "gt", "lt": "ge", "ge": "lt", "gt": "le"}


def _norm_cmp(op: str, a: Term, b: Term) -> Term:
    coefs, k = _merge_lin(a, b)
    is_int = a.sort is Sort.INT and b.sort is Sort.INT and all(
        c.denominator == 1 for c in coefs.values()) and k.denominator == 1
    if not coefs:
        return TRUE if apply_op(op, [k, Fraction(0)]) else FALSE
    # now: sum(coefs) + k  op  0
    if is_int:
        if op == "lt":
            op, k = "le", k + 1
        elif op == "gt":
            op, k = "ge", k - 1
    rhs = -k
    first = min(coefs, key=term_key)
    if coefs[first] < 0:
        coefs = {t: -c for t, c in coefs.items()}
        rhs = -rhs
        op = _FLIP[op]
    if is_int:
        g = 0
        for c in coefs.values():
            g = math.gcd(g, int(c))
        if g > 1:
            coefs = {t: c / g for t, c in coefs.items()}
            q = rhs / g
            if op == "le":
                rhs = Fraction(math.floor(q))
            elif op == "ge":
                rhs = Fraction(math.ceil(q))
            else:
                if q.denominator != 1:
                    return FALSE
                rhs = q
    sort = Sort.INT if is_int else Sort.REAL
    lhs = _lin_term(coefs, Fraction(0), sort)
    return Term(op, (lhs, const(rhs, sort)), Sort.BOOL)


def _merge_lin(a, b):
    la, ka = _lin(a)
    lb, kb = _lin(b)
    return _merge(la, lb, -1), ka - kb


def _flatten(t: Term, op: str, out: list):
    if t.op == op:
        _flatten(t.args[0], op, out)
        _flatten(t.args[1], op, out)
    else:
        out.append(t)
    return out


def _negate(t: Term) -> Term:
    """Negation pushed one level (result is normalized)."""
    op = t.op
    if op == "const":
        return FALSE if t.value else TRUE
    if op == "not":
        return t.args[0]
    if op == "and":
        return _norm(or_(*(not_(a) for a in _flatten(t, "and", []))))
    if op == "or":
        return _norm(and_(*(not_(a) for a in _flatten(t, "or", []))))
    if op in _NEGATE and t.args[0].sort.numeric:
        return _norm(Term(_NEGATE[op], t.args, Sort.BOOL))
    return Term("not", (t,), Sort.BOOL)


def _norm_junction(op: str, items: list[Term]) -> Term:
    unit, zero = (TRUE, FALSE) if op == "and" else (FALSE, TRUE)
    flat: list[Term] = []
    for it in items:
        for x in _flatten(it, op, []):
            if x == zero:
                return zero
            if x != unit:
                flat.append(x)
    uniq = sorted(set(flat), key=term_key)
    if not uniq:
        return unit
    for x in uniq:
        if x.op == "not" and x.args[0] in uniq:
            return zero
    out = uniq[0]
    for x in uniq[1:]:
        out = Term(op, (out, x), Sort.BOOL)
    return out


def _norm(t: Term) -> Term:
    op = t.op
    if op in ("const", "var"):
        return t
    if op in QUANT_OPS:
        return rebuild(t, (_norm(t.args[0]),))
    if op == "not":
        return _negate(_norm(t.args[0]))
    if op == "implies":
        return _norm_junction("or", [_negate(_norm(t.args[0])), _norm(t.args[1])])
    if op in ("and", "or"):
        return _norm_junction(op, [_norm(a) for a in _flatten(t, op, [])])
    args = tuple(_norm(a) for a in t.args)
    if op in CMP_OPS:
        if args[0].sort is Sort.BOOL:
            a, b = sorted(args, key=term_key)
            if a == b:
                return TRUE
            return Term("eq", (a, b), Sort.BOOL)
        return _norm_cmp(op, *args)
    if op == "ite":
        c, a, b = args
        if c.is_const:
            return a if c.value else b
        if a == b:
            return a
        return ite(c, a, b)
    if op in ("abs", "floor"):
        return rebuild(t, args)
    # linear arithmetic node
    u = rebuild(t, args)
    coefs, k = _lin(u)
    sort = u.sort
    if sort is Sort.INT and (k.denominator != 1 or any(c.denominator != 1 for c in coefs.values())):
        sort = Sort.REAL
    return _lin_term(coefs, k, sort)


def normalize(t: Term) -> Term:
    """Canonical form: negations pushed into comparisons, linear comparisons
    with variables on the left sorted by term order and a positive leading
    coefficient, integer strict comparisons made non-strict, commutative
    arguments sorted, small integer scalings unrolled into repeated addition."""
    return _norm(t)


# ------------------------------------------------------------- pretty-printer

_PREC = {"iff": 1, "implies": 2, "or": 3, "and": 4, "not": 5, "cmp": 6,
         "add": 7, "sub": 7, "mul": 8, "neg": 9, "atom": 10}
_CMP_SYM = {"le": "<=", "lt": "<", "ge": ">=", "gt": ">", "eq": "="}


def _fmt_const(t: Term) -> str:
    v = t.value
    if t.sort is Sort.BOOL:
        return "true" if v else "false"
    if t.sort is Sort.INT:
        return str(v)
    v = Fraction(v)
    if v.denominator == 1:
        return f"{v.numerator}.0"
    return f"{v.numerator}/{v.denominator}"


def _prec(t: Term) -> int:
    op = t.op
    if op in ("const", "var", "ite", "abs", "floor"):
        if op == "const" and t.sort is not Sort.BOOL and (t.value < 0 or
                                                          Fraction(t.value).denominator != 1):
            return _PREC["neg"]
        return _PREC["atom"]
    if op in ("exists", "forall"):
        return 0
    if op == "eq" and t.args[0].sort is Sort.BOOL:
        return _PREC["iff"]
    if op in CMP_OPS:
        return _PREC["cmp"]
    return _PREC[op]


def to_text(t: Term) -> str:
    op = t.op
    if op == "const":
        return _fmt_const(t)
    if op == "var":
        return str(t.value)
    if op in ("ite", "abs", "floor"):
        return f"{op}({', '.join(to_text(a) for a in t.args)})"
    if op in QUANT_OPS:
        decl = ", ".join(f"{v.name}: {v.sort.value}" for v in t.value)
        return f"{op} {decl} . {to_text(t.args[0])}"
    p = _prec(t)

    def wrap(a, need):
        s = to_text(a)
        return f"({s})" if _prec(a) < need else s

    if op == "not":
        return "!" + wrap(t.args[0], _PREC["atom"])
    if op == "neg":
        a = t.args[0]
        if a.op == "const" and a.sort is not Sort.BOOL:
            return f"-({to_text(a)})"
        return "-" + wrap(a, _PREC["neg"])
    if op == "mul":
        c = Fraction(t.value)
        cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return f"{cs} * {wrap(t.args[0], _PREC['neg'])}"
    if op == "eq" and t.args[0].sort is Sort.BOOL:
        return f"{wrap(t.args[0], p + 1)} <-> {wrap(t.args[1], p + 1)}"
    if op in CMP_OPS:
        return f"{wrap(t.args[0], p + 1)} {_CMP_SYM[op]} {wrap(t.args[1], p + 1)}"
    if op == "implies":
        return f"{wrap(t.args[0], p + 1)} -> {wrap(t.args[1], p)}"
    sym = {"add": "+", "sub": "-", "and": "&&", "or": "||"}[op]
    return f"{wrap(t.args[0], p)} {sym} {wrap(t.args[1], p + 1)}"
