"""SMT-LIB2 solver adapter: satisfiability, quantifier elimination,
point interpolation and context simplification.

The solver runs as a subprocess speaking SMT-LIB2 on stdin/stdout.  Every
query is wrapped in push/pop so a session can be reused indefinitely.
"""

from __future__ import annotations

import itertools
import logging
import os
import re
import select
import shutil
import subprocess
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import term as T
from .term import FALSE, TRUE, Kind, Sort, Term, Var

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 10.0

QE_TACTIC = ("(or-else (then qe2 simplify) "
             "(then qe (! simplify :arith_lhs true) ctx-solver-simplify))")


class SolverError(Exception):
    pass


class SolverUnknown(SolverError):
    """The solver answered unknown (or timed out) twice."""


@dataclass
class SatResult:
    status: str  # "sat" | "unsat" | "unknown"
    model: dict[Var, object] = field(default_factory=dict)
    reason: str = ""

    @property
    def sat(self) -> bool:
        return self.status == "sat"

    @property
    def unsat(self) -> bool:
        return self.status == "unsat"

    @property
    def unknown(self) -> bool:
        return self.status == "unknown"


# ------------------------------------------------------------ s-expressions

_SEXP_TOKEN = re.compile(r'\s*(?:(\()|(\))|(\|[^|]*\|)|("(?:[^"]|"")*")|([^\s()|"]+))')


def parse_sexprs(text: str) -> list:
    """Parse a string into a list of s-expressions (lists of string atoms)."""
    stack: list[list] = [[]]
    pos = 0
    while True:
        m = _SEXP_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise SolverError(f"cannot parse solver output near {text[pos:pos + 40]!r}")
            break
        pos = m.end()
        if m.group(1):
            stack.append([])
        elif m.group(2):
            if len(stack) == 1:
                raise SolverError("unbalanced parenthesis in solver output")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(m.group(3) or m.group(4) or m.group(5))
    if len(stack) != 1:
        raise SolverError("unbalanced parenthesis in solver output")
    return stack[0]


def _complete_prefix(buf: str) -> int:
    """Length of the first complete s-expression in ``buf`` (0 if none)."""
    i = 0
    n = len(buf)
    while i < n and buf[i].isspace():
        i += 1
    if i == n:
        return 0
    if buf[i] != "(":
        j = i
        while j < n and not buf[j].isspace():
            j += 1
        return j if j < n else 0
    depth = 0
    while i < n:
        c = buf[i]
        if c == "|":
            j = buf.find("|", i + 1)
            if j < 0:
                return 0
            i = j
        elif c == '"':
            j = i + 1
            while True:
                j = buf.find('"', j)
                if j < 0:
                    return 0
                if j + 1 < n and buf[j + 1] == '"':
                    j += 2
                    continue
                break
            i = j
        elif c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return 0


# ---------------------------------------------------------- term <-> SMT-LIB

_KIND_TAG = {Kind.PARAM: "P", Kind.STATE: "S", Kind.INPUT: "I", Kind.HOLE: "H",
             Kind.COUNTER: "C", Kind.PRIMED: "N", Kind.BOUND: "B"}
_SMT_SORT = {Sort.INT: "Int", Sort.REAL: "Real", Sort.BOOL: "Bool"}
_SMT_OP = {"add": "+", "sub": "-", "neg": "-", "le": "<=", "lt": "<", "ge": ">=",
           "gt": ">", "eq": "=", "and": "and", "or": "or", "not": "not",
           "implies": "=>", "ite": "ite", "abs": "abs"}


def smt_name(v: Var) -> str:
    return f"|{_KIND_TAG[v.kind]}:{v.name}|"


def _smt_num(value, sort: Sort) -> str:
    if sort is Sort.INT:
        v = int(value)
        return str(v) if v >= 0 else f"(- {-v})"
    v = Fraction(value)
    if v.denominator == 1:
        s = f"{abs(v.numerator)}.0"
    else:
        s = f"(/ {abs(v.numerator)}.0 {v.denominator}.0)"
    return s if v >= 0 else f"(- {s})"


def to_smt(t: Term) -> str:
    parts: list[str] = []
    _emit(t, parts)
    return "".join(parts)


def _emit(t: Term, out: list):
    op = t.op
    if op == "const":
        if t.sort is Sort.BOOL:
            out.append("true" if t.value else "false")
        else:
            out.append(_smt_num(t.value, t.sort))
        return
    if op == "var":
        out.append(smt_name(t.value))
        return
    if op == "mul":
        c = Fraction(t.value)
        out.append("(* ")
        out.append(_smt_num(c, Sort.INT if c.denominator == 1 and t.args[0].sort is Sort.INT
                            else Sort.REAL))
        out.append(" ")
        _emit(t.args[0], out)
        out.append(")")
        return
    if op == "floor":
        if t.args[0].sort is Sort.INT:
            _emit(t.args[0], out)
            return
        out.append("(to_int ")
        _emit(t.args[0], out)
        out.append(")")
        return
    if op in ("exists", "forall"):
        decls = " ".join(f"({smt_name(v)} {_SMT_SORT[v.sort]})" for v in t.value)
        out.append(f"({op} ({decls}) ")
        _emit(t.args[0], out)
        out.append(")")
        return
    out.append("(")
    out.append(_SMT_OP[op])
    for a in t.args:
        out.append(" ")
        _emit(a, out)
    out.append(")")


_NUM_RE = re.compile(r"^\d+(\.\d+)?$")


def _num_value(sx):
    """Numeric literal expression (as printed in models) to int/Fraction."""
    if isinstance(sx, str):
        if _NUM_RE.match(sx):
            return Fraction(sx) if "." in sx else int(sx)
        raise SolverError(f"not a number: {sx}")
    if sx[0] == "-" and len(sx) == 2:
        return -_num_value(sx[1])
    if sx[0] == "/" and len(sx) == 3:
        return Fraction(_num_value(sx[1])) / Fraction(_num_value(sx[2]))
    raise SolverError(f"not a number: {sx}")


class SmtReader:
    """Translate solver s-expressions back into terms."""

    def __init__(self, names: Mapping[str, Var]):
        self.names = dict(names)

    def read(self, sx, env=None) -> Term:
        env = env or {}
        if isinstance(sx, str):
            return self._atom(sx, env)
        head = sx[0]
        if isinstance(head, list):
            raise SolverError(f"unsupported application {sx}")
        if head == "let":
            inner = dict(env)
            for name, val in sx[1]:
                inner[name.strip("|")] = self.read(val, env)
            return self.read(sx[2], inner)
        if head in ("forall", "exists"):
            inner = dict(env)
            bound = []
            for name, sort in sx[1]:
                key = name.strip("|")
                v = self.names.get(key) or Var(key, Kind.BOUND, _sort_of(sort))
                bound.append(v)
                inner[key] = T.var(v)
            body = self.read(sx[2], inner)
            return (T.forall if head == "forall" else T.exists)(bound, body)
        if head == "!":
            return self.read(sx[1], env)
        args = [self.read(a, env) for a in sx[1:]]
        if head == "+":
            return T.add(*args)
        if head == "-":
            if len(args) == 1:
                a = args[0]
                if a.is_const:
                    return T.const(-a.value, a.sort)
                return T.neg(a)
            out = args[0]
            for a in args[1:]:
                out = T.sub(out, a)
            return out
        if head == "*":
            out = args[0]
            for a in args[1:]:
                out = T.times(out, a)
            return out
        if head == "/":
            if all(a.is_const for a in args) and len(args) == 2:
                return T.const(Fraction(args[0].value) / Fraction(args[1].value), Sort.REAL)
            if len(args) == 2 and args[1].is_const:
                return T.mul(Fraction(1) / Fraction(args[1].value), args[0])
            raise SolverError("nonlinear division in solver output")
        if head in ("<=", "<", ">=", ">"):
            fn = {"<=": T.le, "<": T.lt, ">=": T.ge, ">": T.gt}[head]
            return T.and_(*(fn(a, b) for a, b in zip(args, args[1:])))
        if head == "=":
            return T.and_(*(T.eq(a, b) for a, b in zip(args, args[1:])))
        if head == "distinct":
            return T.and_(*(T.not_(T.eq(a, b)) for a, b in itertools.combinations(args, 2)))
        if head == "and":
            return T.and_(*args)
        if head == "or":
            return T.or_(*args)
        if head == "not":
            return T.not_(args[0])
        if head == "=>":
            out = args[-1]
            for a in reversed(args[:-1]):
                out = T.implies(a, out)
            return out
        if head == "xor":
            return T.not_(T.iff(args[0], args[1]))
        if head == "ite":
            return T.ite(*args)
        if head == "abs":
            return T.abs_(args[0])
        if head in ("div", "mod"):
            return _int_division(head, args)
        if head == "to_int":
            return T.floor(args[0])
        if head == "to_real":
            return args[0]
        raise SolverError(f"unsupported operator in solver output: {head}")

    def _atom(self, s: str, env) -> Term:
        if s == "true":
            return TRUE
        if s == "false":
            return FALSE
        if _NUM_RE.match(s):
            return T.const(Fraction(s), Sort.REAL) if "." in s else T.const(int(s), Sort.INT)
        key = s.strip("|")
        if key in env:
            return env[key]
        v = self.names.get(key)
        if v is None:
            raise SolverError(f"unknown symbol in solver output: {s}")
        return T.var(v)


def _int_division(head: str, args: list[Term]) -> Term:
    """Euclidean div/mod by a nonzero constant, via floor."""
    t, c = args
    if not (c.is_const and c.sort is Sort.INT and c.value != 0):
        raise SolverError(f"nonlinear {head} in solver output")
    k = c.value
    q = T.floor(T.mul(Fraction(1, abs(k)), t))
    if k < 0:
        q = T.neg(q)
    return q if head == "div" else T.sub(t, T.mul(k, q))


def _sort_of(s) -> Sort:
    return {"Int": Sort.INT, "Real": Sort.REAL, "Bool": Sort.BOOL}[s]


def logic_for(sorts: Iterable[Sort]) -> str:
    return "LIRA" if Sort.REAL in set(sorts) else "LIA"


def find_solver() -> str:
    path = os.environ.get("PARAMSYNTH_SOLVER") or shutil.which("z3")
    if not path:
        try:
            import z3  # noqa: F401  (the z3-solver wheel ships the binary)
            cand = os.path.join(os.path.dirname(z3.__file__), "lib", "z3")
            if os.path.exists(cand):
                path = cand
        except ImportError:
            pass
    if not path:
        raise SolverError("no SMT solver found; install z3-solver or pass --solver")
    return path


# ------------------------------------------------------------------ session

class SolverSession:
    """A long-lived solver subprocess."""

    def __init__(self, path: str | None = None, args: Sequence[str] = (),
                 timeout: float = DEFAULT_TIMEOUT, logic: str | None = None):
        self.path = path or find_solver()
        self.args = list(args)
        self.timeout = timeout
        self.logic = logic
        self.proc: subprocess.Popen | None = None
        self._buf = ""
        self.calls = 0
        self._cur_timeout = None

    # process management
    def start(self):
        if self.proc is not None:
            return
        self.proc = subprocess.Popen(
            [self.path, "-in", "-smt2", *self.args],
            stdin=subprocess.PIPE, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL,
            bufsize=0)
        self._buf = ""
        self._send("(set-option :print-success false)\n(set-option :produce-models true)\n")
        if self.logic:
            self._send(f"(set-logic {self.logic})\n")
        self._cur_timeout = None

    def close(self):
        if self.proc is None:
            return
        try:
            self.proc.stdin.write(b"(exit)\n")
            self.proc.stdin.close()
            self.proc.wait(timeout=2)
        except Exception:
            self.proc.kill()
        finally:
            self.proc = None

    def restart(self):
        if self.proc is not None:
            self.proc.kill()
            self.proc.wait()
            self.proc = None
        self.start()

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, *exc):
        self.close()

    def __del__(self):
        try:
            if self.proc is not None:
                self.proc.kill()
        except Exception:
            pass

    # raw protocol
    def _send(self, text: str):
        try:
            self.proc.stdin.write(text.encode())
        except (BrokenPipeError, OSError) as e:
            self.proc = None
            raise SolverError(f"solver process died: {e}") from None

    def _read(self, deadline: float) -> str:
        fd = self.proc.stdout.fileno()
        while True:
            n = _complete_prefix(self._buf)
            if n:
                out, self._buf = self._buf[:n].strip(), self._buf[n:]
                return out
            wait = deadline - time.monotonic()
            if wait <= 0:
                self.restart()
                raise SolverUnknown("solver timed out")
            ready, _, _ = select.select([fd], [], [], wait)
            if ready:
                chunk = os.read(fd, 1 << 16)
                if not chunk:
                    self.proc = None
                    raise SolverError("solver process exited unexpectedly")
                self._buf += chunk.decode()

    def _set_timeout(self, seconds: float):
        ms = max(1, int(seconds * 1000))
        if self._cur_timeout != ms:
            self._send(f"(set-option :timeout {ms})\n")
            self._cur_timeout = ms

    @staticmethod
    def _declarations(vs: Iterable[Var]) -> str:
        return "".join(f"(declare-const {smt_name(v)} {_SMT_SORT[v.sort]})\n"
                       for v in sorted(vs))

    # queries
    def check_sat(self, assertions: Sequence[Term], get: Iterable[Var] | None = None) -> SatResult:
        """Satisfiability of the conjunction of ``assertions``; on sat, the
        values of ``get`` (default: all free variables)."""
        assertions = [a for a in assertions if a != TRUE]
        if any(a == FALSE for a in assertions):
            return SatResult("unsat")
        res = self._check(assertions, get, self.timeout)
        if res.unknown:
            res = self._check(assertions, get, self.timeout * 4)
        return res

    def _check(self, assertions, get, timeout) -> SatResult:
        self.start()
        self.calls += 1
        fv: set[Var] = set()
        for a in assertions:
            fv |= T.term_vars(a)
        want = sorted(fv if get is None else set(get))
        fv |= set(want)
        body = ["(push 1)\n", self._declarations(fv)]
        body += [f"(assert {to_smt(a)})\n" for a in assertions]
        body.append("(check-sat)\n")
        self._set_timeout(timeout)
        self._send("".join(body))
        deadline = time.monotonic() + timeout * 1.5 + 5
        answer = self._read(deadline)
        if answer.startswith("(error"):
            self._send("(pop 1)\n")
            raise SolverError(f"solver error: {answer}")
        model: dict[Var, object] = {}
        if answer == "sat" and want:
            self._send(f"(get-value ({' '.join(smt_name(v) for v in want)}))\n")
            reply = self._read(deadline)
            if reply.startswith("(error"):
                self._send("(pop 1)\n")
                raise SolverError(f"solver error: {reply}")
            by_name = {smt_name(v).strip("|"): v for v in want}
            for name, val in parse_sexprs(reply)[0]:
                v = by_name[name.strip("|")]
                if v.sort is Sort.BOOL:
                    model[v] = val == "true"
                else:
                    num = _num_value(val)
                    model[v] = int(num) if v.sort is Sort.INT else Fraction(num)
        self._send("(pop 1)\n")
        if answer not in ("sat", "unsat", "unknown"):
            raise SolverError(f"unexpected solver answer {answer!r}")
        return SatResult(answer, model)

    def is_sat(self, *assertions: Term) -> bool:
        res = self.check_sat(list(assertions), get=())
        if res.unknown:
            raise SolverUnknown("satisfiability unknown")
        return res.sat

    def is_valid(self, t: Term, context: Term = TRUE) -> bool:
        return not self.is_sat(context, T.not_(t))

    def equivalent(self, a: Term, b: Term, context: Term = TRUE) -> bool:
        if a == b:
            return True
        return not self.is_sat(context, T.not_(T.iff(a, b)))

    def model(self, *assertions: Term, get: Iterable[Var] | None = None):
        """A model of the assertions, or None when unsatisfiable."""
        res = self.check_sat(list(assertions), get)
        if res.unknown:
            raise SolverUnknown("satisfiability unknown")
        return res.model if res.sat else None

    def bound(self, t: Term, v: Var, upper: bool, limit: int = 1 << 16):
        """Greatest (``upper``) or least integer value of ``v`` over models of
        ``t``; None when unsatisfiable or unbounded within ``limit``."""
        model = self.model(t, get=[v])
        if model is None:
            return None
        sign = 1 if upper else -1
        x = T.var(v) if upper else T.neg(T.var(v))
        # maximize sign * v: exponential search, then bisection
        lo = sign * int(model[v])
        step = 1
        while True:
            if step > limit:
                return None
            if not self.is_sat(t, T.ge(x, T.const(lo + step))):
                break
            lo += step
            step *= 2
        hi = lo + step          # infeasible
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.is_sat(t, T.ge(x, T.const(mid))):
                lo = mid
            else:
                hi = mid
        return sign * lo

    def box_hull(self, t: Term, vs: Iterable[Var]) -> Term | None:
        """The conjunction of integer bounds of ``t`` if it is equivalent to
        ``t``, else None."""
        parts = []
        for v in vs:
            if v.sort is not Sort.INT:
                return None
            lo = self.bound(t, v, upper=False)
            hi = self.bound(t, v, upper=True)
            if lo is not None:
                parts.append(T.ge(T.var(v), T.const(lo)))
            if hi is not None:
                parts.append(T.le(T.var(v), T.const(hi)))
        box = T.normalize(T.and_(*parts))
        return box if self.equivalent(box, t) else None

    # quantifier elimination
    def qe(self, quantified: Term, simplify: bool = True) -> Term:
        """Eliminate the outer quantifier block of ``quantified``."""
        t = eliminate_one_point(quantified)
        if t.op not in T.QUANT_OPS:
            out = T.normalize(t)
        else:
            out = T.normalize(self._tactic(t, QE_TACTIC))
        if simplify and out.op in ("and", "or", "not"):
            out = self.simplify_with_context(out, TRUE)
        return out

    def _tactic(self, t: Term, tactic: str) -> Term:
        self.start()
        self.calls += 1
        fv = T.term_vars(t)
        names = {smt_name(v).strip("|"): v for v in fv}
        for sub in T.subterms(t):
            if sub.op in T.QUANT_OPS:
                names.update({smt_name(v).strip("|"): v for v in sub.value})
        timeout = self.timeout * 4
        self._set_timeout(timeout)
        self._send("(push 1)\n" + self._declarations(fv) + f"(assert {to_smt(t)})\n"
                   f"(apply {tactic})\n")
        reply = self._read(time.monotonic() + timeout * 1.5 + 5)
        self._send("(pop 1)\n")
        if reply.startswith("(error"):
            raise SolverUnknown(f"tactic failed: {reply}")
        goals = parse_sexprs(reply)[0]
        reader = SmtReader(names)
        disj = []
        for goal in goals[1:]:
            forms = []
            for item in goal[1:]:
                if isinstance(item, str) and item.startswith(":"):
                    break
                forms.append(reader.read(item))
            disj.append(T.and_(*forms))
        result = T.or_(*disj)
        if any(s.op in T.QUANT_OPS for s in T.subterms(result)):
            raise SolverUnknown("quantifier elimination incomplete")
        return result

    # simplification
    def simplify_with_context(self, t: Term, context: Term = TRUE,
                              pair_atoms: int = 8) -> Term:
        """An equivalent (under ``context``) formula no larger than ``t``."""
        size = T.node_count(t)
        if t.is_const:
            return t
        if not self.is_sat(context):
            return FALSE
        if self.is_valid(t, context):
            return TRUE
        if not self.is_sat(context, t):
            return FALSE
        nt = T.normalize(t)
        if T.node_count(nt) > size:
            nt = t
        lits = []
        for a in sorted(_atoms(nt), key=lambda a: (T.node_count(a), T.term_key(a))):
            lits.append(a)
            lits.append(T.normalize(T.not_(a)))
        lits = sorted(set(lits), key=lambda a: (T.node_count(a), T.term_key(a)))

        def ok(cand):
            return T.node_count(cand) <= size and self.equivalent(cand, nt, context)

        for lit in lits:
            if ok(lit):
                return lit
        if len(lits) <= 2 * pair_atoms:
            pairs = []
            for a, b in itertools.combinations(lits, 2):
                pairs.append(T.normalize(T.and_(a, b)))
                pairs.append(T.normalize(T.or_(a, b)))
            pairs = sorted({p for p in pairs if not p.is_const},
                           key=lambda a: (T.node_count(a), T.term_key(a)))
            feasible = [p for p in pairs if T.node_count(p) < T.node_count(nt)]
            for p in feasible:
                if ok(p):
                    return p
        pruned = self._prune(nt, context)
        return pruned if T.node_count(pruned) <= size else t

    def _prune(self, t: Term, context: Term) -> Term:
        """Greedy left-to-right deletion of conjuncts/disjuncts."""
        original = t

        def visit(u: Term, wrap) -> Term:
            if u.op not in ("and", "or"):
                return u
            op = u.op
            items = T._flatten(u, op, [])
            i = 0
            while i < len(items) and len(items) > 1:
                trial = items[:i] + items[i + 1:]
                cand = _junction(op, trial)
                if self.equivalent(wrap(cand), original, context):
                    items = trial
                else:
                    i += 1
            for i in range(len(items)):
                def inner(x, i=i, items=items):
                    return wrap(_junction(op, items[:i] + [x] + items[i + 1:]))
                items[i] = visit(items[i], inner)
            return _junction(op, items)

        return visit(t, lambda x: x)


def _junction(op: str, items: list[Term]) -> Term:
    return T.and_(*items) if op == "and" else T.or_(*items)


def _atoms(t: Term) -> set[Term]:
    out = set()

    def walk(u):
        if u.op in ("and", "or", "not", "implies") or (u.op == "eq" and u.args[0].sort is Sort.BOOL):
            for a in u.args:
                walk(a)
        elif u.op == "ite" and u.sort is Sort.BOOL:
            for a in u.args:
                walk(a)
        elif not u.is_const:
            out.add(u)

    walk(t)
    return out


# ------------------------------------------------------- one-point elimination

def eliminate_one_point(t: Term) -> Term:
    """Remove bound variables defined by an equation (for ``exists``) or a
    disequation (for ``forall``) at the top level of the body; drop bound
    variables that do not occur."""
    if t.op not in T.QUANT_OPS:
        return t
    op = t.op
    bound = list(t.value)
    body = t.args[0]
    changed = True
    while changed and bound:
        changed = False
        for v in list(bound):
            if v not in T.term_vars(body):
                bound.remove(v)
                changed = True
                continue
            defn = _definition(body, v, op)
            if defn is not None:
                body = T.replace_vars(body, {v: defn})
                bound.remove(v)
                changed = True
    return (T.exists if op == "exists" else T.forall)(bound, body)


def _definition(body: Term, v: Var, op: str):
    if op == "exists":
        items = T.conjuncts(body)
    else:
        # forall v. (v = e -> phi)  or  forall v. (v != e | phi)
        if body.op == "implies":
            items = T.conjuncts(body.args[0])
        else:
            items = [d.args[0] for d in T.disjuncts(body) if d.op == "not"]
    for it in items:
        if it.op == "eq" and it.args[0].sort is not Sort.BOOL:
            for lhs, rhs in ((it.args[0], it.args[1]), (it.args[1], it.args[0])):
                if lhs.op == "var" and lhs.value == v and v not in T.term_vars(rhs):
                    if v.sort is Sort.INT and rhs.sort is Sort.REAL:
                        continue
                    return rhs
    return None


# -------------------------------------------------------------- interpolation

def interpolate(a_points: Sequence[Mapping[Var, object]], b_points: Sequence[Mapping[Var, object]],
                grammar=None, max_size: int = 15) -> Term:
    """A formula over the parameters true on every point of ``a_points`` and
    false on every point of ``b_points``.  Found by enumerating the interpolant
    grammar; falls back to a disjunction of point equalities."""
    from . import sygus

    a_points = [dict(p) for p in a_points]
    b_points = [dict(p) for p in b_points]
    if not a_points:
        return FALSE
    if not b_points:
        return TRUE
    for a in a_points:
        if a in b_points:
            raise ValueError("point sets overlap; no separating formula exists")
    params = sorted({v for p in a_points + b_points for v in p}, key=lambda v: v.name)
    if grammar is None:
        consts = sorted({int(val) if float(val).is_integer() else val
                         for p in a_points + b_points for val in p.values()})
        grammar = sygus.interpolant_grammar(params, consts)
    points = a_points + b_points
    target = tuple([True] * len(a_points) + [False] * len(b_points))
    for cand, vec in sygus.enumerate_terms(grammar, points, max_size):
        if vec == target:
            return T.normalize(cand)
    disj = [T.and_(*(T.eq(T.var(v), T.const(p[v], v.sort)) for v in params)) for p in a_points]
    return T.or_(*disj)
