from paramsynth.syntax import parse_term
from paramsynth.term import Kind, Sort, Var

x = Var("x", Kind.STATE, Sort.INT)
y = Var("y", Kind.STATE, Sort.INT)
a = Var("a", Kind.STATE, Sort.INT)
i = Var("i", Kind.INPUT, Sort.INT)
p = Var("p", Kind.PARAM, Sort.INT)
q = Var("q", Kind.PARAM, Sort.INT)
b = Var("b", Kind.STATE, Sort.BOOL)

ALL = [x, y, a, i, p, q, b]


def t(text: str):
    return parse_term(text, ALL)
