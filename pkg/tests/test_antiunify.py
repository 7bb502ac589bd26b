import pytest

from paramsynth import term as T
from paramsynth.antiunify import anti_unify

from helpers import t


def test_shared_hole():
    r = anti_unify([t("x <= 1 && y <= 1"), t("x <= 2 && y <= 2")])
    assert len(r.holes) == 1
    h = r.holes[0]
    assert T.to_text(r.generalizer) == f"x <= ?{h.name} && y <= ?{h.name}"
    assert [s[h] for s in r.substitutions] == [T.const(1), T.const(2)]


def test_distinct_holes_for_distinct_pairs():
    r = anti_unify([t("x <= 1 && y <= 3"), t("x <= 2 && y <= 4")])
    assert len(r.holes) == 2


def test_identical_inputs_have_no_holes():
    e = t("x + 1 <= y")
    r = anti_unify([e, e, e])
    assert r.generalizer == e and r.holes == []


def test_different_heads_give_hole():
    r = anti_unify([t("x <= 1"), t("x = 1")])
    assert r.generalizer.op == "var"
    for e, s in zip([t("x <= 1"), t("x = 1")], r.substitutions):
        assert T.substitute(r.generalizer, s) == e


def test_three_way():
    es = [t("x <= p + 1"), t("x <= p + 2"), t("x <= p + 3")]
    r = anti_unify(es)
    for e, s in zip(es, r.substitutions):
        assert T.substitute(r.generalizer, s) == e
    assert len(r.holes) == 1


def test_empty_rejected():
    with pytest.raises(ValueError):
        anti_unify([])
