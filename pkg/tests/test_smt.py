import pytest

from paramsynth import term as T
from paramsynth.smt import SolverSession, interpolate, parse_sexprs, to_smt

from helpers import i, p, q, t, x, y


def test_parse_sexprs():
    assert parse_sexprs("(a (b 1) |c d|) x") == [["a", ["b", "1"], "|c d|"], "x"]


def test_to_smt_mentions_operators():
    s = to_smt(t("x + 1 <= p && !(y = 2)"))
    assert "<=" in s and "not" in s and "and" in s


def test_sat_valid_equivalent(session):
    assert session.is_sat(t("x > 3"), t("x < 5"))
    assert not session.is_sat(t("x > 3"), t("x < 4"))
    assert session.is_valid(t("x > 3 || x <= 3"))
    assert session.equivalent(t("x >= 1"), t("x > 0"))
    assert session.equivalent(t("x >= 1"), t("x >= 2"), context=t("x != 1"))


def test_model(session):
    m = session.model(t("x + y = 7"), t("x = 3"), get=[x, y])
    assert m[x] == 3 and m[y] == 4
    assert session.model(t("x < 0 && x > 0"), get=[x]) is None


def test_qe_exists(session):
    e = T.exists([i], t("i >= 0 && i <= 2 && x = i + y"))
    r = session.qe(e)
    assert not any(v == i for v in T.term_vars(r))
    assert session.equivalent(r, t("x - y >= 0 && x - y <= 2"))


def test_qe_forall(session):
    e = T.forall([i], t("i >= -1 && i <= 1 -> x + i <= p"))
    r = session.qe(e)
    assert session.equivalent(r, t("x <= p - 1"))


def test_bound_and_box_hull(session):
    assert session.bound(t("x >= 1 && x <= 7"), x, upper=True) == 7
    assert session.bound(t("x >= 1 && x <= 7"), x, upper=False) == 1
    assert session.bound(t("x >= 1"), x, upper=True) is None
    hull = session.box_hull(t("x >= 1 && x <= 7 && y = 2"), [x, y])
    assert hull is not None and session.equivalent(hull, t("x >= 1 && x <= 7 && y = 2"))
    assert session.box_hull(t("x >= 1 && x <= 7 && x != 3"), [x]) is None


def test_simplify_with_context(session):
    r = session.simplify_with_context(t("x >= 0 && x <= 5"), t("x >= 2"))
    assert session.equivalent(r, t("x <= 5"), context=t("x >= 2"))
    assert T.node_count(r) <= T.node_count(t("x >= 0 && x <= 5"))


def test_interpolate_separates():
    a_pts = [{p: 1, q: 0}, {p: 2, q: 0}]
    b_pts = [{p: -2, q: 0}, {p: -3, q: 0}]
    f = interpolate(a_pts, b_pts)
    assert all(T.evaluate(f, pt) for pt in a_pts)
    assert not any(T.evaluate(f, pt) for pt in b_pts)


def test_interpolate_overlap_rejected():
    with pytest.raises(ValueError):
        interpolate([{p: 1}], [{p: 1}])


def test_session_context_manager():
    with SolverSession() as s:
        assert s.is_sat(t("x = 1"))
