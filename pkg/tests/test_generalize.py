from paramsynth import term as T
from paramsynth.generalize import Generalizer, Similarity, generalize_expr, similarity

from helpers import a, p, q, t, x, y


def _holds_at(session, g, instances):
    for val, e in instances:
        assert session.equivalent(T.instantiate_params(g, val), e), val


def test_similarity_measures():
    assert similarity([t("x <= 1"), t("x <= 2")]) == Similarity(0, 1)
    assert similarity([t("x <= 1"), t("y <= 1")]).d_v == 2
    assert similarity([t("x <= 1"), t("x <= 1")]) == Similarity(0, 0)
    assert Similarity(0, 25).similar() and not Similarity(0, 26).similar()
    assert not Similarity(1, 0).similar()


def test_identical_instances_pass_through(session):
    e = t("x >= 0")
    assert generalize_expr([({p: 1}, e), ({p: 2}, e)], [p], session=session) == e


def test_linear_hole(session):
    inst = [({p: 1}, t("x <= 2")), ({p: 2}, t("x <= 3")), ({p: 5}, t("x <= 6"))]
    g = generalize_expr(inst, [p], states=[x], session=session)
    _holds_at(session, g, inst)
    assert p in T.term_vars(g)


def test_two_parameters(session):
    inst = [({p: 0, q: 2}, t("x >= 0 && x <= 2")), ({p: -1, q: 3}, t("x >= -1 && x <= 3")),
            ({p: 1, q: 4}, t("x >= 1 && x <= 4"))]
    g = generalize_expr(inst, [p, q], states=[x], session=session)
    _holds_at(session, g, inst)
    assert session.equivalent(g, t("x >= p && x <= q"))


def test_dissimilar_instances_split(session):
    inst = [({p: 1}, t("x >= 0")), ({p: 2}, t("x >= 0")), ({p: -1}, t("y <= 0")),
            ({p: -2}, t("y <= 0"))]
    g = generalize_expr(inst, [p], states=[x, y], session=session)
    _holds_at(session, g, inst)
    assert g.op == "ite"


def test_contexts_allow_reuse(session):
    # equal under each instance's context, so one expression covers both
    inst = [({p: 1}, t("x >= 1")), ({p: 2}, t("x > 0"))]
    g = generalize_expr(inst, [p], states=[x], session=session, contexts=[t("x >= -5")] * 2)
    _holds_at(session, g, inst)
    assert p not in T.term_vars(g)


def test_generalizer_caches_per_target(session):
    gen = Generalizer(session, [p], [a])
    inst = [({p: 2}, t("a <= 3")), ({p: 3}, t("a <= 4"))]
    g1 = gen.generalize(inst, target="inv")
    g2 = gen.generalize(inst, target="inv")
    assert g1 == g2
    _holds_at(session, g1, inst)
