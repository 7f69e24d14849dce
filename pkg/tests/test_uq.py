import pytest

from qmatsym import uq
from qmatsym.freealg import NCPoly, E, F, K, Kinv
from qmatsym.scalars import Q


def test_coproduct_of_ef():
    tp = uq.coproduct((E(1), F(1)))
    expected = {
        ((E(1), F(1)), (Kinv(1),)): 1,
        ((E(1),), (F(1),)): 1,
        ((K(1), F(1)), (E(1), Kinv(1))): 1,
        ((K(1),), (E(1), F(1))): 1,
    }
    assert len(tp) == 4
    assert dict(tp.terms) == expected


def test_antipode_and_counit():
    assert uq.antipode((E(1), F(1))) == NCPoly.word((F(1), E(1)))
    assert uq.antipode((K(1),)) == NCPoly.gen(Kinv(1))
    assert uq.counit((K(1), Kinv(2))) == 1
    assert uq.counit((E(1),)) == 0


@pytest.mark.parametrize("N", [2, 3])
def test_hopf_checks_in_natural_rep(N):
    checks = uq.verify_hopf_in_rep(N, 3, 2)
    assert checks and all(c["status"] == "pass" for c in checks)


def test_dropping_k_from_commutator_breaks_rep():
    rels = [(n, r) for n, r in uq.relations(2)]
    bad = [("[E1,F1] without K", NCPoly.word((E(1), F(1))) - NCPoly.word((F(1), E(1))))]
    checks = uq.verify_hopf_in_rep(2, 1, 1, rels=bad, words=[])
    assert checks[0]["status"] == "fail" and "witness" in checks[0]


def test_grading_homogeneity():
    g = uq.UqGrading(3, 1)
    assert all(g.homogeneity().values())
    g0 = uq.UqGrading(3, 1, deg_F=0)
    assert not g0.homogeneity()["[E1,F1]"]
    assert g0.homogeneity()["[E1,F2]"]


def test_natural_rep_values():
    rep = uq.natural_rep(3)
    assert rep.mats[K(1)][1][1] == Q
    assert rep.mats[K(1)][2][2] == Q ** -1
    assert rep.mats[E(2)] == {2: {3: 1}}
