from fractions import Fraction

import pytest

from qmatsym import action, qmatcalc, uq, pairing
from qmatsym.action import (ActionDeriver, derive_table, derive_action, act, Action,
                            verify_module_algebra, verify_grading, specialize_action,
                            uniqueness_probe, RankDeficient, required_cutoff,
                            check_pairing_consistency, specialize_table)
from qmatsym.freealg import NCPoly, t, dt, E, F, K, Kinv
from qmatsym.scalars import Q, ONE, PoleError, specialize


@pytest.fixture(scope="module")
def one_one():
    d = ActionDeriver(1, 1)
    return d, derive_table(1, 1, deriver=d)


@pytest.fixture(scope="module")
def one_two():
    d = ActionDeriver(1, 2)
    return d, derive_table(1, 2, deriver=d)


def test_known_entries(one_one):
    _, tab = one_one
    x = t(1, 1)
    assert tab.entry(K(1), 1, 1) == NCPoly.gen(x, Q ** -2)
    assert tab.entry(Kinv(1), 1, 1) == NCPoly.gen(x, Q ** 2)
    assert derive_action(1, 1, (), 1, 1) == NCPoly.gen(x)


def test_e_and_f_split_into_constant_and_quadratic(one_one):
    _, tab = one_one
    shapes = sorted(len(next(iter(tab.entry(g, 1, 1).terms))) for g in (E(1), F(1)))
    assert shapes == [0, 2]


def test_act_examples(one_one):
    d, tab = one_one
    x = t(1, 1)
    assert act(tab, (K(1),), NCPoly.word((x, x)), d.om) == NCPoly.word((x, x), Q ** -4)
    assert not act(tab, (E(1),), NCPoly.scalar(ONE), d.om)
    assert act(tab, (K(1),), NCPoly.scalar(ONE), d.om) == NCPoly.scalar(ONE)


def test_full_ansatz_agrees_with_weight_restricted(one_one):
    d, tab = one_one
    for g in uq.generators(2):
        p, cert = d.derive(g, 1, 1, 4, restrict=False)
        assert p == tab.entry(g, 1, 1)
        assert cert["unknowns"] == 3 and cert["rank"] == 3


def test_k_inverse_pairs(one_two):
    d, tab = one_two
    A = Action(tab, d.om)
    for i in (1, 2):
        for w in d.om.basis_upto(2):
            p = NCPoly.word(w)
            assert A.word((K(i), Kinv(i)), p) == p


def test_module_algebra_small(one_two):
    d, tab = one_two
    rep = verify_module_algebra(1, 2, tab, 2, d.om)
    assert rep["status"] == "pass"
    groups = {c["name"].split()[0] for c in rep["checks"]}
    assert groups == {"(i)", "(ii)", "(iii)"}


def test_embedding_equivariance(one_two):
    d, tab = one_two
    assert all(c["status"] == "pass" for c in check_pairing_consistency(tab, d))


def test_corrupted_k_entry_fails_with_witness(one_one):
    d, tab = one_one
    bad = tab.with_entry(K(1), 1, 1, tab.entry(K(1), 1, 1) * Q)
    rep = verify_module_algebra(1, 1, bad, 2, d.om)
    failed = {c["name"]: c for c in rep["checks"] if c["status"] == "fail"}
    assert "(i) K1E1=q^2E1K1" in failed
    assert failed["(i) K1E1=q^2E1K1"]["witness"]


def test_grading_report(one_two):
    _, tab = one_two
    rep = verify_grading(1, 2, tab)
    assert rep["status"] == "pass"
    assert rep["shifts"]["E_2"] == [0] and rep["shifts"]["F_2"] == [0]
    assert rep["shifts"]["K_1"] == [0]
    assert sorted(rep["shifts"]["E_1"] + rep["shifts"]["F_1"]) == [-1, 1]


def test_rank_deficiency_below_required_cutoff():
    d = ActionDeriver(1, 2)
    assert required_cutoff(1, 2) == 4
    with pytest.raises(RankDeficient, match="increase L"):
        d.derive(F(1), 2, 1, 3)
    p, cert = d.derive(F(1), 2, 1, 4)
    assert cert["rank"] == cert["unknowns"] == 1


def test_uniqueness_probe_at_workable_cutoffs():
    assert uniqueness_probe(1, 1, 3, 4)["status"] == "pass"
    assert uniqueness_probe(1, 2, 4, 5)["status"] == "pass"
    assert uniqueness_probe(1, 1, 4, 4)["status"] == "pass"


def test_specialization_examples(one_one, one_two):
    d, tab = one_one
    assert specialize_action(1, 1, tab, 2, 3, d.om)["status"] == "pass"
    d2, tab2 = one_two
    rep = specialize_action(1, 2, tab2, Fraction(1, 3), 2, d2.om)
    assert rep["status"] == "pass" and rep["params"]["q0"] == "1/3"
    with pytest.raises(ValueError):
        specialize_action(1, 1, tab, 1, 2, d.om)


def test_specialization_pole_is_named(one_one):
    d, tab = one_one
    bad = tab.with_entry(E(1), 1, 1, NCPoly.scalar(1 / (Q - 2)))
    with pytest.raises(PoleError, match="E_1"):
        specialize_action(1, 1, bad, 2, 1, d.om)


def test_specialization_commutes_with_action(one_two):
    d, tab = one_two
    q0 = Fraction(2)
    A = Action(tab, d.om)
    Asp = Action(specialize_table(tab, q0), d.om.specialize(q0))
    for g in uq.generators(3):
        for w in d.om.basis_upto(2):
            p = NCPoly.word(w)
            gen = A.gen(g, p).map_coeffs(lambda c: specialize(c, q0))
            assert Asp.gen(g, p) == gen


def test_table_json(one_one):
    _, tab = one_one
    js = tab.to_json()
    assert js["K_1"]["t[1,1]"] == "(q^-2) t[1,1]"
    assert js["metadata"]["L"] == 4 and js["metadata"]["m"] == 1


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_uniqueness_from_the_required_cutoff(m, n):
    L = required_cutoff(m, n)
    rep = uniqueness_probe(m, n, L, L + 1)
    assert rep["status"] == "pass", rep["checks"]
