import random

import pytest
from hypothesis import given, settings, strategies as st

from qmatsym import qmatcalc
from qmatsym.qmatcalc import (rhat, RHatError, omega_relations, build_calculus, differential,
                              FlatnessError, expected_dimension, check_differential, d_free,
                              drop_rule)
from qmatsym.freealg import NCPoly, t, dt, render
from qmatsym.scalars import Q, ONE


@pytest.fixture(scope="module")
def calc():
    return {s: build_calculus(*s, checkdeg=3) for s in [(1, 1), (1, 2), (2, 1), (2, 2)]}


def test_rhat_entries():
    r = rhat(3)
    assert r(1, 1, 1, 1) == Q ** -1
    assert r(2, 1, 1, 2) == 1
    assert r(1, 2, 1, 2) == Q ** -1 - Q
    assert r(2, 1, 2, 1) == 0


@pytest.mark.parametrize("N", [2, 3, 4])
def test_rhat_identities(N):
    r = rhat(N, validate=False)
    assert not any(r.hecke_defect().values())
    assert not any(r.braid_defect().values())


def test_rhat_flipped_entry_is_caught():
    with pytest.raises(RHatError):
        rhat(3, corrupt=((2, 1), (1, 2)))


def test_relations_for_one_by_one():
    tt, tdt, dd = omega_relations(1, 1)
    x, dx = t(1, 1), dt(1, 1)
    assert tt == []
    assert tdt == [NCPoly.word((x, dx), Q ** -2) - NCPoly.word((dx, x))]
    assert dd == [NCPoly.word((dx, dx), Q ** -2 + 1)]


def test_one_by_two_is_a_quantum_plane(calc):
    om = calc[(1, 2)]
    rule = om.rules.rules[(t(2, 1), t(1, 1))]
    assert rule == NCPoly.word((t(1, 1), t(2, 1)), Q ** -1)


def test_calculus_dimensions(calc):
    assert len(calc[(1, 1)].basis(3, 0)) == 1
    assert len(calc[(1, 2)].basis(2, 0)) == 3
    assert len(calc[(1, 2)].basis(0, 2)) == 1
    assert len(calc[(2, 2)].basis(1, 1)) == 16


def test_expected_dimension():
    assert expected_dimension(2, 2, 1, 1) == 16
    assert expected_dimension(1, 2, 0, 3) == 0


def test_differential_examples(calc):
    om = calc[(1, 1)]
    x, dx = t(1, 1), dt(1, 1)
    assert differential(NCPoly.gen(x), om) == NCPoly.gen(dx)
    assert differential(NCPoly.word((x, x)), om) == NCPoly.word((x, dx), 1 + Q ** -2)
    assert not differential(NCPoly.gen(dx), om)


@pytest.mark.parametrize("shape", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_differential_is_well_defined(calc, shape):
    assert all(c["status"] == "pass" for c in check_differential(calc[shape], 3))


@pytest.mark.parametrize("shape", [(1, 2), (2, 1), (2, 2)])
def test_forms_above_top_degree_vanish(calc, shape):
    om = calc[shape]
    top = shape[0] * shape[1]
    assert om.basis(0, top) and not om.basis(0, top + 1)


def test_leibniz_random(calc):
    om = calc[(2, 2)]
    rng = random.Random(3)
    words = om.basis_upto(3)
    for _ in range(40):
        a, b = rng.choice(words), rng.choice(words)
        pa, pb = NCPoly.word(a), NCPoly.word(b)
        sign = (-1) ** qmatcalc.form_degree(a)
        lhs = differential(om.nf(pa * pb), om)
        rhs = om.nf(d_free(pa) * pb + sign * (pa * d_free(pb)))
        assert lhs == rhs


def test_dropped_rule_breaks_flatness(calc):
    om = drop_rule(calc[(1, 2)])
    rows = om.flatness_table(2)
    bad = [r for r in rows if not r["match"]]
    assert bad and (bad[0]["d"], bad[0]["k"]) == (2, 0)


def test_swapped_product_order_is_not_flat():
    with pytest.raises(FlatnessError):
        build_calculus(1, 2, 2, order="swapped")


def test_rules_json(calc):
    js = calc[(1, 1)].to_json()
    assert js["dt[1,1] t[1,1]"] == "dt[1,1] t[1,1] -> (q^-2) t[1,1] dt[1,1]"
