import random

import pytest
from hypothesis import given, strategies as st

from qmatsym import uq
from qmatsym.freealg import NCPoly, u, E, F, K, Kinv
from qmatsym.pairing import (pair, perm_length, Minor, minor_expand, dual_divide, embed,
                             Embedding, MatrixCoefficient, Quotient, Convolution, Counit,
                             convolution_residual, words_upto, words_of_weight, embed_check,
                             NotInvertible, split)
from qmatsym.scalars import Q, ONE, ZERO

U = lambda i, j: NCPoly.gen(u(i, j))


def test_pair_examples():
    assert pair(U(1, 1), (K(1),), 2) == Q
    assert pair(U(1, 2), (E(1),), 2) == 1
    assert pair(U(1, 1) * U(2, 2), (), 2) == 1
    assert pair(U(1, 1) * U(1, 2), (E(1),), 2) == Q
    assert pair(U(1, 2) * U(1, 1), (E(1),), 2) == 1


def test_perm_length():
    assert perm_length((1, 2, 3)) == 0
    assert perm_length((2, 1)) == 1
    assert perm_length((3, 2, 1)) == 3


@given(st.permutations(range(5)))
def test_perm_length_plus_reversal(w):
    w = tuple(w)
    rev = tuple(w[len(w) - 1 - i] for i in range(len(w)))
    assert perm_length(w) + perm_length(rev) == 10


def test_minor_expand():
    assert minor_expand(Minor(1, (3,))) == U(1, 3)
    assert minor_expand(Minor(2, (1, 2))) == U(1, 1) * U(2, 2) - Q * U(1, 2) * U(2, 1)
    assert minor_expand(Minor(2, (1, 3))) == U(1, 1) * U(2, 3) - Q * U(1, 3) * U(2, 1)
    assert len(minor_expand(Minor(3, (1, 2, 4))).terms) == 6
    with pytest.raises(ValueError):
        Minor(2, (3, 1))


def test_dual_divide_examples():
    f = dual_divide(U(1, 1), U(1, 2), 2, 1)
    assert f((E(1),)) == Q ** -1
    one = NCPoly.scalar(ONE)
    g = dual_divide(one, U(1, 2), 2, 3)
    for w in words_upto(2, 3):
        assert g(w) == pair(U(1, 2), w, 2)
    h = dual_divide(U(1, 1), U(1, 1), 2, 3)
    for w in words_upto(2, 3):
        assert h(w) == uq.counit(w)


def test_dual_divide_not_invertible():
    with pytest.raises(NotInvertible):
        dual_divide(U(1, 2), U(1, 1), 2, 2)


def test_embed_examples():
    assert embed(1, 1, 1, 1) == (Minor(1, (1,)), Minor(1, (2,)))
    assert embed(2, 1, 1, 1)[1].cols == (1, 3)
    assert embed(2, 2, 2, 2)[1].cols == (2, 4)
    with pytest.raises(IndexError):
        embed(1, 2, 3, 1)


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1)])
def test_dual_divide_consistency(m, n):
    emb = Embedding(m, n)
    for a in range(1, n + 1):
        for al in range(1, m + 1):
            f = emb.coordinate(a, al)
            num = f.y
            res = convolution_residual(emb.den, f, num, m + n, 3)
            assert res.is_zero()


def test_lazy_values_match_full_tables():
    # every word up to length 3 over the whole alphabet, weight filter included
    emb = Embedding(1, 2)
    f = emb.coordinate(2, 1)
    full = {w: f(w) for w in words_upto(3, 3) if f(w)}
    assert full == f.table(3).values
    assert f.table(3).to_json()["E_1 E_2"] == "q^-1"


@pytest.mark.parametrize("m,n", [(1, 2), (2, 1)])
def test_grouplike_scaling(m, n):
    emb = Embedding(m, n)
    N = m + n
    rng = random.Random(7)
    kwords = [(K(1),), (Kinv(2),), (K(2), K(1))]
    for a in range(1, n + 1):
        for al in range(1, m + 1):
            f = emb.coordinate(a, al)
            probes = words_of_weight(N, f.weight, 3)
            for kap in kwords:
                ratios = {f(eta + kap) / f(eta) for eta in probes if f(eta)}
                assert len(ratios) == 1
                r = ratios.pop()
                assert r.is_laurent() and len(r.laurent_terms()) == 1


words3 = st.lists(st.sampled_from(uq.generators(3)), max_size=3).map(tuple)
umono = st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=2)


@given(umono, umono, words3)
def test_pairing_is_multiplicative(p, r, w):
    P = NCPoly.word(tuple(u(i, j) for i, j in p))
    R = NCPoly.word(tuple(u(i, j) for i, j in r))
    lhs = pair(P * R, w, 3)
    rhs = sum((pair(P, a, 3) * pair(R, b, 3) for a, b in split(w)), ZERO)
    assert lhs == rhs


def test_embed_check_examples():
    rep = embed_check(1, 1, 4, 3)
    assert rep["status"] == "pass" and rep["rank"] == 4
    rep = embed_check(1, 2, 3, 2)
    assert rep["status"] == "pass"
    assert sum(1 for c in rep["checks"] if c["name"].startswith("relation")) == 2


def test_height_bounds_probe_length():
    # t[2,1]^3 in Mat(1,2) only pairs with words of length >= 6
    emb = Embedding(1, 2)
    f = emb.monomial(((2, 1),) * 3)
    assert not f.table(5).values
    assert f.table(6).values


def test_unflipped_r_matrix_contradicts_the_embedding():
    from qmatsym.qmatcalc import omega_relations
    tt, _, _ = omega_relations(1, 2, orientation="as-written")
    rep = embed_check(1, 2, 3, 1, relations=tt)
    assert rep["status"] == "fail"
    assert any("witness" in c for c in rep["checks"])
