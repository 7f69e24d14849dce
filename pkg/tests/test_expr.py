import pytest
from hypothesis import given, strategies as st

from qmatsym.expr import parse, parse_poly, parse_word, ParseError, IndexRangeError
from qmatsym.freealg import NCPoly, t, dt, E, K, Kinv, u, render
from qmatsym.scalars import Q


def test_examples():
    assert parse_poly("t[1,1]^2") == NCPoly.word((t(1, 1), t(1, 1)))
    p = parse_poly("(q^-1 - q) dt[1,1] t[1,1]")
    assert p == NCPoly.word((dt(1, 1), t(1, 1)), Q ** -1 - Q)
    with pytest.raises(IndexRangeError):
        parse_poly("t[3,1]", m=1, n=2)


def test_operators():
    assert parse_poly("2*q^-1 E_1") == NCPoly.gen(E(1), 2 * Q ** -1)
    assert parse_poly("K_1^-1") == NCPoly.gen(Kinv(1))
    assert parse_poly("(q/(q^2 - 1)) u[1,2]") == NCPoly.gen(u(1, 2), Q / (Q ** 2 - 1))
    assert parse_poly("-t[1,1] + t[1,1]") == NCPoly()
    assert parse_word("E_1 K_2") == (E(1), K(2))


def test_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse("t[1,1] + * 2")
    assert e.value.pos == 9
    with pytest.raises(ParseError):
        parse_poly("t[1,1]^-1")
    with pytest.raises(ParseError):
        parse_poly("E_1 / t[1,1]")
    with pytest.raises(ParseError):
        parse("(t[1,1]")


atoms = st.sampled_from(["t[1,1]", "t[2,1]", "dt[1,2]", "E_1", "K_2", "u[1,3]"])
coefs = st.sampled_from(["", "2 ", "(q) ", "(q^-1 - q) ", "(-3*q^2) ", "(q/(q^2 - 1)) "])


@given(st.lists(st.tuples(coefs, st.lists(atoms, min_size=1, max_size=3)), min_size=1, max_size=4))
def test_render_round_trip(terms):
    src = " + ".join(c + " ".join(w) for c, w in terms)
    p = parse_poly(src)
    assert parse_poly(render(p)) == p
