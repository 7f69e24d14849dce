"""Text syntax for noncommutative polynomials with coefficients in Q(q).

    expr   := term (('+' | '-') term)*
    term   := ['-'] factor (['*' | '/'] factor)*      juxtaposition multiplies
    factor := primary ('^' ['-'] int)?
    primary:= int | 'q' | atom | '(' expr ')'
    atom   := t[a,b] | dt[a,b] | u[i,j] | E_i | F_i | K_i | Ki_i

Factor order is the product order.  Division is by scalars only.  Negative
powers are allowed for scalars and K_i (K_i^-1 is Ki_i).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .freealg import NCPoly, Gen, t, dt, u, E, F, K, Kinv
from .scalars import Q, ONE, QRat


class ParseError(ValueError):
    def __init__(self, msg, pos=None):
        self.pos = pos
        super().__init__(f"{msg} at position {pos}" if pos is not None else msg)


class IndexRangeError(ValueError):
    pass


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class QSym:
    pass


@dataclass(frozen=True)
class Atom:
    gen: Gen
    pos: int


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int
    pos: int


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object
    pos: int


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


# --- tokenizer -------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<pair>(?:dt|t|u)\[\s*\d+\s*,\s*\d+\s*\])
  | (?P<chev>(?:Ki|E|F|K)_\d+)
  | (?P<q>q(?![A-Za-z_\d]))
  | (?P<int>\d+)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)

_CTORS = {"t": t, "dt": dt, "u": u, "E": E, "F": F, "K": K, "Ki": Kinv}


def tokenize(src):
    pos, out = 0, []
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


def _atom(text, pos):
    if "[" in text:
        name, rest = text.split("[", 1)
        i, j = (int(x) for x in rest.rstrip("]").split(","))
        return Atom(_CTORS[name](i, j), pos)
    name, idx = text.split("_")
    return Atom(_CTORS[name](int(idx)), pos)


# --- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, src):
        self.toks = tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs if op == "+" else Neg(rhs))
        return node

    def _starts_factor(self, tok):
        return tok[0] in ("pair", "chev", "q", "int") or tok[1] == "("

    def term(self):
        neg = False
        if self.peek()[1] == "-":
            self.take()
            neg = True
        node = self.factor()
        while True:
            tok = self.peek()
            if tok[1] == "*":
                self.take()
                node = Mul(node, self.factor())
            elif tok[1] == "/":
                self.take()
                node = Div(node, self.factor(), tok[2])
            elif self._starts_factor(tok):
                node = Mul(node, self.factor())
            else:
                break
        return Neg(node) if neg else node

    def factor(self):
        base = self.primary()
        if self.peek()[1] == "^":
            pos = self.take()[2]
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            tok = self.peek()
            if tok[0] != "int":
                raise ParseError("expected integer exponent", tok[2])
            self.take()
            return Pow(base, sign * int(tok[1]), pos)
        return base

    def primary(self):
        tok = self.peek()
        kind, text, pos = tok
        if kind == "int":
            self.take()
            return Num(int(text))
        if kind == "q":
            self.take()
            return QSym()
        if kind in ("pair", "chev"):
            self.take()
            return _atom(text, pos)
        if text == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)


def parse(src):
    """Parse text into an expression tree."""
    return _Parser(src).parse()


# --- elaboration -----------------------------------------------------------

def _check_range(g, pos, m, n, N):
    if g.kind in ("t", "dt"):
        a, al = g.idx
        if m is None or n is None:
            return
        if not (1 <= a <= n and 1 <= al <= m):
            raise IndexRangeError(f"{g} out of range for Mat({m},{n}) at position {pos}")
        return
    if N is None:
        return
    if g.kind == "u":
        if not all(1 <= i <= N for i in g.idx):
            raise IndexRangeError(f"{g} out of range for N = {N} at position {pos}")
    elif not 1 <= g.idx[0] <= N - 1:
        raise IndexRangeError(f"{g} out of range for U_q sl_{N} at position {pos}")


def _scalar_of(p: NCPoly):
    if not p.terms:
        return 0 * ONE
    if set(p.terms) == {()}:
        return p.terms[()]
    return None


def elaborate(node, m=None, n=None, N=None, q=Q) -> NCPoly:
    """Turn an expression tree into an NCPoly, checking index ranges."""
    if N is None and m is not None and n is not None:
        N = m + n
    rec = lambda x: elaborate(x, m, n, N, q)
    if isinstance(node, Num):
        return NCPoly.scalar(node.value * (q ** 0))
    if isinstance(node, QSym):
        return NCPoly.scalar(q)
    if isinstance(node, Atom):
        _check_range(node.gen, node.pos, m, n, N)
        return NCPoly.gen(node.gen)
    if isinstance(node, Neg):
        return -rec(node.arg)
    if isinstance(node, Add):
        return rec(node.left) + rec(node.right)
    if isinstance(node, Mul):
        return rec(node.left) * rec(node.right)
    if isinstance(node, Div):
        den = _scalar_of(rec(node.right))
        if den is None:
            raise ParseError("division by a non-scalar", node.pos)
        if not den:
            raise ParseError("division by zero", node.pos)
        return rec(node.left) * (1 / den)
    if isinstance(node, Pow):
        base = rec(node.base)
        e = node.exp
        if e >= 0:
            return base ** e
        s = _scalar_of(base)
        if s is not None:
            if not s:
                raise ParseError("zero to a negative power", node.pos)
            return NCPoly.scalar(s ** e)
        if isinstance(node.base, Atom) and node.base.gen.kind in ("K", "Kinv"):
            g = node.base.gen
            inv = Kinv(g.idx[0]) if g.kind == "K" else K(g.idx[0])
            return NCPoly.gen(inv) ** (-e)
        raise ParseError("negative power of a non-invertible factor", node.pos)
    raise TypeError(f"unknown node {node!r}")


def parse_poly(src, m=None, n=None, N=None, q=Q) -> NCPoly:
    return elaborate(parse(src), m, n, N, q)


def parse_word(src, N=None):
    """A product of generators with coefficient 1, as a tuple of Gens."""
    src = src.strip()
    if src in ("", "1"):
        return ()
    p = parse_poly(src, N=N)
    if len(p.terms) != 1:
        raise ParseError(f"not a single word: {src!r}")
    (w, c), = p.terms.items()
    if c != 1:
        raise ParseError(f"word must have coefficient 1: {src!r}")
    return w
