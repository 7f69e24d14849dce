"""Matrix coefficients of the natural representation as functionals on
U_q sl_N, quantum minors, convolution division, and the embedding of the
quantum matrix space into the dual of U_q sl_{m+n}.

Functionals are evaluated lazily on words and memoized.  Every functional
met here is a weight vector: it vanishes on a word unless the word's weight
(E_i counts +1 and F_i counts -1 in coordinate i) equals its own.  That is
what keeps long words affordable; a :class:`FunctionalTable` is the
materialized form on all words up to a cutoff.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product

from . import uq
from .freealg import NCPoly, u, word_str, add_into
from .scalars import Q, QRat, ZERO, ONE


class NotInvertible(ZeroDivisionError):
    pass


# ---------------------------------------------------------------------------
# weights, words, coproducts
# ---------------------------------------------------------------------------

def gen_weight(g, N):
    w = [0] * (N - 1)
    if g.kind == "E":
        w[g.idx[0] - 1] = 1
    elif g.kind == "F":
        w[g.idx[0] - 1] = -1
    return tuple(w)


_wcache: dict = {}


def word_weight(w, N):
    key = (w, N)
    hit = _wcache.get(key)
    if hit is not None:
        return hit
    if not w:
        res = (0,) * (N - 1)
    else:
        head = word_weight(w[:-1], N)
        g = w[-1]
        if g.kind in ("E", "F"):
            i = g.idx[0] - 1
            res = head[:i] + (head[i] + (1 if g.kind == "E" else -1),) + head[i + 1:]
        else:
            res = head
    _wcache[key] = res
    return res


def u_weight(i, j, N):
    """Weight of the matrix coefficient u[i,j]: it pairs with E_i ... E_{j-1}."""
    w = [0] * (N - 1)
    lo, hi, s = (i, j, 1) if i <= j else (j, i, -1)
    for k in range(lo, hi):
        w[k - 1] = s
    return tuple(w)


def height(wt):
    return sum(abs(c) for c in wt)


def add_weights(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sub_weights(a, b):
    return tuple(x - y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def words_upto(N, L):
    """All words of length <= L over the generators of U_q sl_N, by length."""
    gens = uq.generators(N)
    out = []
    for ln in range(L + 1):
        out.extend(product(gens, repeat=ln))
    return tuple(out)


@lru_cache(maxsize=None)
def words_of_weight(N, wt, L, alphabet=None):
    """All words of length <= L (full alphabet unless given) with weight wt,
    ordered by length then generator order."""
    gens = tuple(uq.generators(N)) if alphabet is None else tuple(alphabet)
    gw = [(g, gen_weight(g, N)) for g in gens]
    out = []

    def rec(prefix, cur, left):
        if cur == wt:
            out.append(prefix)
        if not left:
            return
        for g, w in gw:
            nxt = add_weights(cur, w)
            if height(sub_weights(wt, nxt)) <= left - 1:
                rec(prefix + (g,), nxt, left - 1)

    rec((), (0,) * (N - 1), L)
    out.sort(key=lambda w: (len(w), [uq.generators(N).index(g) for g in w]))
    return tuple(out)


def pure_e_words(N, wt):
    """Words in the E_i alone with weight wt (all of minimal length)."""
    if any(c < 0 for c in wt):
        return ()
    es = tuple(uq.E(i) for i in range(1, N))
    return words_of_weight(N, wt, height(wt), es)


_split_cache: dict = {}


def split(w):
    """Legs (left, right) of Delta(w); every coefficient is 1."""
    hit = _split_cache.get(w)
    if hit is not None:
        return hit
    if not w:
        res = (((), ()),)
    else:
        head = split(w[:-1])
        g = w[-1]
        lcs = uq.letter_coproduct(g, 2)
        res = tuple((l + lc[0], r + lc[1]) for (l, r) in head for lc in lcs)
    _split_cache[w] = res
    return res


def ef_count(w):
    return sum(1 for g in w if g.kind in ("E", "F"))


def grouplike_part(w):
    """Left leg of the unique Delta-term of w whose right leg is w."""
    return tuple(uq.K(g.idx[0]) if g.kind == "E" else g for g in w if g.kind != "F")


# ---------------------------------------------------------------------------
# lazy functionals
# ---------------------------------------------------------------------------

class Functional:
    """A weight-homogeneous linear functional on U_q sl_N, evaluated on words."""

    def __init__(self, N, weight):
        self.N = N
        self.weight = tuple(weight)
        self._memo = {}

    def __call__(self, w):
        w = tuple(w)
        if word_weight(w, self.N) != self.weight:
            return ZERO
        hit = self._memo.get(w)
        if hit is None:
            hit = self._memo[w] = self._eval(w)
        return hit

    def _eval(self, w):
        raise NotImplementedError

    def table(self, L, words=None):
        """Materialize on all words of length <= L (or on the given words)."""
        if words is None:
            words = words_of_weight(self.N, self.weight, L)
        vals = {}
        for w in words:
            v = self(w)
            if v:
                vals[w] = v
        return FunctionalTable(self.N, L, vals, self.weight)

    def __mul__(self, other):
        return Convolution(self, other)


class MatrixCoefficient(Functional):
    """<p, .> for a weight-homogeneous polynomial p in the u[i,j]."""

    def __init__(self, p: NCPoly, N):
        groups = {}
        wt = None
        for w, c in p.terms.items():
            for g in w:
                if g.kind != "u":
                    raise ValueError(f"not a matrix coefficient: {g}")
                if not all(1 <= i <= N for i in g.idx):
                    raise IndexError(f"{g} out of range for N = {N}")
            ww = (0,) * (N - 1)
            for g in w:
                ww = add_weights(ww, u_weight(*g.idx, N))
            if wt is None:
                wt = ww
            elif ww != wt:
                raise ValueError("matrix-coefficient polynomial is not weight homogeneous")
            I = tuple(g.idx[0] for g in w)
            J = tuple(g.idx[1] for g in w)
            groups.setdefault((len(w), I), {})[J] = c
        super().__init__(N, wt if wt is not None else (0,) * (N - 1))
        self.poly = p
        self._groups = groups
        self._vecs = {}

    def _vec(self, k, I, w):
        key = (k, I, w)
        hit = self._vecs.get(key)
        if hit is not None:
            return hit
        if not w:
            res = {I: ONE}
        else:
            prev = self._vec(k, I, w[:-1])
            res = _tensor_images(self.N, k).step(prev, w[-1]) if prev else {}
        self._vecs[key] = res
        return res

    def _eval(self, w):
        total = ZERO
        for (k, I), cols in self._groups.items():
            if k == 0:
                if uq.counit(w):
                    total = total + cols[()]
                continue
            vec = self._vec(k, I, w)
            for J, c in cols.items():
                v = vec.get(J)
                if v:
                    total = total + c * v
        return total


class Counit(Functional):
    def __init__(self, N):
        super().__init__(N, (0,) * (N - 1))

    def _eval(self, w):
        return ONE if uq.counit(w) else ZERO


class Convolution(Functional):
    """(f g)(w) = sum over Delta(w) of f(w') g(w'')."""

    def __init__(self, f, g):
        super().__init__(f.N, add_weights(f.weight, g.weight))
        self.f, self.g = f, g

    def _eval(self, w):
        f, g, N, fw = self.f, self.g, self.N, self.f.weight
        acc = ZERO
        for l, r in split(w):
            if word_weight(l, N) != fw:
                continue
            a = f(l)
            if a:
                b = g(r)
                if b:
                    acc = acc + a * b
        return acc


class LinearCombination(Functional):
    def __init__(self, terms, N, weight):
        super().__init__(N, weight)
        self.terms = [(c, f) for c, f in terms if c]
        for _, f in self.terms:
            if f.weight != self.weight:
                raise ValueError("linear combination of functionals of different weights")

    def _eval(self, w):
        acc = ZERO
        for c, f in self.terms:
            v = f(w)
            if v:
                acc = acc + c * v
        return acc


class Quotient(Functional):
    """The functional f with x * f = y (convolution), evaluated on demand.

    In Delta(w) exactly one term has right leg w; its left leg is the
    grouplike word obtained by turning each E_i into K_i and dropping each
    F_i.  All other right legs have fewer E/F letters, so the recursion
    below terminates, with pivots <x, grouplike word>.
    """

    def __init__(self, x: Functional, y: Functional):
        super().__init__(x.N, sub_weights(y.weight, x.weight))
        if not x(()):
            raise NotInvertible("not invertible at identity: <x, 1> = 0")
        self.x, self.y = x, y

    def _eval(self, w):
        x, N, xw = self.x, self.N, self.x.weight
        acc = self.y(w)
        pivot = x(grouplike_part(w))
        if not pivot:
            raise NotInvertible(f"vanishing pivot pairing on {word_str(w)}")
        for l, r in split(w):
            if r == w or word_weight(l, N) != xw:
                continue
            a = x(l)
            if a:
                b = self(r)
                if b:
                    acc = acc - a * b
        return acc / pivot if acc else ZERO


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

@dataclass
class FunctionalTable:
    """Values of a functional on all words of length <= L (zeros omitted)."""

    N: int
    L: int
    values: dict = field(default_factory=dict)
    weight: tuple = None

    def __call__(self, w):
        return self.values.get(tuple(w), ZERO)

    def __sub__(self, other):
        out = dict(self.values)
        add_into(out, other.values, -1)
        return FunctionalTable(self.N, min(self.L, other.L), out)

    def is_zero(self):
        return not any(self.values.values())

    def nonzero_witness(self):
        for w in sorted(self.values, key=lambda w: (len(w), word_str(w))):
            if self.values[w]:
                return w, self.values[w]
        return None

    def to_json(self):
        return {word_str(w): str(v) for w, v in
                sorted(self.values.items(), key=lambda t: (len(t[0]), word_str(t[0]))) if v}

    def dumps(self):
        return json.dumps(self.to_json(), indent=1)


# ---------------------------------------------------------------------------
# matrix coefficients
# ---------------------------------------------------------------------------

class _TensorImages:
    """pi^(x)k o Delta^(k-1) on generators, applied to sparse row vectors."""

    def __init__(self, N, k, q=Q):
        self.N, self.k = N, k
        self.trep = uq.TensorRep(uq.natural_rep(N, q), k)

    def step(self, vec, g):
        m = self.trep.gen(g)
        out = {}
        for i, v in vec.items():
            row = m.get(i)
            if row:
                for j, w in row.items():
                    x = out.get(j)
                    y = v * w if x is None else x + v * w
                    if y:
                        out[j] = y
                    elif x is not None:
                        del out[j]
        return out


_images: dict = {}


def _tensor_images(N, k):
    hit = _images.get((N, k))
    if hit is None:
        hit = _images[(N, k)] = _TensorImages(N, k)
    return hit


def pair(p: NCPoly, w, N) -> QRat:
    """<p, w>: the ((i_1..i_k),(j_1..j_k)) entries of pi^(x)k Delta^(k-1)(w),
    summed over the monomials u[i_1,j_1] ... u[i_k,j_k] of p."""
    total = ZERO
    for mono, c in p.terms.items():
        total = total + c * MatrixCoefficient(NCPoly.word(mono), N)(w)
    return total


def pair_table(p: NCPoly, N, L) -> FunctionalTable:
    return MatrixCoefficient(p, N).table(L)


# ---------------------------------------------------------------------------
# minors
# ---------------------------------------------------------------------------

def perm_length(w) -> int:
    """Number of inversions of a permutation given as a sequence."""
    w = list(w)
    return sum(1 for a in range(len(w)) for b in range(a + 1, len(w)) if w[a] > w[b])


@dataclass(frozen=True)
class Minor:
    m: int
    cols: tuple

    def __post_init__(self):
        cols = tuple(self.cols)
        object.__setattr__(self, "cols", cols)
        if len(cols) != self.m:
            raise ValueError(f"minor needs {self.m} columns, got {cols}")
        if any(b <= a for a, b in zip(cols, cols[1:])):
            raise ValueError(f"minor columns must increase strictly: {cols}")
        if cols and cols[0] < 1:
            raise ValueError(f"minor column out of range: {cols}")

    def __str__(self):
        return "x(" + ",".join(map(str, self.cols)) + ")"


def minor_expand(mn: Minor, q=Q) -> NCPoly:
    """sum over w in S_m of (-q)^l(w) u[1,j_w(1)] ... u[m,j_w(m)]."""
    out = {}
    for w in permutations(range(mn.m)):
        word = tuple(u(r + 1, mn.cols[w[r]]) for r in range(mn.m))
        add_into(out, {word: (-q) ** perm_length(w)})
    return NCPoly(out)


def as_functional(x, N):
    if isinstance(x, Functional):
        return x
    return MatrixCoefficient(x, N)


def dual_divide(x, y, N, L) -> FunctionalTable:
    """Table of f with x * f = y on all words of length <= L."""
    return Quotient(as_functional(x, N), as_functional(y, N)).table(L)


def convolution_residual(x, f, y, N, L):
    """x * f - y on all words of length <= L, as a table."""
    x, y = as_functional(x, N), as_functional(y, N)
    lhs = Convolution(x, f)
    vals = {}
    for w in words_of_weight(N, y.weight, L):
        v = lhs(w) - y(w)
        if v:
            vals[w] = v
    return FunctionalTable(N, L, vals, y.weight)


# ---------------------------------------------------------------------------
# embedding of the quantum matrix space
# ---------------------------------------------------------------------------

def embed(m, n, a, alpha):
    """(denominator, numerator) minors for the image of t[a, alpha]."""
    if not (1 <= a <= n and 1 <= alpha <= m):
        raise IndexError(f"t[{a},{alpha}] out of range for Mat({m},{n})")
    den = Minor(m, tuple(range(1, m + 1)))
    cols = [c for c in range(1, m + 1) if c != m + 1 - alpha] + [m + a]
    return den, Minor(m, tuple(sorted(cols)))


def coordinate_weight(m, n, a, alpha):
    """Weight of i(t[a, alpha]): it pairs with E_{m+1-alpha} ... E_{m+a-1}."""
    return u_weight(m + 1 - alpha, m + a, m + n)


class Embedding:
    """Images of t-monomials in (U_q sl_{m+n})^*, memoized per monomial."""

    def __init__(self, m, n):
        self.m, self.n, self.N = m, n, m + n
        den, _ = embed(m, n, 1, 1)
        self.den = MatrixCoefficient(minor_expand(den), self.N)
        self._funcs = {}

    def coordinate(self, a, alpha):
        return self.monomial(((a, alpha),))

    def monomial(self, idx):
        """i(t[idx_1] ... t[idx_k]); idx is a tuple of (a, alpha) pairs."""
        idx = tuple(tuple(i) for i in idx)
        hit = self._funcs.get(idx)
        if hit is not None:
            return hit
        if not idx:
            res = Counit(self.N)
        elif len(idx) == 1:
            a, alpha = idx[0]
            _, num = embed(self.m, self.n, a, alpha)
            res = Quotient(self.den, MatrixCoefficient(minor_expand(num), self.N))
        else:
            res = Convolution(self.monomial(idx[:1]), self.monomial(idx[1:]))
        self._funcs[idx] = res
        return res

    def word(self, w):
        for g in w:
            if g.kind != "t":
                raise ValueError(f"only t-generators embed: {g}")
        return self.monomial(tuple(g.idx for g in w))

    def weight_of(self, w):
        wt = (0,) * (self.N - 1)
        for g in w:
            wt = add_weights(wt, coordinate_weight(self.m, self.n, *g.idx))
        return wt

    def poly(self, p: NCPoly):
        """i(p) for a weight-homogeneous polynomial in the t's."""
        terms = [(c, self.word(w)) for w, c in p.terms.items()]
        wts = {self.weight_of(w) for w in p.terms}
        if len(wts) > 1:
            raise ValueError("polynomial is not weight homogeneous")
        wt = wts.pop() if wts else (0,) * (self.N - 1)
        return LinearCombination(terms, self.N, wt)


# ---------------------------------------------------------------------------
# embedding checks
# ---------------------------------------------------------------------------

def _check(name, witness=None):
    c = {"name": name, "status": "pass" if witness is None else "fail"}
    if witness is not None:
        c["witness"] = witness
    return c


def embed_check(m, n, L=4, D=3, om=None, relations=None):
    """Relation compatibility and injectivity evidence for the embedding.

    (i) every tt relation, mapped to the convolution algebra, vanishes on
    all words of length <= L.
    (ii) the images of all normal t-monomials of degree <= D are linearly
    independent.  Images of different weight are independent automatically,
    so ranks are taken per weight block.  A monomial of weight mu pairs to
    zero with every word shorter than height(mu), so each block is probed
    with all words of length <= max(L, height(mu)); blocks that needed the
    extension are listed under "extended_blocks".
    """
    from . import linalg, qmatcalc
    from .freealg import render
    if om is None:
        om = qmatcalc.build_calculus(m, n, max(2, D))
    emb = Embedding(m, n)
    N = m + n
    rels = om.tt if relations is None else relations
    checks = []
    for k, r in enumerate(rels):
        f = emb.poly(r)
        bad = None
        for w in words_of_weight(N, f.weight, L):
            v = f(w)
            if v:
                bad = f"{render(r)} on {word_str(w) or '1'}: {v}"
                break
        checks.append(_check(f"relation {k + 1} vanishes on words of length <= {L}", bad))
    coords = qmatcalc.coordinates(m, n)
    blocks = {}
    for d in range(D + 1):
        for w in om.rules.normal_words(coords, d):
            blocks.setdefault(emb.weight_of(w), []).append(w)
    extended = []
    total_rank = 0
    count = 0
    bad = None
    for wt in sorted(blocks):
        monos = blocks[wt]
        h = height(wt)
        cutoff = max(L, h)
        if h > L:
            extended.append({"weight": list(wt), "height": h, "monomials": len(monos)})
        probes = words_of_weight(N, wt, cutoff)
        rows = []
        for eta in probes:
            row = {}
            for j, w in enumerate(monos):
                v = emb.word(w)(eta)
                if v:
                    row[j] = v
            if row:
                rows.append(row)
        rk = linalg.rank(rows)
        total_rank += rk
        count += len(monos)
        if rk < len(monos) and bad is None:
            bad = (f"weight {list(wt)}: rank {rk} < {len(monos)} monomials "
                   f"({', '.join(word_str(w) for w in monos)})")
    checks.append(_check(f"images of {count} normal monomials of degree <= {D} independent", bad))
    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    return {"suite": "embed", "params": {"m": m, "n": n, "N": N, "L": L, "maxdeg": D},
            "checks": checks, "status": status, "rank": total_rank, "monomials": count,
            "extended_blocks": extended}
