"""U_q sl_N as presented data: relations, coproduct, antipode, counit, the
natural representation, and checks of the Hopf structure inside it.

Elements of U_q are never brought to a normal form.  Everything downstream
evaluates words, either through representations or through actions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import linalg
from .freealg import NCPoly, E, F, K, Kinv, Gen, word_str, add_into
from .scalars import Q


def cartan(N):
    """Cartan matrix of sl_N as a dict {(i, j): a_ij}, 1-based."""
    if N < 2:
        raise ValueError("N must be at least 2")
    a = {}
    for i in range(1, N):
        for j in range(1, N):
            d = abs(i - j)
            a[i, j] = 2 if d == 0 else (-1 if d == 1 else 0)
    return a


def generators(N):
    return [g for i in range(1, N) for g in (E(i), F(i), K(i), Kinv(i))]


def is_grouplike(g: Gen):
    return g.kind in ("K", "Kinv")


def relations(N, q=Q):
    """Defining relations as a list of ``(name, NCPoly)``, each meaning
    ``poly = 0``."""
    a = cartan(N)
    one = q ** 0
    w = NCPoly.word
    out = []
    rng = range(1, N)
    for i in rng:
        for j in rng:
            if i < j:
                out.append((f"K{i}K{j}=K{j}K{i}", w((K(i), K(j))) - w((K(j), K(i)))))
    for i in rng:
        out.append((f"K{i}Ki{i}=1", w((K(i), Kinv(i))) - NCPoly.scalar(one)))
        out.append((f"Ki{i}K{i}=1", w((Kinv(i), K(i))) - NCPoly.scalar(one)))
    for i in rng:
        for j in rng:
            out.append((f"K{i}E{j}=q^{a[i, j]}E{j}K{i}",
                        w((K(i), E(j))) - w((E(j), K(i)), q ** a[i, j])))
    for i in rng:
        for j in rng:
            out.append((f"K{i}F{j}=q^{-a[i, j]}F{j}K{i}",
                        w((K(i), F(j))) - w((F(j), K(i)), q ** -a[i, j])))
    for i in rng:
        for j in rng:
            r = w((E(i), F(j))) - w((F(j), E(i)))
            if i == j:
                c = 1 / (q - q ** -1)
                r = r - w((K(i),), c) + w((Kinv(i),), c)
            out.append((f"[E{i},F{j}]", r))
    qq = q + q ** -1
    for X, name in ((E, "E"), (F, "F")):
        for i in rng:
            for j in rng:
                if abs(i - j) == 1:
                    r = (w((X(i), X(i), X(j))) - w((X(i), X(j), X(i)), qq)
                         + w((X(j), X(i), X(i))))
                    out.append((f"Serre {name}{i}^2{name}{j}", r))
    for X, name in ((E, "E"), (F, "F")):
        for i in rng:
            for j in rng:
                if i < j and abs(i - j) > 1:
                    out.append((f"[{name}{i},{name}{j}]",
                                w((X(i), X(j))) - w((X(j), X(i)))))
    return out


# ---------------------------------------------------------------------------
# grading
# ---------------------------------------------------------------------------

@dataclass
class UqGrading:
    """Integer grading of U_q sl_N with only E_m, F_m possibly nonzero."""

    N: int
    m: int
    deg_E: int = 1
    deg_F: int = -1

    def gen_degree(self, g: Gen):
        if g.idx[0] == self.m:
            if g.kind == "E":
                return self.deg_E
            if g.kind == "F":
                return self.deg_F
        return 0

    def degree(self, w):
        return sum(self.gen_degree(g) for g in w)

    def homogeneity(self, q=Q):
        """{relation name: True if homogeneous}."""
        return {
            name: len({self.degree(w) for w in r.terms}) <= 1
            for name, r in relations(self.N, q)
        }


# ---------------------------------------------------------------------------
# coproduct / antipode / counit
# ---------------------------------------------------------------------------

_ONE_WORD = ()


def letter_coproduct(g: Gen, k: int):
    """Delta^(k-1)(g) as a list of k-tuples of single-letter-or-empty words."""
    if k == 1:
        return [((g,),)]
    if g.kind == "E":
        kk = K(g.idx[0])
        return [tuple((kk,) if r < j else ((g,) if r == j else ()) for r in range(k))
                for j in range(k)]
    if g.kind == "F":
        ki = Kinv(g.idx[0])
        return [tuple(() if r < j else ((g,) if r == j else (ki,)) for r in range(k))
                for j in range(k)]
    if g.kind in ("K", "Kinv"):
        return [tuple((g,) for _ in range(k))]
    raise ValueError(f"not a U_q generator: {g}")


class TensorPoly:
    """Linear combination of k-tuples of words."""

    __slots__ = ("k", "terms")

    def __init__(self, k, terms=None):
        self.k = k
        self.terms = {}
        if terms:
            add_into(self.terms, terms)

    def __mul__(self, other):
        out = {}
        for l1, c1 in self.terms.items():
            for l2, c2 in other.terms.items():
                add_into(out, {tuple(a + b for a, b in zip(l1, l2)): c1 * c2})
        return TensorPoly(self.k, out)

    def __eq__(self, other):
        return self.k == other.k and self.terms == other.terms

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        parts = []
        for legs, c in sorted(self.terms.items(), key=lambda t: str(t[0])):
            s = " (x) ".join(word_str(w) for w in legs)
            parts.append(s if c == 1 else f"({c}) {s}")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def coproduct(w, k=2):
    """Delta^(k-1)(w) with unreduced legs."""
    if k < 2:
        raise ValueError("k must be at least 2")
    acc = {tuple(() for _ in range(k)): 1}
    for g in w:
        nxt = {}
        for legs, c in acc.items():
            for lc in letter_coproduct(g, k):
                key = tuple(a + b for a, b in zip(legs, lc))
                add_into(nxt, {key: c})
        acc = nxt
    return TensorPoly(k, acc)


def coproduct_bracketed(w, side):
    """Delta applied twice, to the left leg (side='left') or the right leg."""
    once = coproduct(w, 2)
    out = {}
    for (l, r), c in once.terms.items():
        if side == "left":
            for (l1, l2), c2 in coproduct(l, 2).terms.items():
                add_into(out, {(l1, l2, r): c * c2})
        else:
            for (r1, r2), c2 in coproduct(r, 2).terms.items():
                add_into(out, {(l, r1, r2): c * c2})
    return TensorPoly(3, out)


def cancel_k(w):
    """Remove adjacent K_i Ki_i and Ki_i K_i pairs."""
    out = []
    for g in w:
        if out and out[-1].idx == g.idx and {out[-1].kind, g.kind} == {"K", "Kinv"}:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def _antipode_letter(g):
    i = g.idx[0]
    if g.kind == "E":
        return [((Kinv(i), g), -1)]
    if g.kind == "F":
        return [((g, K(i)), -1)]
    if g.kind == "K":
        return [((Kinv(i),), 1)]
    if g.kind == "Kinv":
        return [((K(i),), 1)]
    raise ValueError(f"not a U_q generator: {g}")


def antipode(w) -> NCPoly:
    """S(w), anti-multiplicative, with adjacent K K^-1 pairs cancelled."""
    acc = {(): 1}
    for g in w:
        nxt = {}
        for word, c in acc.items():
            for sw, sc in _antipode_letter(g):
                add_into(nxt, {cancel_k(sw + word): c * sc})
        acc = nxt
    return NCPoly(acc)


def counit(w):
    return 0 if any(g.kind in ("E", "F") for g in w) else 1


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

@dataclass
class Rep:
    """Matrices of the generators; keys of the basis are 1..dim."""

    N: int
    dim: int
    mats: dict = field(default_factory=dict)
    q: object = Q

    def __call__(self, w):
        """Image of a word or an NCPoly."""
        if isinstance(w, NCPoly):
            out = {}
            for word, c in w.terms.items():
                out = linalg.matadd(out, linalg.matscale(self(word), c))
            return out
        m = linalg.identity(range(1, self.dim + 1), self.q ** 0)
        for g in w:
            m = linalg.matmul(m, self.mats[g])
        return m


def natural_rep(N, q=Q) -> Rep:
    one = q ** 0
    mats = {}
    for i in range(1, N):
        mats[E(i)] = {i: {i + 1: one}}
        mats[F(i)] = {i + 1: {i: one}}
        kd = {j: {j: one} for j in range(1, N + 1)}
        kd[i] = {i: q}
        kd[i + 1] = {i + 1: q ** -1}
        mats[K(i)] = kd
        kid = {j: {j: one} for j in range(1, N + 1)}
        kid[i] = {i: q ** -1}
        kid[i + 1] = {i + 1: q}
        mats[Kinv(i)] = kid
    return Rep(N, N, mats, q)


def tensor_image(rep: Rep, g: Gen, k: int):
    """pi^(x)k (Delta^(k-1) g) as a sparse matrix on k-tuples of indices."""
    ident = linalg.identity(range(1, rep.dim + 1), rep.q ** 0)
    out = {}
    for legs in letter_coproduct(g, k):
        m = None
        for leg in legs:
            f = rep.mats[leg[0]] if leg else ident
            f = {(i,): {(j,): v for j, v in r.items()} for i, r in f.items()}
            m = f if m is None else linalg.kron(m, f)
        out = linalg.matadd(out, m)
    return out


class TensorRep:
    """Cached images of generators under pi^(x)k o Delta^(k-1)."""

    def __init__(self, rep: Rep, k: int):
        self.rep, self.k = rep, k
        self._cache = {}

    def gen(self, g):
        m = self._cache.get(g)
        if m is None:
            m = self._cache[g] = tensor_image(self.rep, g, self.k)
        return m

    def word(self, w):
        keys = list(product(range(1, self.rep.dim + 1), repeat=self.k))
        m = linalg.identity(keys, self.rep.q ** 0)
        for g in w:
            m = linalg.matmul(m, self.gen(g))
        return m

    def poly(self, p: NCPoly):
        out = {}
        for w, c in p.terms.items():
            out = linalg.matadd(out, linalg.matscale(self.word(w), c))
        return out


def tensorpoly_image(rep: Rep, tp: TensorPoly):
    """pi^(x)k applied to a TensorPoly leg by leg."""
    out = {}
    for legs, c in tp.terms.items():
        m = None
        for leg in legs:
            f = rep(leg)
            f = {(i,): {(j,): v for j, v in r.items()} for i, r in f.items()}
            m = f if m is None else linalg.kron(m, f)
        out = linalg.matadd(out, linalg.matscale(m, c))
    return out


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _words_upto(alphabet, n):
    for ln in range(n + 1):
        yield from product(alphabet, repeat=ln)


def _matrix_witness(m):
    hit = linalg.first_nonzero(m)
    if hit is None:
        return None
    i, j, v = hit
    return f"entry {i},{j} = {v}"


def antipode_defect(rep: Rep, w, side="left"):
    """m (S (x) id) Delta (w) - eps(w) I evaluated in rep (or id (x) S)."""
    out = {}
    for (l, r), c in coproduct(w, 2).terms.items():
        if side == "left":
            m = linalg.matmul(rep(antipode(l)), rep(r))
        else:
            m = linalg.matmul(rep(l), rep(antipode(r)))
        out = linalg.matadd(out, linalg.matscale(m, c))
    eps = counit(w)
    if eps:
        out = linalg.matadd(out, linalg.identity(range(1, rep.dim + 1), rep.q ** 0), -eps)
    return out


def verify_hopf_in_rep(N, k_max=3, max_word=3, q=Q, rels=None, words=None):
    """Checks of the presentation and Hopf maps inside the natural rep.

    Returns a list of ``{"name", "status", "witness"?}`` dicts.
    """
    rep = natural_rep(N, q)
    rels = relations(N, q) if rels is None else rels
    checks = []

    def record(name, mat):
        wit = _matrix_witness(mat)
        entry = {"name": name, "status": "pass" if wit is None else "fail"}
        if wit is not None:
            entry["witness"] = wit
        checks.append(entry)

    for k in range(1, k_max + 1):
        if k == 1:
            for name, r in rels:
                record(f"pi({name})=0", rep(r))
        else:
            trep = TensorRep(rep, k)
            for name, r in rels:
                record(f"pi^{k} Delta({name})=0", trep.poly(r))
    gens = generators(N)
    if words is None:
        words = list(_words_upto(gens, 1))
        words += [w for w in _words_upto(gens, max_word) if len(w) > 1][:: max(1, len(gens))]
    for w in words:
        record(f"antipode-left({word_str(w)})", antipode_defect(rep, w, "left"))
        record(f"antipode-right({word_str(w)})", antipode_defect(rep, w, "right"))
    return checks
