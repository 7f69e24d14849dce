"""Noncommutative polynomials, rewriting to normal form, and a degreewise
linear-algebra oracle for the dimensions of quadratic quotient algebras.

Words are tuples of :class:`Gen`.  Polynomials map words to scalars of any
exact field type (``QRat`` for generic q, ``Fraction`` after
specialization).
"""

from __future__ import annotations

from itertools import product
from typing import NamedTuple

from . import linalg


class Gen(NamedTuple):
    """A generator.  ``idx`` is ``(a, alpha)`` for t/dt, ``(i,)`` for the
    Chevalley generators and ``(i, j)`` for matrix coefficients u."""

    kind: str
    idx: tuple

    def __str__(self):
        k, idx = self.kind, self.idx
        if k in ("t", "dt", "u"):
            return f"{k}[{idx[0]},{idx[1]}]"
        if k == "Kinv":
            return f"Ki_{idx[0]}"
        return f"{k}_{idx[0]}"

    __repr__ = __str__


def t(a, alpha):
    return Gen("t", (a, alpha))


def dt(a, alpha):
    return Gen("dt", (a, alpha))


def E(i):
    return Gen("E", (i,))


def F(i):
    return Gen("F", (i,))


def K(i):
    return Gen("K", (i,))


def Kinv(i):
    return Gen("Kinv", (i,))


def u(i, j):
    return Gen("u", (i, j))


_KIND_RANK = {"t": 0, "dt": 1, "E": 2, "F": 3, "K": 4, "Kinv": 5, "u": 6}
_gen_key_cache: dict = {}


def gen_key(g: Gen):
    """Generator order: all t below all dt, each sorted by (alpha, a)."""
    k = _gen_key_cache.get(g)
    if k is None:
        idx = g.idx[::-1] if g.kind in ("t", "dt") else g.idx
        k = (_KIND_RANK[g.kind],) + idx
        _gen_key_cache[g] = k
    return k


def word_key(w):
    """Degree-lexicographic key."""
    return (len(w), tuple(gen_key(g) for g in w))


def word_str(w) -> str:
    return " ".join(str(g) for g in w) if w else "1"


class GradingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# NCPoly
# ---------------------------------------------------------------------------

class NCPoly:
    """Finite linear combination of words.  No zero coefficients are stored."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            self.terms = {}
        else:
            self.terms = {w: c for w, c in dict(terms).items() if c}

    @classmethod
    def _wrap(cls, terms):
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def gen(cls, g, coeff=1):
        return cls._wrap({(g,): coeff} if coeff else {})

    @classmethod
    def word(cls, w, coeff=1):
        return cls._wrap({tuple(w): coeff} if coeff else {})

    @classmethod
    def scalar(cls, c):
        return cls._wrap({(): c} if c else {})

    # container protocol ----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """Terms in decreasing deg-lex order (leading term first)."""
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]), reverse=True)

    def words(self):
        return [w for w, _ in self.items()]

    def coeff(self, w):
        return self.terms.get(tuple(w), 0)

    def lead(self):
        return max(self.terms, key=word_key)

    def degree(self, weight=len):
        if not self.terms:
            return None
        return max(weight(w) for w in self.terms)

    def is_homogeneous(self, weight=len):
        return len({weight(w) for w in self.terms}) <= 1

    def map_coeffs(self, f):
        return NCPoly({w: f(c) for w, c in self.terms.items()})

    # arithmetic --------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            other = NCPoly.scalar(other)
        out = dict(self.terms)
        _accumulate(out, other.terms, 1)
        return NCPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly._wrap({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NCPoly):
            other = NCPoly.scalar(other)
        out = dict(self.terms)
        _accumulate(out, other.terms, -1)
        return NCPoly._wrap(out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            if not other:
                return NCPoly()
            return NCPoly._wrap({w: c * other for w, c in self.terms.items()})
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = out.get(w)
                v = c1 * c2 if c is None else c + c1 * c2
                if v:
                    out[w] = v
                elif c is not None:
                    del out[w]
        return NCPoly._wrap(out)

    def __rmul__(self, other):
        if not other:
            return NCPoly()
        return NCPoly._wrap({w: other * c for w, c in self.terms.items()})

    def __pow__(self, n):
        out = NCPoly.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            if other == 0:
                return not self.terms
            other = NCPoly.scalar(other)
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"NCPoly({self})"

    def __str__(self):
        return render(self)


def _accumulate(out, terms, sign):
    for w, c in terms.items():
        old = out.get(w)
        if old is None:
            out[w] = c if sign == 1 else -c
        else:
            v = old + c if sign == 1 else old - c
            if v:
                out[w] = v
            else:
                del out[w]


def add_into(out, terms, scale=None):
    """out += scale * terms on raw dicts."""
    for w, c in terms.items():
        if scale is not None:
            c = scale * c
        old = out.get(w)
        if old is None:
            out[w] = c
        else:
            v = old + c
            if v:
                out[w] = v
            else:
                del out[w]


def render(p: NCPoly) -> str:
    """Text form accepted back by the expression parser."""
    if not p.terms:
        return "0"
    parts = []
    for w, c in p.items():
        ws = word_str(w) if w else ""
        if c == 1:
            s = ws or "1"
        else:
            cs = str(c)
            s = f"({cs}) {ws}" if ws else f"({cs})"
        parts.append(s)
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# rewriting
# ---------------------------------------------------------------------------

class NonTermination(RuntimeError):
    """The rewrite guard was exceeded: the rules are not order-compatible."""


class DegenerateRelation(ValueError):
    def __init__(self, relation, msg="degenerate pivot"):
        super().__init__(f"{msg}: {relation}")
        self.relation = relation


class RewriteSystem:
    """Reduced rewrite rules ``lead -> tail`` under the deg-lex order."""

    def __init__(self, rules, guard=200000):
        self.rules = {}
        for lead, tail in rules:
            lead = tuple(lead)
            tail = tail if isinstance(tail, NCPoly) else NCPoly(tail)
            lk = word_key(lead)
            for w in tail.terms:
                if word_key(w) >= lk:
                    raise ValueError(f"rule {word_str(lead)} -> {tail} is not order-decreasing")
            self.rules[lead] = tail
        for a in self.rules:
            for b in self.rules:
                if a != b and _is_subword(a, b):
                    raise ValueError(f"lead {word_str(a)} is a subword of {word_str(b)}")
        self.lengths = sorted({len(w) for w in self.rules})
        self.guard = guard
        self._memo = {}

    def __len__(self):
        return len(self.rules)

    def items(self):
        return sorted(self.rules.items(), key=lambda r: word_key(r[0]))

    def map_coeffs(self, f):
        return RewriteSystem(
            [(lead, tail.map_coeffs(f)) for lead, tail in self.rules.items()],
            guard=self.guard,
        )

    def without(self, lead):
        """Copy with one rule removed (used for negative controls)."""
        return RewriteSystem(
            [(ld, tl) for ld, tl in self.rules.items() if ld != tuple(lead)],
            guard=self.guard,
        )

    def find_lead(self, w):
        """Leftmost occurrence of a lead in w as (position, lead), or None."""
        rules = self.rules
        for i in range(len(w)):
            for ln in self.lengths:
                if i + ln <= len(w) and w[i:i + ln] in rules:
                    return i, w[i:i + ln]
        return None

    def is_normal(self, w):
        return self.find_lead(w) is None

    def nf_word(self, w):
        """Normal form of a single word as a raw dict (shared, do not mutate)."""
        w = tuple(w)
        memo = self._memo
        hit = memo.get(w)
        if hit is not None:
            return hit
        steps = [0]
        return self._nf_word(w, steps)

    def _nf_word(self, w, steps):
        memo = self._memo
        hit = memo.get(w)
        if hit is not None:
            return hit
        found = self.find_lead(w)
        if found is None:
            res = {w: 1}
        else:
            steps[0] += 1
            if steps[0] > self.guard:
                raise NonTermination(f"rewrite guard exceeded on {word_str(w)}")
            i, lead = found
            pre, post = w[:i], w[i + len(lead):]
            res = {}
            for tw, c in self.rules[lead].terms.items():
                add_into(res, self._nf_word(pre + tw + post, steps), c)
        memo[w] = res
        return res

    def nf(self, p: NCPoly) -> NCPoly:
        out = {}
        for w, c in p.terms.items():
            add_into(out, self.nf_word(w), c)
        return NCPoly._wrap(out)

    def normal_words(self, gens, length, component=None, weight=None):
        """All normal words of the given length (optionally one weight component)."""
        gens = sorted(gens, key=gen_key)
        level = [()]
        for _ in range(length):
            nxt = []
            for w in level:
                for g in gens:
                    v = w + (g,)
                    if not self._has_suffix_lead(v):
                        nxt.append(v)
            level = nxt
        if component is not None:
            level = [w for w in level if weight(w) == component]
        return level

    def _has_suffix_lead(self, w):
        for ln in self.lengths:
            if ln <= len(w) and w[-ln:] in self.rules:
                return True
        return False

    def to_json(self):
        """{lead word: "lead -> tail"} in rule order."""
        return {word_str(lead): f"{word_str(lead)} -> {render(tail)}"
                for lead, tail in self.items()}


def _is_subword(a, b):
    la, lb = len(a), len(b)
    return any(b[i:i + la] == a for i in range(lb - la + 1))


def derive_rules(relations, guard=200000):
    """Solve homogeneous relations for their largest words.

    Relations of each length are row-reduced jointly; each pivot row
    becomes a rule ``pivot word -> -(rest of the row)``.
    """
    by_len = {}
    for r in relations:
        if not r:
            continue
        if not r.is_homogeneous():
            raise GradingError(f"relation is not homogeneous: {r}")
        by_len.setdefault(len(next(iter(r.terms))), []).append(r)
    rules = []
    for ln in sorted(by_len):
        rows = [dict(r.terms) for r in by_len[ln]]
        try:
            red = linalg.echelon(rows, key=word_key)
        except ZeroDivisionError as exc:
            raise DegenerateRelation(by_len[ln], str(exc)) from exc
        for lead, row in red.items():
            tail = {w: -c for w, c in row.items() if w != lead}
            rules.append((lead, NCPoly(tail)))
    # lower-degree leads may occur inside higher-degree ones
    leads = [r[0] for r in rules]
    for a in leads:
        for b in leads:
            if a != b and _is_subword(a, b):
                raise DegenerateRelation(b, f"lead contains lower lead {word_str(a)}")
    return RewriteSystem(rules, guard=guard)


# ---------------------------------------------------------------------------
# degreewise oracle
# ---------------------------------------------------------------------------

class DegreeOracle:
    """Exact graded dimensions of the quotient of the free algebra by a set of
    homogeneous relations.

    Works one length at a time: the degree-D piece is the cokernel of
    ``A_{D-l} (x) r -> A_{D-1} (x) V`` over relations r of length l, computed
    by sparse row reduction on each weight component separately.  The
    complement of the pivots (pivots are largest words) is kept as a basis.
    This never consults a rewrite system.
    """

    def __init__(self, relations, gens, gen_weight=None):
        self.gens = sorted(gens, key=gen_key)
        if gen_weight is None:
            gen_weight = lambda g: ()
        self._gw = {g: tuple(gen_weight(g)) for g in self.gens}
        self._zero_w = tuple(0 for _ in self._gw[self.gens[0]]) if self.gens else ()
        self.relations = []
        for r in relations:
            if not r:
                continue
            lens = {len(w) for w in r.terms}
            wts = {self.weight(w) for w in r.terms}
            if len(lens) != 1 or len(wts) != 1:
                raise GradingError(f"relation is not homogeneous: {r}")
            ln = lens.pop()
            if ln == 0:
                raise GradingError("scalar relation")
            self.relations.append((ln, wts.pop(), r))
        # (length, weight) -> (basis list, pivot rows)
        self._comp = {}
        self._red = {(): {(): 1}}
        self._sets = {}

    def weight(self, w):
        acc = self._zero_w
        for g in w:
            acc = tuple(x + y for x, y in zip(acc, self._gw[g]))
        return acc

    def _sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def component(self, length, wt):
        """(basis words, pivot table) of one graded piece."""
        key = (length, wt)
        hit = self._comp.get(key)
        if hit is not None:
            return hit
        if length == 0:
            res = ([()] if wt == self._zero_w else [], {})
            self._comp[key] = res
            return res
        if any(x < 0 for x in wt):
            res = ([], {})
            self._comp[key] = res
            return res
        columns = []
        for g in self.gens:
            prev, _ = self.component(length - 1, self._sub(wt, self._gw[g]))
            columns.extend(b + (g,) for b in prev)
        rows = []
        for ln, rw, r in self.relations:
            if ln > length:
                continue
            for b in self.component(length - ln, self._sub(wt, rw))[0]:
                row = {}
                for w, c in r.terms.items():
                    head = b + w[:-1]
                    for bw, bc in self.reduce(head).items():
                        add_into(row, {bw + (w[-1],): bc * c})
                if row:
                    rows.append(row)
        piv = linalg.echelon(rows, key=word_key)
        basis = sorted((c for c in columns if c not in piv), key=word_key)
        res = (basis, piv)
        self._comp[key] = res
        return res

    def reduce(self, w):
        """Coordinates of a word in the complement basis (raw dict)."""
        w = tuple(w)
        hit = self._red.get(w)
        if hit is not None:
            return hit
        out = {}
        last = w[-1]
        for b, c in self.reduce(w[:-1]).items():
            col = b + (last,)
            _, piv = self.component(len(col), self.weight(col))
            row = piv.get(col)
            if row is None:
                add_into(out, {col: c})
            else:
                add_into(out, {cw: -v for cw, v in row.items() if cw != col}, c)
        self._red[w] = out
        return out

    def dimension(self, length, wt=None):
        if wt is not None:
            return len(self.component(length, wt)[0])
        return len(self.basis(length))

    def basis(self, length):
        """All complement words of a given length (every weight component)."""
        level = [()]
        for _ in range(length):
            nxt = []
            for b in level:
                for g in self.gens:
                    col = b + (g,)
                    if col in self._basis_set(len(col), self.weight(col)):
                        nxt.append(col)
            level = nxt
        return sorted(level, key=word_key)

    def _basis_set(self, length, wt):
        key = (length, wt)
        s = self._sets.get(key)
        if s is None:
            s = self._sets[key] = frozenset(self.component(length, wt)[0])
        return s


def _span_dimension(relations, gens, d):
    words = [tuple(w) for w in product(sorted(gens, key=gen_key), repeat=d)]
    rows = []
    for r in relations:
        if not r:
            continue
        ln = len(next(iter(r.terms)))
        if ln > d:
            continue
        for i in range(d - ln + 1):
            for left in product(gens, repeat=i):
                for right in product(gens, repeat=d - ln - i):
                    rows.append({tuple(left) + w + tuple(right): c for w, c in r.terms.items()})
    piv = linalg.echelon(rows, key=word_key)
    basis = sorted((w for w in words if w not in piv), key=word_key)
    return len(basis), basis


def linearize_degree(relations, gens, d, method="incremental", gen_weight=None):
    """Dimension and complement basis of the length-d piece of the quotient.

    ``method="span"`` row-reduces the full span of ``w1 * r * w2`` inside
    all words of length d (feasible only for small cases);
    ``"incremental"`` uses :class:`DegreeOracle`.
    """
    for r in relations:
        if r and not r.is_homogeneous():
            raise GradingError(f"relation is not homogeneous: {r}")
    if method == "span":
        return _span_dimension(relations, gens, d)
    oracle = DegreeOracle(relations, gens, gen_weight)
    basis = oracle.basis(d)
    return len(basis), basis


def confluence_report(rules: RewriteSystem, relations, gens, maxdeg, gen_weight=None,
                      oracle=None):
    """Compare normal-word counts with oracle dimensions for each length."""
    if oracle is None:
        oracle = DegreeOracle(relations, gens, gen_weight)
    rows = []
    for d in range(maxdeg + 1):
        count = len(rules.normal_words(gens, d))
        dim = oracle.dimension(d)
        rows.append({"degree": d, "normal_words": count, "oracle": dim, "match": count == dim})
    return rows
