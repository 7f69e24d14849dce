"""The R-matrix of U_q sl_N on V (x) V, the quadratic relations of the
differential calculus on quantum (m x n)-matrices, normal forms, the
differential, and flatness certification against classical dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from . import linalg
from .freealg import (NCPoly, RewriteSystem, DegreeOracle, derive_rules, t, dt,
                      word_str, add_into, render)
from .scalars import Q, ZERO, ONE


class RHatError(ValueError):
    pass


class FlatnessError(AssertionError):
    pass


# ---------------------------------------------------------------------------
# R-hat
# ---------------------------------------------------------------------------

def rhat_entry(i, j, ip, jp, q=Q):
    """Entry with input pair (i, j) and output pair (ip, jp)."""
    if i == j == ip == jp:
        return q ** -1
    if ip == j and jp == i and i != j:
        return q ** 0
    if i == ip and j == jp and i < j:
        return q ** -1 - q
    return ZERO if q is Q else 0 * q


@dataclass
class RHat:
    N: int
    q: object = Q
    entries: dict = field(default_factory=dict)

    def __call__(self, i, j, ip, jp):
        return self.entries.get(((i, j), (ip, jp)), 0 * self.q)

    def matrix(self):
        """Sparse matrix acting on row vectors: row = input pair, column = output pair."""
        out = {}
        for (inp, outp), v in self.entries.items():
            out.setdefault(inp, {})[outp] = v
        return out

    def identity(self):
        one = self.q ** 0
        return linalg.identity([(i, j) for i in range(1, self.N + 1)
                                for j in range(1, self.N + 1)], one)

    def hecke_defect(self):
        """(R - q^-1 I)(R + q I) as a sparse matrix."""
        q = self.q
        r, one = self.matrix(), self.identity()
        a = linalg.matadd(r, one, -(q ** -1))
        b = linalg.matadd(r, one, q)
        return linalg.matmul(a, b)

    def braid_defect(self):
        """(R12 R23 R12) - (R23 R12 R23) on V (x) V (x) V."""
        r = self.matrix()
        one1 = linalg.identity(range(1, self.N + 1), self.q ** 0)
        r12 = _regroup(linalg.kron(r, one1))
        r23 = _regroup(linalg.kron(one1, r))
        lhs = linalg.matmul(linalg.matmul(r12, r23), r12)
        rhs = linalg.matmul(linalg.matmul(r23, r12), r23)
        return linalg.matadd(lhs, rhs, -1)

    def validate(self):
        """Raise RHatError naming the first failing identity."""
        h = linalg.first_nonzero(self.hecke_defect())
        if h is not None:
            raise RHatError(f"Hecke identity fails at {h[0]} -> {h[1]}: {h[2]}")
        b = linalg.first_nonzero(self.braid_defect())
        if b is not None:
            raise RHatError(f"braid relation fails at {b[0]} -> {b[1]}: {b[2]}")

    def dump(self):
        return {f"({i},{j})->({ip},{jp})": str(v)
                for ((i, j), (ip, jp)), v in sorted(self.entries.items())}


def _regroup(mat):
    # kron concatenates keys; flatten pair-of-pairs to plain triples
    return {_flat(i): {_flat(j): v for j, v in row.items()} for i, row in mat.items()}


def _flat(k):
    out = []
    for x in k:
        out.extend(x if isinstance(x, tuple) else (x,))
    return tuple(out)


def rhat(N, q=Q, validate=True, corrupt=None):
    """Build R-hat for sl_N.  ``corrupt`` = ((i, j), (ip, jp)) flips the sign
    of one entry (negative control); validation then fails."""
    if N < 2:
        raise ValueError("rhat needs N >= 2")
    entries = {}
    rng = range(1, N + 1)
    for i in rng:
        for j in rng:
            for ip in rng:
                for jp in rng:
                    v = rhat_entry(i, j, ip, jp, q)
                    if v:
                        entries[((i, j), (ip, jp))] = v
    if corrupt is not None:
        key = (tuple(corrupt[0]), tuple(corrupt[1]))
        if key not in entries:
            raise ValueError(f"no entry {key} to corrupt")
        entries[key] = -entries[key]
    r = RHat(N, q, entries)
    if validate:
        r.validate()
    return r


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------

def _coef(i, j, ip, jp, q, orientation):
    if orientation == "flipped":
        # index pairs read right to left: P R P
        return rhat_entry(j, i, jp, ip, q)
    if orientation == "as-written":
        return rhat_entry(i, j, ip, jp, q)
    raise ValueError(f"unknown orientation {orientation!r}")


def omega_relations(m, n, q=Q, orientation="flipped", order="standard"):
    """The three quadratic relation families (tt, t-dt, dt-dt), zeros dropped.

    For all a, b in 1..n and alpha, beta in 1..m:

      sum R(g,d -> alpha,beta) t[a,g] t[b,d] = sum R(a,b -> c,e) t[c,alpha] t[e,beta]
      sum R(g,d -> alpha,beta) R(a,b -> a',b') t[a',g] dt[b',d] = dt[a,alpha] t[b,beta]
      sum R(g,d -> alpha,beta) R(a,b -> a',b') dt[a',g] dt[b',d] = -dt[a,alpha] dt[b,beta]

    ``orientation="flipped"`` uses the R-hat entries with both index pairs
    reversed (the conjugate by the flip of V (x) V); "as-written" uses them
    directly and is kept for comparison.  ``order="swapped"`` writes the
    right side of the first family as t[e,beta] t[c,alpha].
    """
    if m < 1 or n < 1:
        raise ValueError("m, n >= 1 required")
    G, Lt = range(1, m + 1), range(1, n + 1)
    tt, tdt, dd = [], [], []
    for a in Lt:
        for b in Lt:
            for al in G:
                for be in G:
                    p1, p2, p3 = {}, {}, {}
                    for g in G:
                        for d in G:
                            c1 = _coef(g, d, al, be, q, orientation)
                            if not c1:
                                continue
                            add_into(p1, {(t(a, g), t(b, d)): c1})
                            for ap in Lt:
                                for bp in Lt:
                                    c2 = _coef(a, b, ap, bp, q, orientation)
                                    if c2:
                                        add_into(p2, {(t(ap, g), dt(bp, d)): c1 * c2})
                                        add_into(p3, {(dt(ap, g), dt(bp, d)): c1 * c2})
                    for c in Lt:
                        for e in Lt:
                            c2 = _coef(a, b, c, e, q, orientation)
                            if c2:
                                w = (t(c, al), t(e, be)) if order == "standard" else (t(e, be), t(c, al))
                                add_into(p1, {w: -c2})
                    add_into(p2, {(dt(a, al), t(b, be)): -1})
                    add_into(p3, {(dt(a, al), dt(b, be)): 1})
                    for fam, p in ((tt, p1), (tdt, p2), (dd, p3)):
                        poly = NCPoly(p)
                        if poly and poly not in fam:
                            fam.append(poly)
    return tt, tdt, dd


def coordinates(m, n):
    return [t(a, al) for a in range(1, n + 1) for al in range(1, m + 1)]


def differentials(m, n):
    return [dt(a, al) for a in range(1, n + 1) for al in range(1, m + 1)]


def multidegree(m, n):
    """Generator weight: (Greek index counts, Latin index counts, form degree)."""
    def weight(g):
        a, al = g.idx
        return (tuple(int(al == x) for x in range(1, m + 1))
                + tuple(int(a == x) for x in range(1, n + 1))
                + (int(g.kind == "dt"),))
    return weight


def form_degree(w):
    return sum(1 for g in w if g.kind == "dt")


def poly_degree(w):
    return sum(1 for g in w if g.kind == "t")


def expected_dimension(m, n, d, k):
    mn = m * n
    if d < 0 or k < 0 or k > mn:
        return 0
    return comb(mn + d - 1, d) * comb(mn, k)


# ---------------------------------------------------------------------------
# the presentation
# ---------------------------------------------------------------------------

@dataclass
class OmegaPresentation:
    m: int
    n: int
    q: object
    tt: list
    tdt: list
    dtdt: list
    rules: RewriteSystem
    oracle: DegreeOracle
    checked: list = field(default_factory=list)

    @property
    def gens(self):
        return coordinates(self.m, self.n) + differentials(self.m, self.n)

    @property
    def relations(self):
        return self.tt + self.tdt + self.dtdt

    def nf(self, p):
        return self.rules.nf(p)

    def basis(self, d, k):
        """Normal words of polynomial degree d and form degree k."""
        return [w for w in self.rules.normal_words(self.gens, d + k) if form_degree(w) == k]

    def basis_upto(self, maxdeg):
        """Normal words of total degree <= maxdeg, ordered by length."""
        out = []
        for ln in range(maxdeg + 1):
            out.extend(self.rules.normal_words(self.gens, ln))
        return out

    def flatness_table(self, maxdeg, kmax=None):
        """Rows (d, k, normal words, oracle, expected) for d <= maxdeg."""
        kmax = self.m * self.n if kmax is None else kmax
        rows = []
        for k in range(kmax + 1):
            for d in range(maxdeg + 1):
                count = len(self.basis(d, k))
                od = self.oracle_dimension(d, k)
                rows.append({"d": d, "k": k, "normal_words": count, "oracle": od,
                             "expected": expected_dimension(self.m, self.n, d, k),
                             "match": count == od == expected_dimension(self.m, self.n, d, k)})
        return rows

    def oracle_dimension(self, d, k):
        total = 0
        for wt in _multidegrees(self.m, self.n, d, k):
            total += self.oracle.dimension(d + k, wt)
        return total

    def specialize(self, q0):
        """Copy with every coefficient specialized at q = q0 (a Fraction)."""
        from .scalars import specialize
        f = lambda c: specialize(c, q0) if hasattr(c, "num") else c
        sp = lambda ps: [p.map_coeffs(f) for p in ps]
        return OmegaPresentation(self.m, self.n, q0, sp(self.tt), sp(self.tdt), sp(self.dtdt),
                                 self.rules.map_coeffs(f), None, list(self.checked))

    def to_json(self):
        return self.rules.to_json()


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multidegrees(m, n, d, k):
    ln = d + k
    for g in _compositions(ln, m):
        for lt in _compositions(ln, n):
            yield g + lt + (k,)


def build_calculus(m, n, checkdeg=2, q=Q, orientation="flipped", order="standard",
                   drop=None):
    """Rewrite system for the calculus, with flatness certified through
    polynomial degree ``checkdeg`` and form degree min(mn, checkdeg).

    ``drop`` removes one relation from the tt family before building (negative
    control); flatness then fails.
    """
    if m < 1 or n < 1:
        raise ValueError("m, n >= 1 required")
    tt, tdt, dd = omega_relations(m, n, q, orientation, order)
    if drop is not None:
        tt = [r for i, r in enumerate(tt) if i != drop]
    rels = tt + tdt + dd
    rules = derive_rules(rels)
    gens = coordinates(m, n) + differentials(m, n)
    oracle = DegreeOracle(rels, gens, multidegree(m, n))
    om = OmegaPresentation(m, n, q, tt, tdt, dd, rules, oracle)
    kmax = min(m * n, checkdeg)
    for k in range(kmax + 1):
        for d in range(checkdeg + 1):
            count = len(om.basis(d, k))
            od = om.oracle_dimension(d, k)
            exp = expected_dimension(m, n, d, k)
            if not count == od == exp:
                raise FlatnessError(
                    f"bidegree (d={d}, k={k}): {count} normal words, oracle {od}, expected {exp}")
            om.checked.append((d, k))
    return om


def calculus_unchecked(m, n, q=Q, orientation="flipped", order="standard"):
    """Presentation without flatness certification (for diagnostics)."""
    tt, tdt, dd = omega_relations(m, n, q, orientation, order)
    rels = tt + tdt + dd
    gens = coordinates(m, n) + differentials(m, n)
    return OmegaPresentation(m, n, q, tt, tdt, dd, derive_rules(rels),
                             DegreeOracle(rels, gens, multidegree(m, n)))


# ---------------------------------------------------------------------------
# differential
# ---------------------------------------------------------------------------

def d_word(w):
    """Graded Leibniz rule on a free word (no reduction)."""
    out = {}
    sign = 1
    for i, g in enumerate(w):
        if g.kind == "t":
            add_into(out, {w[:i] + (dt(*g.idx),) + w[i + 1:]: sign})
        elif g.kind == "dt":
            sign = -sign
        else:
            raise ValueError(f"d is not defined on {g}")
    return out


def d_free(p: NCPoly) -> NCPoly:
    out = {}
    for w, c in p.terms.items():
        add_into(out, d_word(w), c)
    return NCPoly._wrap(out)


def differential(p: NCPoly, om: OmegaPresentation) -> NCPoly:
    return om.nf(d_free(p))


def check_differential(om: OmegaPresentation, maxdeg):
    """d^2 = 0 and d of every relation lies in the ideal, on normal words of
    total degree <= maxdeg; returns a list of check dicts."""
    checks = []
    bad = None
    for w in om.basis_upto(maxdeg):
        dd = differential(differential(NCPoly.word(w), om), om)
        if dd:
            bad = f"d(d({word_str(w)})) = {render(dd)}"
            break
    checks.append(_check("d^2 = 0", bad))
    bad = None
    for r in om.relations:
        v = om.nf(d_free(r))
        if v:
            bad = f"d({render(r)}) = {render(v)}"
            break
    checks.append(_check("d preserves relations", bad))
    return checks


def _check(name, witness):
    c = {"name": name, "status": "pass" if witness is None else "fail"}
    if witness is not None:
        c["witness"] = witness
    return c


def drop_rule(om: OmegaPresentation, lead=None):
    """Presentation whose relations are the rules of ``om`` minus one
    (negative control).  By default drops the first rule with a t-only lead."""
    from .freealg import NCPoly as _P
    items = om.rules.items()
    if lead is None:
        lead = next((ld for ld, _ in items if all(g.kind == "t" for g in ld)), items[0][0])
    lead = tuple(lead)
    fams = {0: [], 1: [], 2: []}
    for ld, tail in items:
        if ld == lead:
            continue
        fams[form_degree(ld)].append(_P.word(ld) - tail)
    rels = fams[0] + fams[1] + fams[2]
    gens = coordinates(om.m, om.n) + differentials(om.m, om.n)
    return OmegaPresentation(om.m, om.n, om.q, fams[0], fams[1], fams[2],
                             om.rules.without(lead),
                             DegreeOracle(rels, gens, multidegree(om.m, om.n)))
