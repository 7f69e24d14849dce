"""The U_q sl_{m+n} action on quantum matrices and their differential forms.

Generator actions on the coordinates t[a,alpha] are recovered from the
embedding into the dual of U_q sl_{m+n}: xi.t is the polynomial P with
<i(P), eta> = <i(t), eta xi> on every probe word eta.  The action extends to
all of the calculus through the coproduct (module-algebra rule) and to the
differentials by xi.dt = d(xi.t).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg, pairing, qmatcalc, uq
from .freealg import NCPoly, Gen, word_str, add_into, render, t as tgen
from .scalars import Q, QRat, ZERO, ONE, PoleError, specialize as spec_scalar

DEFAULT_L = 4


class RankDeficient(ValueError):
    pass


class InconsistentAnsatz(ArithmeticError):
    pass


def required_cutoff(m, n):
    """Smallest L at which every generator entry is rank-certified.

    F_m.t[n,m] has weight of height m+n, so it pairs to zero with every word
    shorter than that; probes must reach length m+n, i.e. L - 1 >= m+n.
    """
    return m + n + 1


def default_cutoff(m, n):
    return max(DEFAULT_L, required_cutoff(m, n))


def target_weight(m, n, xi, a, alpha):
    """Weight of xi.t[a,alpha]: (xi f)(eta) = f(eta xi) shifts by -wt(xi)."""
    N = m + n
    return pairing.sub_weights(pairing.coordinate_weight(m, n, a, alpha),
                               pairing.gen_weight(xi, N))


# ---------------------------------------------------------------------------
# the table
# ---------------------------------------------------------------------------

@dataclass
class ActionTable:
    m: int
    n: int
    L: int
    entries: dict = field(default_factory=dict)       # gen -> {(a, alpha): NCPoly}
    certificates: dict = field(default_factory=dict)  # (gen, (a, alpha)) -> dict
    q: object = Q

    @property
    def N(self):
        return self.m + self.n

    def entry(self, xi, a, alpha):
        try:
            return self.entries[xi][(a, alpha)]
        except KeyError:
            raise KeyError(f"generator {xi} missing from action table") from None

    def generators(self):
        return [g for g in uq.generators(self.N) if g in self.entries]

    def map_coeffs(self, f, q):
        return ActionTable(
            self.m, self.n, self.L,
            {g: {k: p.map_coeffs(f) for k, p in row.items()} for g, row in self.entries.items()},
            dict(self.certificates), q)

    def with_entry(self, xi, a, alpha, poly):
        """Copy with one entry replaced (fault injection)."""
        entries = {g: dict(row) for g, row in self.entries.items()}
        entries[xi][(a, alpha)] = poly
        return ActionTable(self.m, self.n, self.L, entries, dict(self.certificates), self.q)

    def to_json(self):
        out = {}
        for g in self.generators():
            out[str(g)] = {str(tgen(a, al)): render(p)
                           for (a, al), p in sorted(self.entries[g].items())}
        out["metadata"] = {
            "m": self.m, "n": self.n, "L": self.L,
            "rank": {f"{g} t[{a},{al}]": c["rank"]
                     for (g, (a, al)), c in sorted(self.certificates.items(),
                                                    key=lambda kv: (str(kv[0][0]), kv[0][1]))},
        }
        return out

    def dumps(self):
        return json.dumps(self.to_json(), indent=1, ensure_ascii=False)

    def same_entries(self, other):
        """First differing (generator, coordinate), or None."""
        for g in uq.generators(self.N):
            for key in sorted(set(self.entries.get(g, {})) | set(other.entries.get(g, {}))):
                a = self.entries.get(g, {}).get(key)
                b = other.entries.get(g, {}).get(key)
                if a != b:
                    return g, key, a, b
        return None


# ---------------------------------------------------------------------------
# derivation
# ---------------------------------------------------------------------------

class ActionDeriver:
    """Shared state for deriving generator actions on one (m, n)."""

    def __init__(self, m, n, om=None):
        self.m, self.n, self.N = m, n, m + n
        self.om = om if om is not None else qmatcalc.build_calculus(m, n, 3)
        self.emb = pairing.Embedding(m, n)
        self._monos = {}

    def monomials(self, maxdeg):
        """Normal words in the t's of degree <= maxdeg."""
        hit = self._monos.get(maxdeg)
        if hit is None:
            coords = qmatcalc.coordinates(self.m, self.n)
            hit = []
            for d in range(maxdeg + 1):
                hit.extend(self.om.rules.normal_words(coords, d))
            self._monos[maxdeg] = hit
        return hit

    def ansatz(self, wt, maxdeg, restrict=True):
        monos = self.monomials(maxdeg)
        if restrict:
            monos = [w for w in monos if self.emb.weight_of(w) == wt]
        return monos

    def derive(self, xi, a, alpha, L, restrict=True):
        """(P, certificate) for xi.t[a,alpha] at probe cutoff L."""
        wt = target_weight(self.m, self.n, xi, a, alpha)
        f = self.emb.coordinate(a, alpha)
        if restrict:
            probes = pairing.words_of_weight(self.N, wt, L - 1)
        else:
            probes = pairing.words_upto(self.N, L - 1)
        rhs = {}
        for eta in probes:
            v = f(eta + (xi,))
            if v:
                rhs[eta] = v
        for deg in (2, 3):
            monos = self.ansatz(wt, deg, restrict)
            columns = []
            for w in monos:
                g = self.emb.word(w)
                col = {}
                for eta in probes:
                    v = g(eta)
                    if v:
                        col[eta] = v
                columns.append(col)
            x, rank = linalg.solve(columns, rhs)
            if rank < len(monos) and x is not None:
                raise RankDeficient(
                    f"{xi}.t[{a},{alpha}]: probe rank {rank} < {len(monos)} unknowns; increase L")
            if x is None:
                continue
            poly = NCPoly({w: c for w, c in zip(monos, x) if c})
            cert = {"rank": rank, "unknowns": len(monos), "probes": len(probes),
                    "degree": deg, "L": L}
            return poly, cert
        raise InconsistentAnsatz(f"{xi}.t[{a},{alpha}] has no polynomial solution of degree <= 3")


def derive_action(m, n, xi, a, alpha, L=None, deriver=None):
    """The polynomial xi.t[a,alpha] (normal form, degree <= 2 unless escalated)."""
    if not isinstance(xi, Gen):
        xi = tuple(xi)
        if not xi:
            return NCPoly.gen(tgen(a, alpha))
        if len(xi) != 1:
            raise ValueError("derive_action takes a single generator")
        xi = xi[0]
    L = default_cutoff(m, n) if L is None else L
    deriver = deriver or ActionDeriver(m, n)
    return deriver.derive(xi, a, alpha, L)[0]


def derive_table(m, n, L=None, deriver=None, generators=None):
    L = default_cutoff(m, n) if L is None else L
    deriver = deriver or ActionDeriver(m, n)
    table = ActionTable(m, n, L)
    for xi in generators or uq.generators(m + n):
        row = table.entries.setdefault(xi, {})
        for a in range(1, n + 1):
            for al in range(1, m + 1):
                p, cert = deriver.derive(xi, a, al, L)
                row[(a, al)] = p
                table.certificates[(xi, (a, al))] = cert
    return table


# ---------------------------------------------------------------------------
# acting on the calculus
# ---------------------------------------------------------------------------

class Action:
    """The action of U_q words on the calculus defined by an action table."""

    def __init__(self, table: ActionTable, om):
        self.table, self.om = table, om
        self._letter = {}
        self._memo = {}

    def letter(self, h, x):
        """h acting on a single generator of the calculus (raw dict)."""
        key = (h, x)
        hit = self._letter.get(key)
        if hit is None:
            p = self.table.entry(h, *x.idx)
            if x.kind == "dt":
                p = qmatcalc.d_free(p)
            hit = self._letter[key] = p.terms
        return hit

    def gen_on_word(self, g, w):
        """g acting on a word (not necessarily normal); normal form, raw dict."""
        key = (g, w)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not w:
            res = {(): 1} if uq.counit((g,)) else {}
        else:
            res = {}
            for legs in uq.letter_coproduct(g, len(w)):
                acc = {(): 1}
                for x, leg in zip(w, legs):
                    fx = self.letter(leg[0], x) if leg else {(x,): 1}
                    nxt = {}
                    for u, c in acc.items():
                        for v, e in fx.items():
                            add_into(nxt, {u + v: c * e})
                    acc = nxt
                    if not acc:
                        break
                add_into(res, acc)
            res = self.om.nf(NCPoly._wrap(res)).terms
        self._memo[key] = res
        return res

    def gen(self, g, p: NCPoly) -> NCPoly:
        out = {}
        for w, c in p.terms.items():
            add_into(out, self.gen_on_word(g, w), c)
        return NCPoly._wrap(out)

    def word(self, w, p: NCPoly) -> NCPoly:
        """Letters act right to left: (h1 h2 ... hr).p = h1.(h2.(... hr.p))."""
        for g in reversed(tuple(w)):
            if not p:
                break
            p = self.gen(g, p)
        return p

    def poly(self, r: NCPoly, p: NCPoly) -> NCPoly:
        out = {}
        for w, c in r.terms.items():
            add_into(out, self.word(w, p).terms, c)
        return NCPoly._wrap(out)


def act(table: ActionTable, w, p: NCPoly, om=None) -> NCPoly:
    if om is None:
        om = qmatcalc.build_calculus(table.m, table.n, 2)
    if isinstance(w, NCPoly):
        return Action(table, om).poly(w, p)
    return Action(table, om).word(tuple(w), p)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _check(name, witness=None):
    c = {"name": name, "status": "pass" if witness is None else "fail"}
    if witness is not None:
        c["witness"] = witness
    return c


def report(suite, params, checks):
    return {"suite": suite, "params": params, "checks": checks,
            "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail"}


def verify_module_algebra(m, n, table, maxdeg, om=None):
    """Operator relations, well-definedness on the quotient, d-equivariance."""
    q = table.q
    if om is None:
        om = qmatcalc.build_calculus(m, n, max(2, maxdeg))
    action = Action(table, om)
    basis = [NCPoly.word(w) for w in om.basis_upto(maxdeg)]
    checks = []
    for name, r in uq.relations(m + n, q):
        bad = None
        for p in basis:
            v = action.poly(r, p)
            if v:
                bad = f"on {render(p)}: {render(v)}"
                break
        checks.append(_check(f"(i) {name}", bad))
    families = (("tt", om.tt), ("tdt", om.tdt), ("dtdt", om.dtdt))
    for g in uq.generators(m + n):
        for fam, rels in families:
            bad = None
            for r in rels:
                out = {}
                for w, c in r.terms.items():
                    add_into(out, action.gen_on_word(g, w), c)
                v = NCPoly._wrap(out)
                if v:
                    bad = f"{g} on {render(r)}: {render(v)}"
                    break
            checks.append(_check(f"(ii) {g} on {fam} relations", bad))
    for g in uq.generators(m + n):
        bad = None
        for p in basis:
            lhs = action.gen(g, qmatcalc.differential(p, om))
            rhs = qmatcalc.differential(action.gen(g, p), om)
            if lhs != rhs:
                bad = f"{g} on {render(p)}: {render(lhs - rhs)}"
                break
        checks.append(_check(f"(iii) d-equivariance of {g}", bad))
    params = {"m": m, "n": n, "N": m + n, "maxdeg": maxdeg, "L": table.L}
    if not isinstance(q, QRat):
        params["q0"] = str(q)
    return report("module-algebra", params, checks)


def degree_shift(p: NCPoly):
    """Polynomial degree of p minus 1; None for 0; raises on mixed degree."""
    if not p:
        return None
    degs = {len(w) for w in p.terms}
    if len(degs) != 1:
        raise ValueError(f"entry is not homogeneous: {render(p)}")
    return degs.pop() - 1


def verify_grading(m, n, table):
    """Measured degree shifts; Levi generators must preserve degree."""
    checks = []
    shifts = {}
    for g in uq.generators(m + n):
        measured = set()
        bad = None
        for (a, al), p in sorted(table.entries[g].items()):
            try:
                s = degree_shift(p)
            except ValueError as exc:
                bad = str(exc)
                break
            if s is not None:
                measured.add(s)
        shifts[str(g)] = sorted(measured)
        levi = g.kind in ("K", "Kinv") or g.idx[0] != m
        if levi:
            if bad is None and measured - {0}:
                bad = f"{g} shifts degree by {sorted(measured)}"
            checks.append(_check(f"Levi {g} preserves degree", bad))
        elif bad is not None:
            checks.append(_check(f"{g} homogeneous", bad))
    em, fm = str(uq.E(m)), str(uq.F(m))
    nonzero = [s for s in shifts[em] + shifts[fm] if s != 0]
    checks.append(_check(f"{em} or {fm} changes degree",
                         None if nonzero else f"{em}: {shifts[em]}, {fm}: {shifts[fm]}"))
    for g in uq.generators(m + n):
        if g.kind in ("K", "Kinv"):
            bad = None
            for (a, al), p in sorted(table.entries[g].items()):
                terms = list(p.terms.items())
                ok = (len(terms) == 1 and terms[0][0] == (tgen(a, al),)
                      and isinstance(terms[0][1], QRat) and terms[0][1].is_laurent()
                      and len(terms[0][1].laurent_terms()) == 1)
                if not ok and not (len(terms) == 1 and terms[0][0] == (tgen(a, al),)
                                   and not isinstance(terms[0][1], QRat)):
                    bad = f"{g}.t[{a},{al}] = {render(p)}"
                    break
            checks.append(_check(f"{g} diagonal with q-power", bad))
    rep = report("grading", {"m": m, "n": n, "N": m + n, "L": table.L}, checks)
    rep["shifts"] = shifts
    return rep


def check_pairing_consistency(table, deriver, L=None, polys=None):
    """<i(xi.p), eta> = <i(p), eta xi> on probes eta of length <= L-1."""
    L = table.L if L is None else L
    N = table.N
    emb = deriver.emb
    action = Action(table, deriver.om)
    checks = []
    polys = polys or [NCPoly.word(w) for w in deriver.monomials(2) if w]
    for g in uq.generators(N):
        bad = None
        for p in polys:
            lhs_poly = action.gen(g, p)
            wt = pairing.sub_weights(emb.weight_of(next(iter(p.terms))), pairing.gen_weight(g, N))
            f = emb.poly(p)
            lhs = emb.poly(lhs_poly) if lhs_poly else None
            for eta in pairing.words_of_weight(N, wt, L - 1):
                a = lhs(eta) if lhs is not None else ZERO
                b = f(eta + (g,))
                if a != b:
                    bad = f"{g} on {render(p)} at {word_str(eta) or '1'}: {a} vs {b}"
                    break
            if bad:
                break
        checks.append(_check(f"embedding equivariance of {g}", bad))
    return checks


def specialize_table(table, q0):
    q0 = Fraction(q0)
    if q0 in (0, 1, -1):
        raise ValueError(f"q0 = {q0} is excluded (q - q^-1 must be invertible and nonzero)")

    def f(c):
        if isinstance(c, QRat):
            return spec_scalar(c, q0)
        return c

    return table.map_coeffs(f, q0)


def specialize_action(m, n, table, q0, maxdeg, om=None):
    """Re-run the module-algebra suite over the rationals at q = q0."""
    q0 = Fraction(q0)
    if q0 in (0, 1, -1):
        raise ValueError(f"q0 = {q0} is excluded (q - q^-1 must be invertible and nonzero)")
    if om is None:
        om = qmatcalc.build_calculus(m, n, max(2, maxdeg))
    for lead, tail in om.rules.items():
        for c in tail.terms.values():
            if isinstance(c, QRat):
                try:
                    spec_scalar(c, q0)
                except PoleError as exc:
                    raise PoleError(f"rule {word_str(lead)}: {exc}") from None
    for g, row in table.entries.items():
        for (a, al), p in row.items():
            for c in p.terms.values():
                if isinstance(c, QRat):
                    try:
                        spec_scalar(c, q0)
                    except PoleError as exc:
                        raise PoleError(f"{g}.t[{a},{al}]: {exc}") from None
    tsp = specialize_table(table, q0)
    osp = om.specialize(q0)
    return verify_module_algebra(m, n, tsp, maxdeg, osp)


def uniqueness_probe(m, n, L1, L2, deriver=None):
    """Tables derived at two cutoffs must agree entry by entry."""
    if L2 < L1:
        raise ValueError("L2 must be >= L1")
    deriver = deriver or ActionDeriver(m, n)
    checks = []
    tables = []
    for L in (L1, L2):
        try:
            tables.append(derive_table(m, n, L, deriver))
            checks.append(_check(f"rank-certified at L={L}"))
        except RankDeficient as exc:
            checks.append(_check(f"rank-certified at L={L}", str(exc)))
    if len(tables) == 2:
        diff = tables[0].same_entries(tables[1])
        wit = None
        if diff is not None:
            g, (a, al), x, y = diff
            wit = f"{g}.t[{a},{al}]: {x} vs {y}"
        checks.append(_check(f"tables at L={L1} and L={L2} agree", wit))
    else:
        checks.append(_check(f"tables at L={L1} and L={L2} agree",
                             "a derivation was not rank-certified"))
    return report("uniqueness", {"m": m, "n": n, "N": m + n, "L1": L1, "L2": L2}, checks)
