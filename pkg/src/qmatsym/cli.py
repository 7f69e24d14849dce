"""Command-line driver.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import action, pairing, qmatcalc, uq
from .expr import ParseError, IndexRangeError, parse_poly, parse_word
from .freealg import render, word_str, t as tgen
from .scalars import Q, PoleError


class UsageError(Exception):
    pass


def _report(suite, params, checks, **extra):
    rep = {"suite": suite, "params": params, "checks": checks,
           "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail"}
    rep.update(extra)
    return rep


def _check(name, witness=None):
    c = {"name": name, "status": "pass" if witness is None else "fail"}
    if witness is not None:
        c["witness"] = witness
    return c


def _emit(rep, as_json, out):
    if as_json:
        print(json.dumps(rep, indent=1), file=out)
    else:
        for c in rep["checks"]:
            line = f"{c['status'].upper()}  {c['name']}"
            if "witness" in c:
                line += f"  [{c['witness']}]"
            print(line, file=out)
        print(f"status: {rep['status']}", file=out)
    return 0 if rep["status"] == "pass" else 1


def _fraction(s):
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}")


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def rhat_report(N, inject=None):
    corrupt = ((1, 2), (1, 2)) if inject == "flip-rhat" else None
    r = qmatcalc.rhat(N, validate=False, corrupt=corrupt)
    from . import linalg
    hw = linalg.first_nonzero(r.hecke_defect())
    bw = linalg.first_nonzero(r.braid_defect())
    checks = [
        _check("Hecke identity", None if hw is None else f"entry {hw[0]} -> {hw[1]}: {hw[2]}"),
        _check("braid relation", None if bw is None else f"entry {bw[0]} -> {bw[1]}: {bw[2]}"),
    ]
    params = {"N": N}
    if inject:
        params["inject"] = inject
    return _report("rhat", params, checks, matrix=r.dump())


def flatness_report(m, n, maxdeg, inject=None):
    om = qmatcalc.calculus_unchecked(m, n)
    if inject == "drop-relation":
        om = _drop_relation(om)
    checks = []
    rows = om.flatness_table(maxdeg)
    for row in rows:
        wit = None
        if not row["match"]:
            wit = (f"normal words {row['normal_words']}, oracle {row['oracle']}, "
                   f"expected {row['expected']}")
        checks.append(_check(f"bidegree ({row['d']},{row['k']})", wit))
    params = {"m": m, "n": n, "N": m + n, "maxdeg": maxdeg}
    if inject:
        params["inject"] = inject
    return _report("flatness", params, checks, table=rows)


def _drop_relation(om):
    return qmatcalc.drop_rule(om)


def hopf_report(N, maxword=3):
    checks = uq.verify_hopf_in_rep(N, 3, maxword)
    return _report("hopf", {"N": N, "maxdeg": maxword}, checks)


def embed_report(m, n, L, D, inject=None):
    om = None
    if inject == "drop-relation":
        om = _drop_relation(qmatcalc.calculus_unchecked(m, n))
    rep = pairing.embed_check(m, n, L, D, om=om)
    if inject:
        rep["params"]["inject"] = inject
    return rep


def _table(m, n, L, inject=None, deriver=None):
    deriver = deriver or action.ActionDeriver(m, n)
    table = action.derive_table(m, n, L, deriver)
    if inject == "corrupt-k":
        k1 = uq.K(1)
        table = table.with_entry(k1, 1, 1, table.entry(k1, 1, 1) * Q)
    return table, deriver


def module_algebra_report(m, n, maxdeg, L, q0=None, inject=None):
    table, deriver = _table(m, n, L, inject)
    if q0 is None:
        rep = action.verify_module_algebra(m, n, table, maxdeg, deriver.om)
    else:
        rep = action.specialize_action(m, n, table, q0, maxdeg, deriver.om)
    if inject:
        rep["params"]["inject"] = inject
    return rep


def grading_report(m, n, L, inject=None):
    table, _ = _table(m, n, L, inject)
    return action.verify_grading(m, n, table)


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="qmatsym",
                                description="Quantum matrix space, its calculus and U_q sl_{m+n} action.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def shape(sp, required=True):
        sp.add_argument("--m", type=int, required=required)
        sp.add_argument("--n", type=int, required=required)

    sp = sub.add_parser("nf", help="normal form of an expression in t, dt")
    shape(sp)
    sp.add_argument("--expr", required=True)

    sp = sub.add_parser("hilbert", help="bigraded dimensions against the classical ones")
    shape(sp)
    sp.add_argument("--maxdeg", type=int, default=4)
    sp.add_argument("--inject", choices=["drop-relation"])
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("rhat", help="R-matrix dump with Hecke and braid status")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--inject", choices=["flip-rhat"])
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("pair", help="pair a u-polynomial with a word of U_q sl_N")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--func", required=True)
    sp.add_argument("--word", required=True)

    sp = sub.add_parser("minor", help="expand a quantum minor")
    shape(sp)
    sp.add_argument("--cols", required=True, help="comma-separated increasing columns")

    sp = sub.add_parser("derive-action", help="derive the action table and write golden files")
    shape(sp)
    sp.add_argument("--L", type=int)
    sp.add_argument("--out", default="golden", help="golden directory ('-' to skip writing)")

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", required=True,
                    choices=["hopf", "embed", "module-algebra", "grading", "uniqueness",
                             "flatness", "rhat"])
    shape(sp, required=False)
    sp.add_argument("--N", type=int)
    sp.add_argument("--maxdeg", type=int)
    sp.add_argument("--L", type=int)
    sp.add_argument("--L2", type=int)
    sp.add_argument("--q0", type=_fraction)
    sp.add_argument("--inject", choices=["corrupt-k", "drop-relation", "flip-rhat"])
    sp.add_argument("--json", action="store_true")
    return p


def _need_shape(args):
    if args.m is None or args.n is None:
        raise UsageError("--m and --n are required for this suite")
    if args.m < 1 or args.n < 1:
        raise UsageError("--m and --n must be positive")


def run_verify(args, out):
    s = args.suite
    if s == "rhat":
        N = args.N or ((args.m or 0) + (args.n or 0))
        if N < 2:
            raise UsageError("--N (or --m, --n) required")
        return _emit(rhat_report(N, args.inject), args.json, out)
    if s == "hopf":
        N = args.N or ((args.m or 0) + (args.n or 0))
        if N < 2:
            raise UsageError("--N (or --m, --n) required")
        return _emit(hopf_report(N, args.maxdeg or 3), args.json, out)
    _need_shape(args)
    m, n = args.m, args.n
    L = args.L if args.L is not None else action.default_cutoff(m, n)
    if s == "flatness":
        return _emit(flatness_report(m, n, args.maxdeg or 4, args.inject), args.json, out)
    if s == "embed":
        return _emit(embed_report(m, n, args.L or 4, args.maxdeg or 3, args.inject), args.json, out)
    if s == "module-algebra":
        maxdeg = args.maxdeg or (3 if m * n < 4 else 2)
        if args.q0 is not None and args.q0 in (0, 1, -1):
            raise UsageError(f"q0 = {args.q0} is excluded: q - q^-1 must be nonzero")
        return _emit(module_algebra_report(m, n, maxdeg, L, args.q0, args.inject), args.json, out)
    if s == "grading":
        return _emit(grading_report(m, n, L, args.inject), args.json, out)
    if s == "uniqueness":
        L1 = args.L if args.L is not None else 3
        L2 = args.L2 if args.L2 is not None else L1 + 1
        return _emit(action.uniqueness_probe(m, n, L1, L2), args.json, out)
    raise UsageError(f"unknown suite {s}")


def write_golden(table, om, out_dir):
    d = os.path.join(out_dir, f"{table.m}x{table.n}")
    os.makedirs(d, exist_ok=True)
    with open(os.path.join(d, "action.json"), "w") as fh:
        fh.write(table.dumps() + "\n")
    with open(os.path.join(d, "rules.json"), "w") as fh:
        fh.write(json.dumps(om.to_json(), indent=1) + "\n")
    return d


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.cmd == "nf":
            _need_shape(args)
            om = qmatcalc.build_calculus(args.m, args.n, 2)
            p = parse_poly(args.expr, args.m, args.n)
            print(render(om.nf(p)), file=out)
            return 0
        if args.cmd == "hilbert":
            _need_shape(args)
            rep = flatness_report(args.m, args.n, args.maxdeg, args.inject)
            if args.json:
                return _emit(rep, True, out)
            print(" d  k  normal  oracle  expected", file=out)
            for row in rep["table"]:
                print(f"{row['d']:2d} {row['k']:2d} {row['normal_words']:7d} {row['oracle']:7d} "
                      f"{row['expected']:9d}{'' if row['match'] else '  MISMATCH'}", file=out)
            print(f"status: {rep['status']}", file=out)
            return 0 if rep["status"] == "pass" else 1
        if args.cmd == "rhat":
            if args.N < 2:
                raise UsageError("--N must be at least 2")
            rep = rhat_report(args.N, args.inject)
            if not args.json:
                for k, v in rep["matrix"].items():
                    print(f"{k}: {v}", file=out)
            return _emit(rep, args.json, out)
        if args.cmd == "pair":
            p = parse_poly(args.func, N=args.N)
            w = parse_word(args.word, N=args.N)
            print(pairing.pair(p, w, args.N), file=out)
            return 0
        if args.cmd == "minor":
            _need_shape(args)
            cols = tuple(int(c) for c in args.cols.split(","))
            if any(not 1 <= c <= args.m + args.n for c in cols):
                raise UsageError(f"columns must lie in 1..{args.m + args.n}")
            try:
                mn = pairing.Minor(args.m, cols)
            except ValueError as exc:
                raise UsageError(str(exc))
            print(render(pairing.minor_expand(mn)), file=out)
            return 0
        if args.cmd == "derive-action":
            _need_shape(args)
            L = args.L if args.L is not None else action.default_cutoff(args.m, args.n)
            deriver = action.ActionDeriver(args.m, args.n)
            table = action.derive_table(args.m, args.n, L, deriver)
            print(table.dumps(), file=out)
            if args.out != "-":
                d = write_golden(table, deriver.om, args.out)
                print(f"wrote {d}", file=sys.stderr)
            return 0
        if args.cmd == "verify":
            return run_verify(args, out)
    except action.RankDeficient as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, IndexRangeError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PoleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
