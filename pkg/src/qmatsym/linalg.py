"""Sparse exact row reduction over a field.

Rows are dicts ``{column: value}`` with no stored zeros.  Columns are any
hashable keys; the caller supplies a sort key that fixes pivot preference
(the largest column under ``key`` becomes the pivot of each row).  Values
must support ``+ - * /`` and truth testing (QRat or Fraction).
"""

from __future__ import annotations

from fractions import Fraction


def _axpy(row, factor, other):
    """row -= factor * other, in place."""
    for c, v in other.items():
        w = row.get(c)
        if w is None:
            row[c] = -(factor * v)
        else:
            w = w - factor * v
            if w:
                row[c] = w
            else:
                del row[c]


def echelon(rows, key=None):
    """Reduce rows to reduced row echelon form.

    Returns a dict ``{pivot_column: row}`` where each row has coefficient 1
    at its pivot, the pivot is its largest column under ``key``, and no
    pivot column occurs in any other row.
    """
    pivots = {}
    order = []
    for row in rows:
        row = dict(row)
        # eliminate existing pivots, largest first so new entries stay below
        while row:
            hits = [c for c in row if c in pivots]
            if not hits:
                break
            for c in hits:
                v = row.get(c)
                if v:
                    _axpy(row, v, pivots[c])
        if not row:
            continue
        p = max(row, key=key)
        inv = _inv(row[p]) if not _is_one(row[p]) else None
        if inv is not None:
            row = {c: v * inv for c, v in row.items()}
        for c0, other in pivots.items():
            v = other.get(p)
            if v:
                _axpy(other, v, row)
        pivots[p] = row
        order.append(p)
    return {p: pivots[p] for p in order}


def _is_one(v):
    return v == 1


def _inv(v):
    if isinstance(v, int):
        return Fraction(1, v)
    return 1 / v


def rank(rows, key=None):
    return len(echelon(rows, key))


def solve(columns, rhs, key=None):
    """Solve sum_j x_j * columns[j] = rhs exactly.

    ``columns`` is a list of sparse vectors (dicts row -> value) and ``rhs``
    a sparse vector.  Returns ``(x, rank)`` where ``x`` is the list of
    coefficients, or ``(None, rank)`` if the system is inconsistent.  When
    the column rank is deficient the free unknowns are set to zero.
    """
    ncols = len(columns)
    # transpose: one equation per probe row, unknown indices as columns
    eqs = {}
    for j, col in enumerate(columns):
        for r, v in col.items():
            eqs.setdefault(r, {})[j] = v
    for r, v in rhs.items():
        eqs.setdefault(r, {})["rhs"] = v
    rows = list(eqs.values())
    colkey = (lambda c: -1 if c == "rhs" else ncols - c)
    red = echelon(rows, key=colkey)
    if "rhs" in red:
        return None, len(red) - 1
    x = [0] * ncols
    for p, row in red.items():
        v = row.get("rhs")
        if v:
            x[p] = v
    return x, len(red)


# ---------------------------------------------------------------------------
# sparse matrices as dict-of-dicts {row: {col: value}}
# ---------------------------------------------------------------------------

def identity(keys, one=1):
    return {k: {k: one} for k in keys}


def matmul(a, b):
    out = {}
    for i, row in a.items():
        acc = {}
        for k, v in row.items():
            brow = b.get(k)
            if not brow:
                continue
            for j, w in brow.items():
                x = acc.get(j)
                y = v * w if x is None else x + v * w
                if y:
                    acc[j] = y
                elif x is not None:
                    del acc[j]
        if acc:
            out[i] = acc
    return out


def matadd(a, b, scale=1):
    out = {i: dict(r) for i, r in a.items()}
    for i, row in b.items():
        acc = out.setdefault(i, {})
        for j, w in row.items():
            w = w if scale == 1 else scale * w
            x = acc.get(j)
            y = w if x is None else x + w
            if y:
                acc[j] = y
            elif x is not None:
                del acc[j]
        if not acc:
            del out[i]
    return out


def matscale(a, c):
    if not c:
        return {}
    return {i: {j: c * v for j, v in r.items()} for i, r in a.items()}


def kron(a, b):
    """Kronecker product; row/col keys become concatenated tuples."""
    out = {}
    for i, ra in a.items():
        for k, rb in b.items():
            row = {}
            for j, va in ra.items():
                for l, vb in rb.items():
                    row[_cat(j, l)] = va * vb
            out[_cat(i, k)] = row
    return out


def _cat(x, y):
    x = x if isinstance(x, tuple) else (x,)
    y = y if isinstance(y, tuple) else (y,)
    return x + y


def is_zero(a):
    return all(not r for r in a.values())


def first_nonzero(a):
    for i in sorted(a):
        for j in sorted(a[i]):
            return (i, j, a[i][j])
    return None
