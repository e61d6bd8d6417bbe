"""Exact dense matrices as plain lists of lists.

Entries are any ring values supporting ``+``, ``-``, ``*``, ``==`` and
``is_zero()`` (field elements or multivariate polynomials).  Rank, inverse,
and kernel computations additionally need exact division, so they take the
field explicitly.  Multiplication skips zero entries: the matrices built by
the transfer and Koszul modules are very sparse and this keeps the
acceptance sweeps inside their runtime budgets.
"""

from __future__ import annotations


def zeros(ring, rows, cols):
    z = ring.zero()
    return [[z for _ in range(cols)] for _ in range(rows)]


def identity(ring, n):
    m = zeros(ring, n, n)
    one = ring.one()
    for i in range(n):
        m[i][i] = one
    return m


def shape(m):
    return (len(m), len(m[0]) if m else 0)


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_neg(a):
    return [[-x for x in row] for row in a]


def mat_scale(c, a):
    return [[c * x for x in row] for row in a]


def mat_mul(ring, a, b):
    rows, inner = shape(a)
    inner2, cols = shape(b)
    if inner != inner2:
        raise ValueError(f"shape mismatch: {shape(a)} * {shape(b)}")
    out = zeros(ring, rows, cols)
    for i in range(rows):
        arow = a[i]
        orow = out[i]
        for k in range(inner):
            x = arow[k]
            if x.is_zero():
                continue
            brow = b[k]
            for j in range(cols):
                y = brow[j]
                if not y.is_zero():
                    orow[j] = orow[j] + x * y
    return out


def mat_vec(ring, a, v):
    return [row[0] for row in mat_mul(ring, a, [[x] for x in v])]


def transpose(a):
    rows, cols = shape(a)
    return [[a[i][j] for i in range(rows)] for j in range(cols)]


def mat_eq(a, b):
    if shape(a) != shape(b):
        return False
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_zero_matrix(a):
    return all(x.is_zero() for row in a for x in row)


def kron(ring, a, b):
    """Kronecker product (used for tensor products of Gram matrices)."""
    ra, ca = shape(a)
    rb, cb = shape(b)
    out = zeros(ring, ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            x = a[i][j]
            if x.is_zero():
                continue
            for k in range(rb):
                for l in range(cb):
                    y = b[k][l]
                    if not y.is_zero():
                        out[i * rb + k][j * cb + l] = x * y
    return out


def block_diag(ring, blocks):
    n = sum(shape(b)[0] for b in blocks)
    m = sum(shape(b)[1] for b in blocks)
    out = zeros(ring, n, m)
    r = c = 0
    for b in blocks:
        rb, cb = shape(b)
        for i in range(rb):
            for j in range(cb):
                out[r + i][c + j] = b[i][j]
        r += rb
        c += cb
    return out


def rank(field, a):
    """Rank over a field by sparse Gaussian elimination."""
    rows = []
    for row in a:
        entries = {j: x for j, x in enumerate(row) if not x.is_zero()}
        if entries:
            rows.append(entries)
    rk = 0
    # eliminate column by column, preferring the sparsest available pivot row
    while rows:
        col = min(min(r) for r in rows)
        pivots = [r for r in rows if col in r]
        pivot = min(pivots, key=len)
        rows.remove(pivot)
        rk += 1
        inv = pivot[col].inverse()
        pivot = {j: inv * x for j, x in pivot.items()}
        new_rows = []
        for r in rows:
            if col in r:
                factor = r[col]
                merged = dict(r)
                for j, x in pivot.items():
                    y = merged.get(j)
                    val = -factor * x if y is None else y - factor * x
                    if val.is_zero():
                        merged.pop(j, None)
                    else:
                        merged[j] = val
                if merged:
                    new_rows.append(merged)
            else:
                new_rows.append(r)
        rows = new_rows
    return rk


def inverse(field, a):
    """Exact inverse over a field, or None when singular."""
    n, m = shape(a)
    if n != m:
        return None
    aug = [list(row) + list(identity(field, n)[i]) for i, row in enumerate(a)]
    for col in range(n):
        pivot_row = None
        for i in range(col, n):
            if not aug[i][col].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            return None
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [inv * x for x in aug[col]]
        for i in range(n):
            if i == col:
                continue
            f = aug[i][col]
            if f.is_zero():
                continue
            aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]
