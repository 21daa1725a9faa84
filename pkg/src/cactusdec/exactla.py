"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries reduced into [0, p).  Every
routine is deterministic: elimination always picks the leftmost unfinished
column and, within it, the first row in storage order.  Large reductions
run through float64 BLAS in blocks small enough that every partial dot
product stays below 2**53, so the arithmetic is exact; this caps the
supported modulus at 2**26.
"""

from __future__ import annotations

import numpy as np

MAX_PRIME = 1 << 26

_CHUNK = 1024


def _as_mat(a, p):
    m = np.asarray(a, dtype=np.int64)
    if m.ndim != 2:
        raise ValueError("expected a two-dimensional array")
    return np.mod(m, p)


def matmul_mod(x, y, p):
    """Exact (x @ y) % p for int64 arrays with entries already in [0, p)."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape[1] != y.shape[0]:
        raise ValueError("dimension mismatch in matmul")
    k = x.shape[1]
    out = np.zeros((x.shape[0], y.shape[1]), dtype=np.int64)
    if k == 0 or x.shape[0] == 0 or y.shape[1] == 0:
        return out
    # block the inner dimension so every float64 dot stays below 2**53
    kmax = max(1, int((1 << 53) // ((p - 1) * (p - 1))))
    for s in range(0, k, kmax):
        part = np.dot(x[:, s:s + kmax].astype(np.float64),
                      y[s:s + kmax].astype(np.float64))
        out = (out + part.astype(np.int64)) % p
    return out


def _eliminate_block(b, p):
    """Full row reduction of a small block; returns (rref_rows, pivot_cols)."""
    b = b.copy()
    nr, nc = b.shape
    r = 0
    pivs = []
    for c in range(nc):
        if r == nr:
            break
        nzi = np.nonzero(b[r:, c])[0]
        if nzi.size == 0:
            continue
        i = r + int(nzi[0])
        if i != r:
            b[[r, i]] = b[[i, r]]
        inv = pow(int(b[r, c]), p - 2, p)
        b[r] = (b[r] * inv) % p
        f = b[:, c].copy()
        f[r] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            b[hit] = (b[hit] - np.outer(f[hit], b[r])) % p
        pivs.append(c)
        r += 1
    return b[:len(pivs)], pivs


def rref(a, p):
    """Reduced row echelon form mod p.

    Returns (rows, pivots): `rows` is a rank x ncols int64 array in
    canonical RREF (unit pivots, pivot columns otherwise zero, rows
    ordered by pivot column), `pivots` a tuple of pivot column indices.
    """
    a = _as_mat(a, p)
    nrows, ncols = a.shape
    rows = np.zeros((0, ncols), dtype=np.int64)
    pivots: list[int] = []
    for lo in range(0, nrows, _CHUNK):
        b = a[lo:lo + _CHUNK]
        if pivots:
            b = (b - matmul_mod(b[:, pivots], rows, p)) % p
        else:
            b = b.copy()
        b = b[np.any(b, axis=1)]
        if b.shape[0] == 0:
            continue
        new_rows, new_pivs = _eliminate_block(b, p)
        if not new_pivs:
            continue
        if pivots:
            rows = (rows - matmul_mod(rows[:, new_pivs], new_rows, p)) % p
        rows = np.vstack([rows, new_rows])
        pivots.extend(new_pivs)
        order = np.argsort(pivots, kind="stable")
        rows = rows[order]
        pivots = [pivots[i] for i in order]
    return rows, tuple(pivots)


def rank(a, p):
    return len(rref(a, p)[1])


def reduce_mod_rowspace(b, rows, pivots, p):
    """Reduce the rows of `b` against an RREF basis (rows, pivots)."""
    b = _as_mat(b, p)
    if len(pivots) == 0 or b.shape[0] == 0:
        return b.copy()
    return (b - matmul_mod(b[:, list(pivots)], rows, p)) % p


def kernel_basis(a, p):
    """Canonical basis of the right kernel of `a`, one vector per row.

    For each non-pivot column j the basis vector has a 1 in slot j and
    the negated RREF entries in the pivot slots; vectors are ordered by
    j ascending.  Row count equals ncols - rank.
    """
    a = _as_mat(a, p)
    rows, pivots = rref(a, p)
    ncols = a.shape[1]
    free = [j for j in range(ncols) if j not in set(pivots)]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for i, j in enumerate(free):
        out[i, j] = 1
        for r, c in enumerate(pivots):
            out[i, c] = (-int(rows[r, j])) % p
    return out


def solve_or_witness(a, b, p):
    """Solve a x = b mod p; returns the solution with free variables 0,
    or None when the system is inconsistent."""
    a = _as_mat(a, p)
    b = np.asarray(b, dtype=np.int64) % p
    if b.ndim != 1 or b.shape[0] != a.shape[0]:
        raise ValueError("right-hand side has wrong length")
    aug = np.hstack([a, b.reshape(-1, 1)])
    rows, pivots = rref(aug, p)
    n = a.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = rows[r, n]
    return x


def inverse(a, p):
    """Inverse of a square matrix, or None if singular."""
    a = _as_mat(a, p)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("matrix is not square")
    aug = np.hstack([a, np.eye(n, dtype=np.int64)])
    rows, pivots = rref(aug, p)
    if tuple(pivots[:n]) != tuple(range(n)) or len(pivots) < n:
        return None
    return rows[:n, n:].copy()


class IncrementalRREF:
    """Grow an RREF basis by inserting batches of rows; tracks rank."""

    def __init__(self, ncols, p):
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self):
        return len(self.pivots)

    def insert(self, batch):
        p = self.p
        batch = _as_mat(batch, p)
        for lo in range(0, batch.shape[0], _CHUNK):
            b = batch[lo:lo + _CHUNK]
            if self.pivots:
                b = (b - matmul_mod(b[:, self.pivots], self.rows, p)) % p
            else:
                b = b.copy()
            b = b[np.any(b, axis=1)]
            if b.shape[0] == 0:
                continue
            new_rows, new_pivs = _eliminate_block(b, p)
            if not new_pivs:
                continue
            if self.pivots:
                self.rows = (self.rows - matmul_mod(
                    self.rows[:, new_pivs], new_rows, p)) % p
            self.rows = np.vstack([self.rows, new_rows])
            self.pivots.extend(new_pivs)
            order = np.argsort(self.pivots, kind="stable")
            self.rows = self.rows[order]
            self.pivots = [self.pivots[i] for i in order]

    def reduce(self, batch):
        return reduce_mod_rowspace(batch, self.rows, self.pivots, self.p)

    def snapshot(self):
        return self.rows.copy(), tuple(self.pivots)
