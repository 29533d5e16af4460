"""Exact dense linear algebra over F_p on numpy int64 arrays.

Everything here is elementary row reduction; entries are kept in
``[0, p)`` after every operation, and products never overflow int64 for
the primes this package uses (p < 2**31 would already be safe for single
products; we additionally reduce after each vectorized step).
"""

from __future__ import annotations

import numpy as np


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def as_matrix(rows, width, p):
    """Build an int64 matrix from an iterable of rows (lists or arrays)."""
    mat = np.zeros((len(rows), width), dtype=np.int64)
    for i, row in enumerate(rows):
        mat[i, : len(row)] = row
    return mat % p


def rref(mat, p):
    """Row-reduce ``mat`` mod p. Returns (reduced_matrix, pivot_columns)."""
    a = np.array(mat, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        sub = a[r:, c]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * inv_mod(a[r, c], p)) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def rank(mat, p) -> int:
    if len(mat) == 0:
        return 0
    return len(rref(mat, p)[1])


def nullspace(mat, p):
    """Rows of the result span {x : mat @ x = 0 (mod p)}."""
    a = np.array(mat, dtype=np.int64)
    if a.size == 0:
        n = a.shape[1] if a.ndim == 2 else 0
        return np.eye(n, dtype=np.int64)
    red, pivots = rref(a, p)
    ncols = a.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-red[r, c]) % p
    return basis


def solve(mat, rhs, p):
    """One solution x of mat @ x = rhs (mod p), or None."""
    a = np.array(mat, dtype=np.int64) % p
    b = np.array(rhs, dtype=np.int64) % p
    if a.size == 0:
        return None if b.any() else np.zeros(a.shape[1] if a.ndim == 2 else 0, dtype=np.int64)
    aug = np.hstack([a, b.reshape(-1, 1)])
    red, pivots = rref(aug, p)
    ncols = a.shape[1]
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = red[r, ncols]
    return x


class Span:
    """Incremental row space mod p with optional coordinate tracking.

    Rows are kept fully reduced (rref).  When ``track`` is set, each stored
    row also records its expression in the independent vectors inserted so
    far, so ``reduce`` can return coordinates with respect to that basis.
    """

    def __init__(self, width: int, p: int, track: bool = False):
        self.width = width
        self.p = p
        self.track = track
        self.rows = np.zeros((0, width), dtype=np.int64)
        self.pivots: list[int] = []
        self.coords = np.zeros((0, 0), dtype=np.int64) if track else None

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def _reduce_vec(self, vec):
        p = self.p
        v = np.array(vec, dtype=np.int64) % p
        combo = np.zeros(self.dim, dtype=np.int64) if self.track else None
        for r, c in enumerate(self.pivots):
            f = v[c]
            if f:
                v = (v - f * self.rows[r]) % p
                if self.track:
                    combo = (combo + f * self.coords[r]) % p
        return v, combo

    def reduce(self, vec):
        """Return (residual, coords) of vec against the stored basis."""
        return self._reduce_vec(vec)

    def contains(self, vec) -> bool:
        res, _ = self._reduce_vec(vec)
        return not res.any()

    def add(self, vec) -> bool:
        """Insert vec; returns True when it enlarged the span."""
        p = self.p
        res, combo = self._reduce_vec(vec)
        nz = np.nonzero(res)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        inv = inv_mod(res[c], p)
        res = (res * inv) % p
        if self.track:
            newcoord = np.zeros(self.dim + 1, dtype=np.int64)
            if self.dim:
                newcoord[:-1] = (-combo) % p
            newcoord[-1] = 1
            newcoord = (newcoord * inv) % p
            self.coords = np.pad(self.coords, ((0, 0), (0, 1)))
        # keep existing rows reduced against the new one
        if self.dim:
            col = self.rows[:, c].copy()
            mask = col != 0
            if mask.any():
                self.rows[mask] = (self.rows[mask] - np.outer(col[mask], res)) % p
                if self.track:
                    self.coords[mask] = (self.coords[mask] - np.outer(col[mask], newcoord)) % p
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < c:
            pos += 1
        self.rows = np.insert(self.rows, pos, res, axis=0)
        self.pivots.insert(pos, c)
        if self.track:
            self.coords = np.insert(self.coords, pos, newcoord, axis=0)
        return True

    def basis_coords(self, vec):
        """Coordinates of vec on the inserted basis, or None if outside."""
        res, combo = self._reduce_vec(vec)
        if res.any():
            return None
        return combo
