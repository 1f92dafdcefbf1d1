"""Dense linear algebra over F_p on small integer matrices.

Vectors of F_p^d are encoded as integers ``sum(v[i] * p**i)``; that encoding is
the point numbering used by every vector-space carrier in the package.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np


def as_matrix(rows, cols: int | None = None) -> np.ndarray:
    m = np.array(rows, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(-1, cols if cols is not None else (m.shape[0] and 1))
    if m.size == 0 and cols is not None:
        m = m.reshape(m.shape[0], cols)
    return m


def frozen(m: np.ndarray) -> np.ndarray:
    m = np.ascontiguousarray(m, dtype=np.int64)
    m.setflags(write=False)
    return m


def encode(v, p: int) -> int:
    n = 0
    for c in reversed([int(x) for x in v]):
        n = n * p + c
    return n


def decode(n: int, d: int, p: int) -> np.ndarray:
    out = np.zeros(d, dtype=np.int64)
    for i in range(d):
        n, out[i] = divmod(n, p)
    return out


@lru_cache(maxsize=64)
def all_vectors(d: int, p: int) -> np.ndarray:
    """Every vector of F_p^d, row ``k`` being ``decode(k)``."""
    n = p**d
    idx = np.arange(n, dtype=np.int64)
    out = np.empty((n, d), dtype=np.int64)
    for i in range(d):
        idx, out[:, i] = np.divmod(idx, p)
    return frozen(out)


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, tuple(pivots)


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def as_rows(rows, width: int) -> np.ndarray:
    """``rows`` as a 2-d array with ``width`` columns (any number of rows, even for width 0)."""
    a = np.asarray(rows, dtype=np.int64)
    if width == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return a.reshape(-1, width)


def row_basis(rows: np.ndarray, p: int, width: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced echelon basis of the span of ``rows``."""
    rows = as_rows(rows, width)
    if rows.shape[0] == 0:
        return np.zeros((0, width), dtype=np.int64), ()
    r, piv = rref(rows, p)
    return r[: len(piv)], piv


def nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning ``{x : m @ x == 0}``."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, piv = rref(m, p)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-r[i, f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def inverse(m: np.ndarray, p: int) -> np.ndarray | None:
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        return None
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    aug = np.concatenate([m % p, np.eye(n, dtype=np.int64)], axis=1)
    r, piv = rref(aug, p)
    if piv[:n] != tuple(range(n)) or len(piv) < n:
        return None
    return r[:, n:] % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    return (a @ b) % p


class Coordinates:
    """A subspace of F_p^m with a fixed reduced-echelon basis.

    ``realize`` maps coordinates to ambient vectors; ``coords`` reads the
    pivot entries back off, which is exact because the basis is reduced.
    """

    def __init__(self, basis: np.ndarray, pivots: tuple[int, ...], p: int):
        self.basis = frozen(basis)
        self.pivots = tuple(pivots)
        self.p = p

    @classmethod
    def identity(cls, n: int, p: int) -> "Coordinates":
        return cls(np.eye(n, dtype=np.int64), tuple(range(n)), p)

    @classmethod
    def span(cls, rows, p: int, width: int) -> "Coordinates":
        b, piv = row_basis(rows, p, width)
        return cls(b, piv, p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def width(self) -> int:
        return self.basis.shape[1]

    def realize(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64).reshape(1, self.dim)
        return matmul(c, self.basis, self.p)[0]

    def coords(self, vec, check: bool = True) -> np.ndarray:
        vec = np.asarray(vec, dtype=np.int64) % self.p
        c = vec[list(self.pivots)] if self.pivots else np.zeros(0, dtype=np.int64)
        if check and not np.array_equal(self.realize(c), vec):
            raise ValueError("vector is not in the subspace")
        return c

    def contains(self, vec) -> bool:
        try:
            self.coords(vec)
        except ValueError:
            return False
        return True
