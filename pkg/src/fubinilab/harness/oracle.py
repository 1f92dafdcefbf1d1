"""Finite product-measure sums over exact rationals.

Deliberately self-contained: nothing here imports the rest of the package
apart from the error type, so agreement with the monad code is evidence.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import DimensionMismatch


def _size(s) -> int:
    return s if isinstance(s, int) else len(s)


def oracle_discrete_fubini(xs, ys, mu: Sequence, nu: Sequence, f: Sequence[Sequence], modulus: int | None = None):
    """Both iterated sums and the product-measure sum of ``f``.

    ``xs`` and ``ys`` are finite sets (or their sizes); ``mu`` and ``nu`` are
    weights indexed like them and ``f[i][j]`` is the value at ``(xs[i], ys[j])``.
    With ``modulus`` the three results are reduced modulo it.
    """
    n, m = _size(xs), _size(ys)
    if len(mu) != n or len(nu) != m or len(f) != n or any(len(row) != m for row in f):
        raise DimensionMismatch(f"expected weights of length {n}, {m} and a {n}x{m} matrix")
    mu = [Fraction(w) for w in mu]
    nu = [Fraction(w) for w in nu]
    f = [[Fraction(v) for v in row] for row in f]

    inner_x = Fraction(0)
    for j in range(m):
        s = Fraction(0)
        for i in range(n):
            s += mu[i] * f[i][j]
        inner_x += nu[j] * s

    inner_y = Fraction(0)
    for i in range(n):
        s = Fraction(0)
        for j in range(m):
            s += nu[j] * f[i][j]
        inner_y += mu[i] * s

    product = Fraction(0)
    for i in range(n):
        for j in range(m):
            product += mu[i] * nu[j] * f[i][j]

    if modulus is not None:
        return inner_x % modulus, inner_y % modulus, product % modulus
    return inner_x, inner_y, product
