"""Exact integer matrices on top of numpy object arrays.

Entries are Python ints throughout, so products never overflow or round.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = [
    "NotUnimodularError",
    "as_matrix",
    "identity",
    "zeros",
    "det",
    "inverse",
    "is_unimodular",
    "random_unimodular",
    "to_lists",
    "equal",
]


class NotUnimodularError(ArithmeticError):
    pass


def as_matrix(rows, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Build an object-dtype integer matrix; ``shape`` disambiguates empty input."""
    if isinstance(rows, np.ndarray):
        m = rows.astype(object)
    else:
        rows = [list(r) for r in rows]
        if shape is not None and (shape[0] == 0 or shape[1] == 0):
            m = np.zeros(shape, dtype=object)
        else:
            m = np.array(rows, dtype=object).reshape(len(rows), -1 if rows else 0)
    for v in m.flat:
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
            raise TypeError(f"matrix entries must be integers, got {v!r}")
    m = np.vectorize(int, otypes=[object])(m) if m.size else m
    if shape is not None and m.shape != tuple(shape):
        raise ValueError(f"expected shape {shape}, got {m.shape}")
    return m


def identity(n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=object)
    for i in range(n):
        m[i, i] = 1
    return m


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool(np.all(a == b))


def det(m: np.ndarray) -> int:
    """Bareiss fraction-free elimination."""
    n, k = m.shape
    if n != k:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in m]
    sign, prev = 1, 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for r in range(i + 1, n):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


def is_unimodular(m: np.ndarray) -> bool:
    return m.shape[0] == m.shape[1] and det(m) in (1, -1)


def inverse(m: np.ndarray) -> np.ndarray:
    """Exact inverse of a unimodular matrix (Gauss-Jordan over the rationals)."""
    n, k = m.shape
    if n != k:
        raise NotUnimodularError(f"{n}x{k} matrix is not square")
    a = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise NotUnimodularError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    out = zeros(n, n)
    for i in range(n):
        for j in range(n):
            v = a[i][n + j]
            if v.denominator != 1:
                raise NotUnimodularError("inverse is not integral (determinant is not +-1)")
            out[i, j] = v.numerator
    return out


def random_unimodular(n: int, rng: random.Random, steps: int | None = None, bound: int = 2) -> np.ndarray:
    """A product of random elementary integer matrices (row additions, swaps, negations)."""
    m = identity(n)
    if n == 0:
        return m
    steps = steps if steps is not None else 2 * n + 2
    for _ in range(steps):
        kind = rng.random()
        i = rng.randrange(n)
        if n > 1 and kind < 0.7:
            j = rng.choice([x for x in range(n) if x != i])
            c = rng.choice([x for x in range(-bound, bound + 1) if x])
            m[i, :] = m[i, :] + c * m[j, :]
        elif n > 1 and kind < 0.85:
            j = rng.choice([x for x in range(n) if x != i])
            m[[i, j], :] = m[[j, i], :]
        else:
            m[i, :] = -m[i, :]
    return m


def to_lists(m: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in m]


def format_matrix(m: np.ndarray) -> str:
    if m.shape[0] == 0 or m.shape[1] == 0:
        return f"[] ({m.shape[0]}x{m.shape[1]})"
    return "[" + ",\n ".join("[" + ", ".join(str(int(x)) for x in row) + "]" for row in m) + "]"


def stack(blocks: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    return np.block([[b for b in row] for row in blocks]).astype(object)
