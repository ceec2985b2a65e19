"""Small exact linear algebra helpers over the rationals.

Matrices are sequences of row sequences whose entries are ints or Fractions.
Everything here is exact; nothing ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def to_fraction_rows(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = to_fraction_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def det(a: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free row elimination with pivoting."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    m = to_fraction_rows(a)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        result *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return sign * result


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One exact solution of A x = b, or None if the system is inconsistent.

    A need not be square; with a nontrivial null space an arbitrary solution
    (free variables set to zero) is returned.
    """
    nrows, ncols = len(a), len(a[0])
    aug = [[Fraction(a[i][j]) for j in range(ncols)] + [Fraction(b[i])] for i in range(nrows)]
    m, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return x


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    m, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(m[i][n:]) for i in range(n))


def matvec(a: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(sum((Fraction(a[i][j]) * Fraction(v[j]) for j in range(len(v))), Fraction(0)) for i in range(len(a)))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum((Fraction(a[i][t]) * Fraction(b[t][j]) for t in range(k)), Fraction(0)) for j in range(m))
        for i in range(n)
    )


def transpose(a: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(a[i][j]) for i in range(len(a))) for j in range(len(a[0])))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def clear_denominators(v: Sequence[Fraction]) -> Vector:
    """Scale a rational vector to a primitive integer vector (empty-safe)."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(Fraction(x) for x in ints)
