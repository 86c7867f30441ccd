"""Exact linear algebra over Z and Q for small symmetric matrices.

Intersection forms of plumbing graphs are tiny (a few dozen vertices at
most), so everything here works on lists of ints / Fractions and favours
exactness over speed.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

Matrix = list[list[int]]
QMatrix = list[list[Fraction]]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def leading_minors(m: Sequence[Sequence[int]]) -> list[int]:
    return [determinant([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def is_negative_definite(m: Sequence[Sequence[int]]) -> bool:
    # Sylvester: (-1)^k * minor_k > 0 for every leading minor.
    return all((-1) ** k * d > 0 for k, d in enumerate(leading_minors(m), start=1))


def inverse(m: Sequence[Sequence[int]]) -> QMatrix:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_vec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def quad(m: Sequence[Sequence], v: Sequence):
    return dot(v, mat_vec(m, v))


def solve(m: Sequence[Sequence[int]], b: Sequence) -> list[Fraction]:
    return mat_vec(inverse(m), [Fraction(x) for x in b])


def hermite_lower(m: Sequence[Sequence[int]]) -> Matrix:
    """Column-style Hermite normal form of a nonsingular integer matrix.

    Returns a lower triangular H with positive diagonal whose columns span
    the same lattice as the columns of ``m``.
    """
    n = len(m)
    cols = [[int(m[r][c]) for r in range(n)] for c in range(n)]
    for r in range(n):
        # gcd-combine columns r..n-1 on row r into column r
        for c in range(r + 1, n):
            while cols[c][r] != 0:
                q = cols[r][r] // cols[c][r]
                cols[r] = [x - q * y for x, y in zip(cols[r], cols[c])]
                cols[r], cols[c] = cols[c], cols[r]
        if cols[r][r] < 0:
            cols[r] = [-x for x in cols[r]]
        if cols[r][r] == 0:
            raise ValueError("singular matrix")
        for c in range(r):
            q = cols[c][r] // cols[r][r]
            cols[c] = [x - q * y for x, y in zip(cols[c], cols[r])]
    return [[cols[c][r] for c in range(n)] for r in range(n)]


def reduce_mod_lattice(h: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    """Canonical representative of ``v`` modulo the column span of lower-triangular ``h``."""
    v = list(v)
    for r in range(len(h)):
        q = v[r] // h[r][r]
        if q:
            v = [x - q * h[i][r] for i, x in enumerate(v)]
    return tuple(v)


def coset_box(h: Matrix) -> Iterator[tuple[int, ...]]:
    """All canonical coset representatives of Z^n / (column span of ``h``)."""
    yield from product(*(range(h[i][i]) for i in range(len(h))))


def cholesky(q: Sequence[Sequence]) -> list[list[float]]:
    n = len(q)
    ell = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            s = float(q[i][j]) - sum(ell[i][k] * ell[j][k] for k in range(j))
            if i == j:
                if s <= 0:
                    raise ValueError("matrix not positive definite")
                ell[i][i] = math.sqrt(s)
            else:
                ell[i][j] = s / ell[j][j]
    return ell


def ellipsoid_points(q: Sequence[Sequence[int]], center: Sequence[Fraction],
                     bound: Fraction, accept=None) -> list[tuple[int, ...]]:
    """Integer points x with (x-c)^T q (x-c) <= bound, q positive definite.

    Fincke-Pohst style enumeration in floating point with a safety margin,
    followed by an exact filter (``accept``, when given, must be an exact
    test equivalent to the inequality).
    """
    n = len(q)
    if bound < 0:
        return []
    qf = [[float(x) for x in row] for row in q]
    cf = [float(x) for x in center]
    # q = R^T R with R upper triangular; enumerate coordinates from last to first.
    # Reverse the variable order so the lower Cholesky factor of the
    # reversed matrix gives the nested bounds.
    rev = list(range(n - 1, -1, -1))
    qr = [[qf[i][j] for j in rev] for i in rev]
    cr = [cf[i] for i in rev]
    ell = cholesky(qr)  # qr = L L^T, use y = L^T (x - c)
    slack = 1e-7 * (1.0 + float(bound))
    b = float(bound) + slack
    found: list[tuple[int, ...]] = []
    xs = [0] * n

    # (x-c)^T L L^T (x-c) = sum_k (sum_{i>=k} L[i][k] (x_i - c_i))^2
    def rec(k: int, rem: float) -> None:
        # coordinates k+1..n-1 already fixed
        partial = sum(ell[i][k] * (xs[i] - cr[i]) for i in range(k + 1, n))
        lkk = ell[k][k]
        r = math.sqrt(max(rem, 0.0)) / lkk
        mid = cr[k] - partial / lkk
        lo, hi = math.ceil(mid - r - 1e-9), math.floor(mid + r + 1e-9)
        for v in range(lo, hi + 1):
            xs[k] = v
            t = lkk * (v - cr[k]) + partial
            left = rem - t * t
            if left < -slack:
                continue
            if k == 0:
                found.append(tuple(xs[j] for j in rev))
            else:
                rec(k - 1, left)

    rec(n - 1, b)
    out = []
    for x in found:
        if accept is not None:
            if accept(x):
                out.append(x)
            continue
        d = [Fraction(a) - c for a, c in zip(x, center)]
        if quad(q, d) <= bound:
            out.append(x)
    out.sort()
    return out
