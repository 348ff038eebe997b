"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples of Python ints (``IntMatrix``); nothing in
this module touches floating point.  Every function is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

IntMatrix = tuple[tuple[int, ...], ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]


class NotPositiveDefinite(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a)) if a else ()


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def bilinear(g, u, v):
    """u^T g v."""
    return dot(u, matvec(g, v))


def congruent(g, b):
    """B G B^T for a basis B given as rows."""
    return matmul(matmul(b, g), transpose(b))


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return as_matrix(out)


def det(a) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("det requires a square matrix")
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(a) -> RatMatrix:
    """Exact rational inverse by Gauss-Jordan elimination."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def rank(rows) -> int:
    if not rows:
        return 0
    h, _ = hermite_normal_form(rows)
    return sum(1 for row in h if any(row))


def content(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def common_denominator(values) -> int:
    d = 1
    for x in values:
        x = Fraction(x)
        d = d * x.denominator // gcd(d, x.denominator)
    return d


@dataclass(frozen=True)
class SnfResult:
    """A = U·D·V with U, V unimodular; the inverses are kept for solving."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))


def smith_normal_form(a) -> SnfResult:
    """Smith normal form with transforms.

    Pivot: smallest nonzero |entry| of the active block, ties broken by the
    lowest (row, col).  The diagonal is nonnegative with d1 | d2 | ... .
    """
    m, n = len(a), len(a[0])
    A = [list(row) for row in a]
    L = [[int(i == j) for j in range(m)] for i in range(m)]      # L·a·R = A
    Li = [[int(i == j) for j in range(m)] for i in range(m)]     # Li = L^-1
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    Ri = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(i, j, c):  # row i += c * row j
        if c == 0:
            return
        A[i] = [x + c * y for x, y in zip(A[i], A[j])]
        L[i] = [x + c * y for x, y in zip(L[i], L[j])]
        for row in Li:
            row[j] -= c * row[i]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]
        for row in Li:
            row[i], row[j] = row[j], row[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        L[i] = [-x for x in L[i]]
        for row in Li:
            row[i] = -row[i]

    def col_add(i, j, c):  # col i += c * col j
        if c == 0:
            return
        for row in A:
            row[i] += c * row[j]
        for row in R:
            row[i] += c * row[j]
        Ri[j] = [x - c * y for x, y in zip(Ri[j], Ri[i])]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]
        Ri[i], Ri[j] = Ri[j], Ri[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = abs(A[i][j])
                    if x and (best is None or x < best[0]):
                        best = (x, i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                row_swap(t, pi)
            if pj != t:
                col_swap(t, pj)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // p))
                    dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // p))
                    dirty |= A[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(A[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            row_add(t, bad, 1)
        if A[t][t] < 0:
            row_neg(t)
    return SnfResult(as_matrix(Li), as_matrix(A), as_matrix(Ri), as_matrix(L), as_matrix(R))


def invariant_factors(a) -> tuple[int, ...]:
    return smith_normal_form(a).diagonal


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(a) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form: returns (H, U) with H = U·A.

    H is upper echelon, pivots positive, entries above a pivot reduced into
    [0, pivot), zero rows last.
    """
    m = len(a)
    if m == 0:
        return (), ()
    n = len(a[0])
    H = [list(row) for row in a]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            if H[r][c] == 0:
                H[r], H[i] = H[i], H[r]
                U[r], U[i] = U[i], U[r]
                continue
            g, s, t = _xgcd(H[r][c], H[i][c])
            u, v = H[r][c] // g, H[i][c] // g
            hr, hi = H[r], H[i]
            H[r] = [s * x + t * y for x, y in zip(hr, hi)]
            H[i] = [-v * x + u * y for x, y in zip(hr, hi)]
            ur, ui = U[r], U[i]
            U[r] = [s * x + t * y for x, y in zip(ur, ui)]
            U[i] = [-v * x + u * y for x, y in zip(ur, ui)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        p = H[r][c]
        for i in range(r):
            f = H[i][c] // p
            if f:
                H[i] = [x - f * y for x, y in zip(H[i], H[r])]
                U[i] = [x - f * y for x, y in zip(U[i], U[r])]
        r += 1
    return as_matrix(H), as_matrix(U)


def row_basis(rows) -> IntMatrix:
    """HNF basis of the Z-span of the given integer rows."""
    if not rows:
        return ()
    h, _ = hermite_normal_form(rows)
    return tuple(row for row in h if any(row))


def kernel_basis(a) -> IntMatrix:
    """Basis (as rows, in HNF) of {x in Z^n : A x = 0}."""
    n = len(a[0])
    h, u = hermite_normal_form(transpose(a))
    ker = [u[i] for i in range(n) if not any(h[i])]
    return row_basis(ker) if ker else ()


def solve_integral(a, b) -> Optional[tuple[int, ...]]:
    """An integer x with A x = b, or None when no integral solution exists."""
    snf = smith_normal_form(a)
    c = matvec(snf.U_inv, b)
    m, n = len(a), len(a[0])
    y = [0] * n
    for i in range(m):
        d = snf.D[i][i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return matvec(snf.V_inv, y)


def congruence_kernel(rows, modulus: int) -> IntMatrix:
    """Basis of {x in Z^n : r·x ≡ 0 (mod modulus) for every row r}."""
    n = len(rows[0])
    k = len(rows)
    aug = [list(r) + [modulus * int(i == j) for j in range(k)] for i, r in enumerate(rows)]
    ker = kernel_basis(aug)
    return row_basis([row[:n] for row in ker])


def is_unimodular(a) -> bool:
    return abs(det(a)) == 1


def ldl_pivots(g) -> tuple[Fraction, ...]:
    """Pivots of an unpivoted LDL^T factorisation; stops at the first zero."""
    n = len(g)
    m = [[Fraction(x) for x in row] for row in g]
    piv = []
    for k in range(n):
        p = m[k][k]
        piv.append(p)
        if p == 0:
            break
        for i in range(k + 1, n):
            f = m[i][k] / p
            if f:
                for j in range(k + 1, n):
                    m[i][j] -= f * m[k][j]
    return tuple(piv)


def is_positive_definite(g) -> bool:
    piv = ldl_pivots(g)
    return len(piv) == len(g) and all(p > 0 for p in piv)


def lll_reduce(g, delta: Fraction = Fraction(3, 4)) -> tuple[IntMatrix, IntMatrix]:
    """LLL-reduce a positive definite Gram matrix with exact rationals.

    Returns (G', T) where the columns of T are the new basis vectors, so
    G' = T^T G T and T is unimodular.
    """
    n = len(g)
    if not is_positive_definite(g):
        raise NotPositiveDefinite("lll_reduce needs a positive definite Gram matrix")
    G = [list(row) for row in g]
    B = [[int(i == j) for j in range(n)] for i in range(n)]  # rows = basis vectors
    if n <= 1:
        return as_matrix(G), transpose(as_matrix(B))
    mu = [[Fraction(0)] * n for _ in range(n)]
    Bs = [Fraction(0)] * n
    Bs[0] = Fraction(G[0][0])
    half = Fraction(1, 2)

    def red(k, l):
        if abs(mu[k][l]) <= half:
            return
        q = (mu[k][l] + half).__floor__()
        B[k] = [x - q * y for x, y in zip(B[k], B[l])]
        gkl, gll = G[k][l], G[l][l]
        G[k][k] = G[k][k] - 2 * q * gkl + q * q * gll
        for i in range(n):
            if i != k:
                G[k][i] -= q * G[l][i]
                G[i][k] = G[k][i]
        mu[k][l] -= q
        for i in range(l):
            mu[k][i] -= q * mu[l][i]

    def swap(k, kmax):
        B[k], B[k - 1] = B[k - 1], B[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        m = mu[k][k - 1]
        bb = Bs[k] + m * m * Bs[k - 1]
        mu[k][k - 1] = m * Bs[k - 1] / bb
        Bs[k] = Bs[k - 1] * Bs[k] / bb
        Bs[k - 1] = bb
        for i in range(k + 1, kmax + 1):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]

    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k):
                s = Fraction(G[k][j])
                for i in range(j):
                    s -= mu[j][i] * mu[k][i] * Bs[i]
                mu[k][j] = s / Bs[j]
            s = Fraction(G[k][k])
            for j in range(k):
                s -= mu[k][j] * mu[k][j] * Bs[j]
            Bs[k] = s
        red(k, k - 1)
        if Bs[k] < (delta - mu[k][k - 1] ** 2) * Bs[k - 1]:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return as_matrix(G), transpose(as_matrix(B))
