"""Smith normal form over Z and Z/m, plus the integer kernels built on it."""
from __future__ import annotations

from math import gcd
from typing import List, Optional, Tuple

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    n = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row) if a) for j in range(n)] for row in A]


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _smith_int(M: Matrix, ncols: int) -> Tuple[Matrix, Matrix, Matrix]:
    A = [list(r) for r in M]
    m, n = len(A), ncols
    P = identity(m)
    Q = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the lower-right block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        done = False
        while not done:
            done = True
            # clear column t below the pivot
            for i in range(t + 1, m):
                if A[i][t]:
                    a, b = A[t][t], A[i][t]
                    if b % a == 0:
                        f = b // a
                        A[i] = [q - f * p for p, q in zip(A[t], A[i])]
                        P[i] = [q - f * p for p, q in zip(P[t], P[i])]
                        continue
                    g, x, y = _xgcd(a, b)
                    u, v = a // g, b // g
                    rt, ri = A[t], A[i]
                    A[t] = [x * p + y * q for p, q in zip(rt, ri)]
                    A[i] = [-v * p + u * q for p, q in zip(rt, ri)]
                    pt, pi = P[t], P[i]
                    P[t] = [x * p + y * q for p, q in zip(pt, pi)]
                    P[i] = [-v * p + u * q for p, q in zip(pt, pi)]
            # clear row t right of the pivot
            for j in range(t + 1, n):
                if A[t][j]:
                    a, b = A[t][t], A[t][j]
                    if b % a == 0:
                        f = b // a
                        for row in A:
                            row[j] -= f * row[t]
                        for row in Q:
                            row[j] -= f * row[t]
                        continue
                    g, x, y = _xgcd(a, b)
                    u, v = a // g, b // g
                    for row in A:
                        p, q = row[t], row[j]
                        row[t], row[j] = x * p + y * q, -v * p + u * q
                    for row in Q:
                        p, q = row[t], row[j]
                        row[t], row[j] = x * p + y * q, -v * p + u * q
                    done = False
            if any(A[i][t] for i in range(t + 1, m)):
                done = False
        # divisibility: if the pivot does not divide some entry, fold that row in and redo
        piv = A[t][t]
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % piv:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            A[t] = [p + q for p, q in zip(A[t], A[bad])]
            P[t] = [p + q for p, q in zip(P[t], P[bad])]
            continue
        if piv < 0:
            A[t] = [-p for p in A[t]]
            P[t] = [-p for p in P[t]]
        t += 1
    return A, P, Q


def smith_normal_form(M: Matrix, modulus: int = 0, ncols: Optional[int] = None) -> Tuple[Matrix, Matrix, Matrix]:
    """Return (D, P, Q) with P*M*Q = D, D diagonal with d1 | d2 | ...

    With modulus m > 0 the computation is lifted to Z and reduced; diagonal
    entries are then normalized to gcd(d, m) by a unit row scaling.
    """
    if ncols is None:
        ncols = len(M[0]) if M else 0
    rows = len(M)
    if rows == 0 or ncols == 0:
        return [[0] * ncols for _ in range(rows)], identity(rows), identity(ncols)
    D, P, Q = _smith_int(M, ncols)
    if modulus:
        m = modulus
        D = [[x % m for x in r] for r in D]
        P = [[x % m for x in r] for r in P]
        Q = [[x % m for x in r] for r in Q]
        for i in range(min(rows, ncols)):
            d = D[i][i]
            if d == 0:
                continue
            g = gcd(d, m)
            if g == d:
                continue
            u = _unit_with(d, g, m)
            D[i][i] = g
            P[i] = [(x * u) % m for x in P[i]]
        # after normalization the chain still divides: gcd(d_i, m) | gcd(d_{i+1}, m)
    return D, P, Q


def _unit_with(d: int, g: int, m: int) -> int:
    """A unit u mod m with d*u = g (mod m)."""
    mg = m // g
    base = pow(d // g, -1, mg) if mg > 1 else 0
    u = base
    while gcd(u, m) != 1:
        u += mg
    return u % m


def diagonal(D: Matrix) -> List[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def invariant_factors(M: Matrix, modulus: int = 0, ncols: Optional[int] = None) -> List[int]:
    D, _, _ = smith_normal_form(M, modulus, ncols)
    return [d for d in diagonal(D) if d]


def integer_kernel(M: Matrix, ncols: int) -> Matrix:
    """Columns spanning the kernel of M over Z (a saturated lattice)."""
    if not M:
        return identity(ncols)
    D, P, Q = smith_normal_form(M, 0, ncols)
    r = sum(1 for d in diagonal(D) if d)
    return [[Q[i][j] for j in range(r, ncols)] for i in range(ncols)]


def determinant(M: Matrix) -> int:
    """Exact integer determinant by fraction-free elimination (Bareiss)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
