"""Linear algebra over Z/ell^n.

Large matrices (group-ring sized) go through a numpy elimination that brings A
to diagonal form P A Q = diag(ell^v_1, ell^v_2, ...); small cochain spaces use
exact integer lattices so cohomology classes get canonical coordinates.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ScaleCap
from .snf import integer_kernel, smith_normal_form

Vector = List[int]

MAX_MODULUS = 1 << 30


def valuation(a: int, ell: int, n: int) -> int:
    """ell-adic valuation of a in Z/ell^n (n for zero)."""
    a %= ell ** n
    if a == 0:
        return n
    v = 0
    while a % ell == 0:
        a //= ell
        v += 1
    return v


class LocalSolver:
    """P A Q = D over Z/ell^n with D diagonal with prime-power entries, by full pivoting.

    Pivots are taken with least valuation first, so every other entry of the
    remaining block is divisible by the pivot and can be cleared exactly.
    """

    def __init__(self, A: np.ndarray, ell: int, n: int):
        N = ell ** n
        if N >= MAX_MODULUS:
            raise ScaleCap("coefficient modulus too large")
        self.ell, self.n, self.N = ell, n, N
        A = np.array(A, dtype=np.int64) % N
        m, c = A.shape
        self.shape = (m, c)
        P = np.eye(m, dtype=np.int64)
        Q = np.eye(c, dtype=np.int64)
        vals: List[int] = []
        pows = [ell ** v for v in range(n + 1)]
        t = 0
        v = 0  # the least valuation in the remaining block never decreases
        while t < min(m, c):
            hit = None
            while v < n:
                col = np.nonzero(A[t:, t] % pows[v + 1])[0]
                if len(col):
                    hit = (int(col[0]) + t, t)
                    break
                found = np.argwhere(A[t:, t:] % pows[v + 1] != 0)
                if len(found):
                    hit = (int(found[0][0]) + t, int(found[0][1]) + t)
                    break
                v += 1
            if hit is None:
                break
            i, j = hit
            if i != t:
                A[[t, i]] = A[[i, t]]
                P[[t, i]] = P[[i, t]]
            if j != t:
                A[:, [t, j]] = A[:, [j, t]]
                Q[:, [t, j]] = Q[:, [j, t]]
            piv = int(A[t, t])
            unit = pow(piv // pows[v], -1, N) if pows[v] < N else 1
            if unit != 1:
                A[t] = (A[t] * unit) % N
                P[t] = (P[t] * unit) % N
            below = A[t + 1:, t] // pows[v]
            nz = np.nonzero(below)[0]
            if len(nz):
                rows = nz + t + 1
                f = below[nz][:, None]
                A[rows, t:] = (A[rows, t:] - f * A[t, t:][None, :]) % N
                P[rows] = (P[rows] - f * P[t][None, :]) % N
            right = A[t, t + 1:] // pows[v]
            nzc = np.nonzero(right)[0]
            if len(nzc):
                cols = nzc + t + 1
                g = right[nzc][None, :]
                Q[:, cols] = (Q[:, cols] - Q[:, [t]] * g) % N
                A[t, cols] = 0
            vals.append(v)
            t += 1
        self.P, self.Q, self.vals = P, Q, vals

    @property
    def rank(self) -> int:
        return len(self.vals)

    def image_length(self) -> int:
        """log_ell of the order of the column space."""
        return sum(self.n - v for v in self.vals)

    def kernel_length(self) -> int:
        return self.n * self.shape[1] - self.image_length()

    def kernel(self) -> List[np.ndarray]:
        """Generators of the kernel as a Z/ell^n-module."""
        out = []
        for i, v in enumerate(self.vals):
            if v:
                out.append((self.Q[:, i] * self.ell ** (self.n - v)) % self.N)
        for i in range(len(self.vals), self.shape[1]):
            out.append(self.Q[:, i].copy())
        return out

    def solve(self, b: np.ndarray) -> Optional[np.ndarray]:
        """Some x with A x = b, or None."""
        X = self.solve_many(np.asarray(b).reshape(-1, 1))
        return None if X is None else X[:, 0]

    def solve_many(self, B: np.ndarray) -> Optional[np.ndarray]:
        """Columns x_j with A x_j = B[:, j]; None if some column is not in the image."""
        B = np.asarray(B, dtype=np.int64) % self.N
        C = (self.P @ B) % self.N
        r = self.rank
        if C[r:].any():
            return None
        Y = np.zeros((self.shape[1], B.shape[1]), dtype=np.int64)
        for i, v in enumerate(self.vals):
            p = self.ell ** v
            if (C[i] % p).any():
                return None
            Y[i] = C[i] // p
        return (self.Q @ Y) % self.N


# ---------------------------------------------------------------------------
# small exact subquotients


def _rational_inverse(M: List[List[int]]) -> List[List[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _int_inverse(M: List[List[int]]) -> List[List[int]]:
    out = _rational_inverse(M)
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def _matvec(M: List[List[int]], v: Sequence[int]) -> List[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def _lattice_basis(gens: List[List[int]], r: int) -> List[List[int]]:
    """Square basis (columns) of a full-rank lattice in Z^r given generating columns."""
    M = [[g[i] for g in gens] for i in range(r)]
    D, P, _ = smith_normal_form(M, 0, len(gens))
    Pinv = _int_inverse(P)
    return [[Pinv[i][j] * D[j][j] for j in range(r)] for i in range(r)]


class Subquotient:
    """H = ker(out) / im(inn) inside (Z/N)^r, N = ell^n, with canonical coordinates.

    ``out`` is a list of rows (a map from (Z/N)^r), ``inn`` a list of columns in
    (Z/N)^r. Over a field the coordinates are read at pivot positions of a
    reduced basis; otherwise H is decomposed by Smith form of integer lattices.
    """

    def __init__(self, ell: int, n: int, r: int, out: Sequence[Sequence[int]], inn: Sequence[Sequence[int]]):
        self.ell, self.n, self.N, self.r = ell, n, ell ** n, r
        self.out = [[int(x) % self.N for x in row] for row in out]
        inn = [[int(x) % self.N for x in col] for col in inn]
        if n == 1:
            self._field_setup(inn)
        else:
            self._ring_setup(inn)

    # field case
    def _rref(self, vecs):
        p = self.ell
        rows, piv = [], []
        for v in vecs:
            v = self._reduce_rows(list(v), rows, piv)
            c = next((i for i, x in enumerate(v) if x), None)
            if c is None:
                continue
            inv = pow(v[c], -1, p)
            v = [(x * inv) % p for x in v]
            for k, row in enumerate(rows):
                if row[c]:
                    f = row[c]
                    rows[k] = [(a - f * b) % p for a, b in zip(row, v)]
            rows.append(v)
            piv.append(c)
        order = sorted(range(len(piv)), key=lambda k: piv[k])
        return [rows[k] for k in order], [piv[k] for k in order]

    def _reduce_rows(self, v, rows, piv):
        p = self.ell
        for row, c in zip(rows, piv):
            if v[c]:
                f = v[c]
                v = [(a - f * b) % p for a, b in zip(v, row)]
        return v

    def _field_setup(self, inn):
        from .linalg import kernel
        from .coeffs import GF
        k = GF(self.ell)
        if self.out:
            zgens = [[int(x) for x in v] for v in kernel(k, self.out, self.r)]
        else:
            zgens = [[int(i == j) for i in range(self.r)] for j in range(self.r)]
        self._b_rows, self._b_piv = self._rref(inn)
        reduced = [self._reduce_rows(z, self._b_rows, self._b_piv) for z in zgens]
        self._h_rows, self._h_piv = self._rref(reduced)
        self.orders = [self.ell] * len(self._h_rows)
        self.generators = [list(r) for r in self._h_rows]

    # ring case
    def _ring_setup(self, inn):
        N, r = self.N, self.r
        if r == 0:
            self.orders, self.generators = [], []
            return
        if self.out:
            rows = len(self.out)
            big = [list(self.out[i]) + [(-N if i == j else 0) for j in range(rows)] for i in range(rows)]
            K = integer_kernel(big, r + rows)
            zgens = [[K[i][j] for i in range(r)] for j in range(len(K[0]) if K and K[0] else 0)]
            zgens += [[N if i == j else 0 for i in range(r)] for j in range(r)]
        else:
            zgens = [[int(i == j) for i in range(r)] for j in range(r)]
        rels = [list(c) for c in inn] + [[N if i == j else 0 for i in range(r)] for j in range(r)]
        self._decompose(zgens, rels)

    def _decompose(self, zgens, rels):
        """Smith decomposition of span(zgens) / span(rels), both full-rank lattices in Z^r."""
        N, r = self.N, self.r
        Zb = _lattice_basis(zgens, r)
        self._Zinv = _rational_inverse(Zb)
        rel_coords = [self._zcoords(c) for c in rels]
        M = [[rc[i] for rc in rel_coords] for i in range(r)]
        D, P, _ = smith_normal_form(M, 0, len(rels))
        self._P = P
        d = [abs(D[i][i]) if i < len(D[0]) else 0 for i in range(r)]
        Pinv = _int_inverse(P)
        self._keep = [i for i in range(r) if d[i] != 1]
        self.orders = [d[i] for i in self._keep]
        self.generators = [[sum(Zb[a][b] * Pinv[b][i] for b in range(r)) % N for a in range(r)] for i in self._keep]

    @classmethod
    def from_lattices(cls, ell: int, n: int, r: int, zgens: List[List[int]], rels: List[List[int]]) -> "Subquotient":
        """L / R for integer lattices R <= L in Z^r with ell^n Z^r <= R; generic (Smith) coordinates."""
        self = cls.__new__(cls)
        self.ell, self.n, self.N, self.r = ell, n, ell ** n, r
        self.out = []
        self._lattice = True
        if r == 0:
            self.orders, self.generators = [], []
        else:
            self._decompose(zgens, rels)
        return self

    def _zcoords(self, x: Sequence[int]) -> List[int]:
        c = [sum(row[j] * int(x[j]) for j in range(self.r)) for row in self._Zinv]
        if any(v.denominator != 1 for v in c):
            raise ValueError("vector is not a cocycle")
        return [int(v) for v in c]

    # interface
    @property
    def dimension(self) -> int:
        return len(self.orders)

    def is_cocycle(self, x: Sequence[int]) -> bool:
        return all(sum(a * int(b) for a, b in zip(row, x)) % self.N == 0 for row in self.out)

    def coords(self, x: Sequence[int]) -> Tuple[int, ...]:
        if not self.r:
            return ()
        if self.n == 1 and not getattr(self, "_lattice", False):
            v = self._reduce_rows([int(a) % self.N for a in x], self._b_rows, self._b_piv)
            return tuple(v[c] for c in self._h_piv)
        c = self._zcoords([int(a) % self.N for a in x])
        y = _matvec(self._P, c)
        return tuple(y[i] % o for i, o in zip(self._keep, self.orders))

    def lift(self, coords: Sequence[int]) -> List[int]:
        out = [0] * self.r
        for c, g in zip(coords, self.generators):
            if c:
                out = [(a + c * b) % self.N for a, b in zip(out, g)]
        return out

