"""Dense exact linear algebra over a CoefficientRing.

Matrices are lists of rows. Field routines use Gaussian elimination; the
Z and Z/m routines go through Smith normal form.
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .coeffs import CoefficientRing
from .snf import integer_kernel, smith_normal_form, diagonal

Matrix = List[List[object]]


def zeros(R: CoefficientRing, r: int, c: int) -> Matrix:
    return [[R.zero] * c for _ in range(r)]


def eye(R: CoefficientRing, n: int) -> Matrix:
    return [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]


def shape(A: Matrix, ncols: Optional[int] = None) -> Tuple[int, int]:
    return len(A), (len(A[0]) if A else (ncols or 0))


def mat_mul(R: CoefficientRing, A: Matrix, B: Matrix, inner: Optional[int] = None, ncols: Optional[int] = None) -> Matrix:
    if not A:
        return []
    n = len(B[0]) if B else (ncols or 0)
    out = []
    for row in A:
        new = [R.zero] * n
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(n):
                    b = bk[j]
                    if b:
                        new[j] = R.add(new[j], R.mul(a, b))
        out.append(new)
    return out


def mat_vec(R: CoefficientRing, A: Matrix, v: Sequence) -> List:
    return [_dot(R, row, v) for row in A]


def _dot(R, row, v):
    s = R.zero
    for a, b in zip(row, v):
        if a and b:
            s = R.add(s, R.mul(a, b))
    return s


def mat_add(R: CoefficientRing, A: Matrix, B: Matrix) -> Matrix:
    return [[R.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(R: CoefficientRing, A: Matrix, c) -> Matrix:
    return [[R.mul(a, c) for a in row] for row in A]


def transpose(A: Matrix, ncols: Optional[int] = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def is_zero(A: Matrix) -> bool:
    return all(not a for row in A for a in row)


def block_diag(R, blocks: Sequence[Matrix], shapes: Sequence[Tuple[int, int]]) -> Matrix:
    rows = sum(s[0] for s in shapes)
    cols = sum(s[1] for s in shapes)
    out = zeros(R, rows, cols)
    r0 = c0 = 0
    for B, (r, c) in zip(blocks, shapes):
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = B[i][j]
        r0 += r
        c0 += c
    return out


# ----------------------------------------------------------------------------
# fields


def rref(R: CoefficientRing, A: Matrix, ncols: Optional[int] = None) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    R.require_field("row reduction")
    M = [list(r) for r in A]
    rows, cols = shape(M, ncols)
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = R.inv(M[r][c])
        M[r] = [R.mul(x, inv) for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(R: CoefficientRing, A: Matrix, ncols: Optional[int] = None) -> int:
    if not A:
        return 0
    if R.is_field:
        return len(rref(R, A, ncols)[1])
    D, _, _ = smith_normal_form([[int(x) for x in row] for row in A], R.modulus)
    return sum(1 for d in diagonal(D) if d)


def kernel(R: CoefficientRing, A: Matrix, ncols: int) -> Matrix:
    """Basis of the right kernel as columns (returned as a list of column vectors).

    The basis is the canonical one read off the RREF: one vector per free column,
    with a 1 in that column.
    """
    rows = len(A)
    if rows == 0:
        return [[R.one if i == j else R.zero for i in range(ncols)] for j in range(ncols)]
    M, piv = rref(R, A, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [R.zero] * ncols
        v[f] = R.one
        for i, pc in enumerate(piv):
            v[pc] = R.neg(M[i][f])
        basis.append(v)
    return basis


def canonical_span(R: CoefficientRing, vectors: Sequence[Sequence], dim: int) -> List[List]:
    """RREF basis of the span of the given vectors (rows)."""
    if not vectors:
        return []
    M, piv = rref(R, [list(v) for v in vectors], dim)
    return [M[i] for i in range(len(piv))]


def solve(R: CoefficientRing, A: Matrix, b: Sequence, ncols: int) -> Optional[List]:
    """Some x with A x = b over a field, or None."""
    rows = len(A)
    if rows == 0:
        return [R.zero] * ncols
    aug = [list(A[i]) + [b[i]] for i in range(rows)]
    M, piv = rref(R, aug, ncols + 1)
    if ncols in piv:
        return None
    x = [R.zero] * ncols
    for i, pc in enumerate(piv):
        x[pc] = M[i][ncols]
    return x


def solve_many(R: CoefficientRing, A: Matrix, B_cols: Sequence[Sequence], ncols: int) -> Optional[List[List]]:
    out = []
    for b in B_cols:
        x = solve(R, A, b, ncols)
        if x is None:
            return None
        out.append(x)
    return out


def inverse(R: CoefficientRing, A: Matrix) -> Matrix:
    n = len(A)
    aug = [list(A[i]) + [R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    M, piv = rref(R, aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in M]


# ----------------------------------------------------------------------------
# Z and Z/m


def int_matrix(A: Matrix) -> List[List[int]]:
    return [[int(x) for x in row] for row in A]


def finite_quotient_invariants(gens: List[List[int]], rels: List[List[int]], dim: int, modulus: int) -> List[int]:
    """Invariant factors of (span(gens) + m Z^n) / (span(rels) + m Z^n), gens and rels as columns.

    Returned factors include 0 for free Z-summands when modulus == 0.
    """
    k = len(gens)
    if k == 0:
        return []
    # c in Z^k is a relation iff G c = Rl a + m b for integers a, b
    cols = [list(g) for g in gens] + [[-x for x in r] for r in rels]
    if modulus:
        for i in range(dim):
            e = [0] * dim
            e[i] = -modulus
            cols.append(e)
    big = [[cols[j][i] for j in range(len(cols))] for i in range(dim)]
    K = integer_kernel(big, len(cols))
    rel_lattice = [[K[i][j] for j in range(len(K[0]) if K else 0)] for i in range(k)]  # k x (#kernel vectors)
    nrel = len(rel_lattice[0]) if rel_lattice and rel_lattice[0] else 0
    if nrel == 0:
        return [0] * k
    D, _, _ = smith_normal_form(rel_lattice, 0, nrel)
    d = diagonal(D)
    factors = [abs(x) for x in d] + [0] * (k - len(d))
    return [f for f in factors if f != 1]


def z_kernel_columns(A: Matrix, ncols: int, modulus: int = 0) -> List[List[int]]:
    """Generators (columns) of the kernel of A over Z or over Z/m (lifted to Z)."""
    A = int_matrix(A)
    if modulus == 0:
        K = integer_kernel(A, ncols)
        return [[K[i][j] for i in range(ncols)] for j in range(len(K[0]) if K and K[0] else 0)]
    # x in ker over Z/m iff A x = m y for some integer y
    rows = len(A)
    if rows == 0:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    big = [list(A[i]) + [(-modulus if i == j else 0) for j in range(rows)] for i in range(rows)]
    K = integer_kernel(big, ncols + rows)
    nk = len(K[0]) if K and K[0] else 0
    out = [[K[i][j] % modulus for i in range(ncols)] for j in range(nk)]
    return [v for v in out if any(v)]
