"""Independent brute-force oracles used to check the library. Nothing here imports
the algorithms under test; only the plain polynomial container is shared."""
from __future__ import annotations

from itertools import combinations, product
from math import gcd
from typing import Dict, List, Sequence, Tuple


def det_cofactor(M: List[List[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        if M[0][j]:
            minor = [row[:j] + row[j + 1:] for row in M[1:]]
            total += (-1) ** j * M[0][j] * det_cofactor(minor)
    return total


def determinantal_divisors(M: List[List[int]]) -> List[int]:
    """d_k = gcd of all k x k minors; invariant factors are d_k / d_{k-1}."""
    rows = len(M)
    cols = len(M[0]) if M else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, det_cofactor([[M[r][c] for c in cs] for r in rs]))
        out.append(g)
    return out


def invariant_factors_oracle(M: List[List[int]]) -> List[int]:
    dd = determinantal_divisors(M)
    out, prev = [], 1
    for d in dd:
        if d == 0:
            break
        out.append(d // prev)
        prev = d
    return out


# ---------------------------------------------------------------------------
# linear algebra mod p, written independently of the package


def rank_mod_p(rows: List[List[int]], p: int) -> int:
    M = [[x % p for x in r] for r in rows]
    rk, ncols = 0, (len(M[0]) if M else 0)
    for c in range(ncols):
        piv = next((i for i in range(rk, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        inv = pow(M[rk][c], -1, p)
        M[rk] = [(x * inv) % p for x in M[rk]]
        for i in range(len(M)):
            if i != rk and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rk])]
        rk += 1
    return rk


def monomials_upto(nvars: int, deg: int) -> List[Tuple[int, ...]]:
    out = []
    for e in product(range(deg + 1), repeat=nvars):
        if sum(e) <= deg:
            out.append(e)
    out.sort(key=lambda e: (sum(e), e))
    return out


def poly_dict_mul(a: Dict, b: Dict, p: int) -> Dict:
    out: Dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = (out.get(e, 0) + c1 * c2) % p
    return {e: c for e, c in out.items() if c}


def in_ideal_truncated(target: Dict, gens: Sequence[Dict], nvars: int, mult_deg: int, p: int) -> bool:
    """Is target = sum c_i * g_i with deg c_i <= mult_deg? (Macaulay-matrix test mod p)."""
    monos = monomials_upto(nvars, mult_deg)
    vecs = []
    for g in gens:
        for m in monos:
            vecs.append(poly_dict_mul(g, {m: 1}, p))
    keys = sorted({e for v in vecs for e in v} | set(target))
    idx = {e: i for i, e in enumerate(keys)}

    def row(v):
        r = [0] * len(keys)
        for e, c in v.items():
            r[idx[e]] = c % p
        return r

    A = [row(v) for v in vecs]
    return rank_mod_p(A, p) == rank_mod_p(A + [row(target)], p)


# ---------------------------------------------------------------------------
# second cotangent homology for a graded quotient k[x_1..x_n]/(f_1..f_m)


def graded_syzygy_space(gens: Sequence[Dict], gdeg: Sequence[int], nvars: int, d: int, p: int):
    """Basis of { (a_1..a_m) : sum a_i f_i = 0, a_i homogeneous of degree d - deg f_i } mod p.

    Returned as a list of coefficient vectors over the concatenated monomial bases.
    """
    blocks = []
    for gd in gdeg:
        k = d - gd
        blocks.append([e for e in monomials_upto(nvars, max(k, 0)) if sum(e) == k] if k >= 0 else [])
    cols = []
    for i, g in enumerate(gens):
        for m in blocks[i]:
            cols.append(poly_dict_mul(g, {m: 1}, p))
    keys = sorted({e for v in cols for e in v})
    idx = {e: i for i, e in enumerate(keys)}
    A = [[0] * len(cols) for _ in keys]
    for j, v in enumerate(cols):
        for e, c in v.items():
            A[idx[e]][j] = c
    return _nullspace_mod_p(A, len(cols), p), blocks


def _nullspace_mod_p(A: List[List[int]], ncols: int, p: int) -> List[List[int]]:
    M = [[x % p for x in r] for r in A]
    piv_cols = []
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        inv = pow(M[rk][c], -1, p)
        M[rk] = [(x * inv) % p for x in M[rk]]
        for i in range(len(M)):
            if i != rk and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rk])]
        piv_cols.append(c)
        rk += 1
    basis = []
    for f in range(ncols):
        if f in piv_cols:
            continue
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(piv_cols):
            v[pc] = (-M[i][f]) % p
        basis.append(v)
    return basis


def d2_residue_field_dimension(gens: Sequence[Dict], nvars: int, p: int, max_deg: int) -> int:
    """dim_k D_2(B/k; k) for B = k[x]/(f) graded with f in m^2, brute force by degree.

    In each internal degree d, count syzygies modulo (Koszul syzygies + m * syzygies);
    when every f lies in m^2 this is the dimension of the second cotangent homology
    at the origin. Both subspaces are spanned explicitly and compared by rank.
    """
    gdeg = [max(sum(e) for e in g) for g in gens]
    m = len(gens)
    total = 0
    for d in range(min(gdeg), max_deg + 1):
        syz, blocks = graded_syzygy_space(gens, gdeg, nvars, d, p)
        if not syz:
            continue
        offsets, off = [], 0
        for b in blocks:
            offsets.append(off)
            off += len(b)
        width = off

        def embed(vec_polys):
            v = [0] * width
            for i, poly in enumerate(vec_polys):
                for e, c in poly.items():
                    if sum(e) != d - gdeg[i]:
                        continue
                    v[offsets[i] + blocks[i].index(e)] = (v[offsets[i] + blocks[i].index(e)] + c) % p
            return v

        sub = []
        # Koszul syzygies f_j e_i - f_i e_j multiplied by monomials of the right degree
        for i in range(m):
            for j in range(i + 1, m):
                k = d - gdeg[i] - gdeg[j]
                if k < 0:
                    continue
                for mono in [e for e in monomials_upto(nvars, k) if sum(e) == k]:
                    vp = [dict() for _ in range(m)]
                    vp[i] = poly_dict_mul(gens[j], {mono: 1}, p)
                    vp[j] = {e: (-c) % p for e, c in poly_dict_mul(gens[i], {mono: 1}, p).items()}
                    sub.append(embed(vp))
        # m * (syzygies of degree d-1)
        if d - 1 >= min(gdeg):
            syz_prev, blocks_prev = graded_syzygy_space(gens, gdeg, nvars, d - 1, p)
            offs_prev, o = [], 0
            for b in blocks_prev:
                offs_prev.append(o)
                o += len(b)
            for s in syz_prev:
                vp = [dict() for _ in range(m)]
                for i in range(m):
                    for t, e in enumerate(blocks_prev[i]):
                        c = s[offs_prev[i] + t]
                        if c:
                            vp[i][e] = c
                for var in range(nvars):
                    mono = tuple(1 if q == var else 0 for q in range(nvars))
                    sub.append(embed([poly_dict_mul(vp[i], {mono: 1}, p) for i in range(m)]))
        r_sub = rank_mod_p(sub, p) if sub else 0
        r_all = rank_mod_p(sub + syz, p)
        total += r_all - r_sub
    return total


# ---------------------------------------------------------------------------
# finite groups: inhomogeneous bar cochains, homomorphism counts, cosets


def hom_count_cyclic(m: int, N: int) -> int:
    """Number of homomorphisms Z/m -> Z/N, by trying every image of the generator."""
    return sum(1 for a in range(N) if (m * a) % N == 0)


def bar_cohomology_dims(table: List[List[int]], p: int, top: int) -> List[int]:
    """dim H^k(G; F_p) for k <= top from the inhomogeneous bar cochains (functions G^k -> F_p)."""
    n = len(table)
    e = next(i for i in range(n) if all(table[i][x] == x for x in range(n)))

    def coboundary(k):
        # (df)(g_1..g_{k+1}) = f(g_2..) + sum (-1)^i f(..g_i g_{i+1}..) + (-1)^{k+1} f(g_1..g_k)
        src = {t: i for i, t in enumerate(product(range(n), repeat=k))}
        rows = []
        for g in product(range(n), repeat=k + 1):
            row = [0] * len(src)
            row[src[g[1:]]] += 1
            for i in range(k):
                merged = g[:i] + (table[g[i]][g[i + 1]],) + g[i + 2:]
                row[src[merged]] += (-1) ** (i + 1)
            row[src[g[:k]]] += (-1) ** (k + 1)
            rows.append([x % p for x in row])
        return rows

    ranks = [rank_mod_p(coboundary(k), p) for k in range(top + 1)]
    assert e is not None
    return [n ** k - ranks[k] - (ranks[k - 1] if k else 0) for k in range(top + 1)]


def _val(x, p: int) -> int:
    from fractions import Fraction
    x = Fraction(x)
    if x == 0:
        return 10 ** 9
    v, a, b = 0, x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def pgl2_distance(M, p: int) -> int:
    """Double coset of a 2x2 matrix over Q_p in PGL_2: v(det) - 2 min v(entries)."""
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    return _val(det, p) - 2 * min(_val(x, p) for r in M for x in r)


def classical_satake(a: int, mu: int, q: int, ell: int) -> int:
    """Unnormalized Satake transform of the basic function of the a-th double coset of PGL_2(Q_q),
    evaluated at diag(q^mu, 1), by counting cosets x in Q_q/Z_q, reduced mod ell."""
    from fractions import Fraction
    k = (a + abs(mu)) // 2 + 1
    count = 0
    for j in range(q ** k):
        x = Fraction(j, q ** k)
        t = Fraction(q) ** mu
        M = [[t, t * x], [0, 1]]
        if pgl2_distance(M, q) == a:
            count += 1
    return count % ell


def classical_hecke_action(table: List[List[int]], K: Sequence[int], rho: Sequence[List[List[int]]],
                           g: int, m: Sequence[int], N: int) -> List[int]:
    """m . T_{KgK} = sum over cosets xK in KgK/K of x.m, for m fixed by K; rho gives the action matrices."""
    Ks = set(K)
    double = {table[table[k1][g]][k2] for k1 in Ks for k2 in Ks}
    reps, seen = [], set()
    for x in sorted(double):
        coset = frozenset(table[x][k] for k in Ks)
        if coset not in seen:
            seen.add(coset)
            reps.append(x)
    out = [0] * len(m)
    for x in reps:
        for i, row in enumerate(rho[x]):
            out[i] = (out[i] + sum(a * b for a, b in zip(row, m))) % N
    return out
