"""The simplex category, truncated simplicial modules and the Dold-Kan correspondence.

A simplicial module is stored levelwise as free modules X_0..X_N with face maps
d_i: X_n -> X_{n-1} and degeneracies s_i: X_n -> X_{n+1}, all as matrices whose
columns index the source basis.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg as la
from .chains import ChainComplex, HomologyReport, homology
from .coeffs import CoefficientRing, QQ
from .errors import NegativeDegrees, NonFieldCoefficients, SimplicialIdentityError
from .qring import QuotientRing, kernel_generators

Matrix = List[List]


# ----------------------------------------------------------------------------
# the simplex category


@dataclass(frozen=True)
class SimplexMap:
    """Order-preserving map [source] -> [target], given by its values."""

    source: int
    target: int
    values: Tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.source + 1:
            raise ValueError(f"need {self.source + 1} values, got {len(vals)}")
        if any(v < 0 or v > self.target for v in vals):
            raise ValueError("value out of range")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError("simplex maps are order preserving")

    @classmethod
    def identity(cls, n: int) -> "SimplexMap":
        return cls(n, n, tuple(range(n + 1)))

    @classmethod
    def coface(cls, n: int, i: int) -> "SimplexMap":
        """delta_i: [n-1] -> [n], skipping i."""
        return cls(n - 1, n, tuple(j if j < i else j + 1 for j in range(n)))

    @classmethod
    def codegeneracy(cls, n: int, i: int) -> "SimplexMap":
        """sigma_i: [n+1] -> [n], hitting i twice."""
        return cls(n + 1, n, tuple(j if j <= i else j - 1 for j in range(n + 2)))

    def __call__(self, j: int) -> int:
        return self.values[j]

    def compose(self, other: "SimplexMap") -> "SimplexMap":
        """self o other."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return SimplexMap(other.source, self.target, tuple(self.values[v] for v in other.values))

    __matmul__ = compose

    @property
    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.target + 1))

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    @property
    def is_identity(self) -> bool:
        return self.source == self.target and self.values == tuple(range(self.source + 1))


def factorize(f: SimplexMap) -> Tuple[SimplexMap, SimplexMap]:
    """The unique (epi, mono) with f = mono o epi."""
    img = sorted(set(f.values))
    pos = {v: i for i, v in enumerate(img)}
    k = len(img) - 1
    epi = SimplexMap(f.source, k, tuple(pos[v] for v in f.values))
    mono = SimplexMap(k, f.target, tuple(img))
    return epi, mono


def elementary_word(f: SimplexMap) -> List[Tuple[str, int]]:
    """f as cofaces after codegeneracies; the list is in order of application.

    ('s', j) stands for sigma_j and ('d', i) for delta_i.
    """
    epi, mono = factorize(f)
    word: List[Tuple[str, int]] = []
    g = epi
    # peel sigma_j with the smallest repeated position first
    while not g.is_identity:
        j = next(j for j in range(g.source) if g.values[j] == g.values[j + 1])
        word.append(("s", j))
        g = SimplexMap(g.source - 1, g.target, g.values[:j + 1] + g.values[j + 2:])
    tail: List[Tuple[str, int]] = []
    h = mono
    while not h.is_identity:
        i = max(set(range(h.target + 1)) - set(h.values))
        tail.append(("d", i))
        h = SimplexMap(h.source, h.target - 1, tuple(v if v < i else v - 1 for v in h.values))
    # mono = delta_{i_1} o delta_{i_2} o ... with i_1 the largest: apply the smallest first
    word.extend(reversed(tail))
    return word


def compose_word(word: Sequence[Tuple[str, int]], source: int) -> SimplexMap:
    f = SimplexMap.identity(source)
    for kind, i in word:
        if kind == "s":
            g = SimplexMap.codegeneracy(f.target - 1, i)
        else:
            g = SimplexMap.coface(f.target + 1, i)
        f = g.compose(f)
    return f


@lru_cache(maxsize=None)
def surjections(n: int, k: Optional[int] = None) -> Tuple[SimplexMap, ...]:
    """Surjections [n] -> [k] (all k when k is None) in lexicographic order of values."""
    out = []

    def rec(prefix: List[int]):
        if len(prefix) == n + 1:
            out.append(tuple(prefix))
            return
        last = prefix[-1]
        rec(prefix + [last])
        rec(prefix + [last + 1])

    rec([0])
    maps = [SimplexMap(n, v[-1], v) for v in sorted(out)]
    if k is not None:
        maps = [m for m in maps if m.target == k]
    return tuple(maps)


# ----------------------------------------------------------------------------
# truncated simplicial modules


def _mm(R: CoefficientRing, A: Matrix, B: Matrix, inner: int, ncols: int) -> Matrix:
    """Sparse-aware product over a coefficient ring."""
    out = [[R.zero] * ncols for _ in range(len(A))]
    Bnz = [[(j, b) for j, b in enumerate(row) if b] for row in B]
    for i, row in enumerate(A):
        acc = out[i]
        for k, a in enumerate(row):
            if not a:
                continue
            for j, b in Bnz[k]:
                acc[j] += a * b
        out[i] = [R(x) for x in acc]
    return out


def _eq(R: CoefficientRing, A: Matrix, B: Matrix) -> bool:
    return all(R(a) == R(b) for ra, rb in zip(A, B) for a, b in zip(ra, rb)) and len(A) == len(B)


@dataclass
class TruncatedSimplicialModule:
    """Levels X_0..X_N of a simplicial module over a coefficient ring.

    faces[(n, i)] is d_i: X_n -> X_{n-1} (ranks[n-1] x ranks[n]);
    degens[(n, i)] is s_i: X_n -> X_{n+1} (ranks[n+1] x ranks[n]).
    """

    over: CoefficientRing
    N: int
    ranks: List[int]
    faces: Dict[Tuple[int, int], Matrix]
    degens: Dict[Tuple[int, int], Matrix]
    verify: bool = True

    def __post_init__(self):
        if len(self.ranks) != self.N + 1:
            raise SimplicialIdentityError(f"need {self.N + 1} levels, got {len(self.ranks)}")
        R = self.over
        for n in range(1, self.N + 1):
            for i in range(n + 1):
                self.faces[(n, i)] = self._shaped(self.faces.get((n, i)), self.ranks[n - 1], self.ranks[n], f"d_{i} on X_{n}")
        for n in range(0, self.N):
            for i in range(n + 1):
                self.degens[(n, i)] = self._shaped(self.degens.get((n, i)), self.ranks[n + 1], self.ranks[n], f"s_{i} on X_{n}")
        if self.verify:
            self.check_identities()

    def _shaped(self, M, r, c, what):
        R = self.over
        if M is None:
            if r and c:
                raise SimplicialIdentityError(f"missing {what}")
            return [[R.zero] * c for _ in range(r)]
        if len(M) != r or any(len(row) != c for row in M):
            raise SimplicialIdentityError(f"{what} should be {r}x{c}")
        return [[R(x) for x in row] for row in M]

    def d(self, n: int, i: int) -> Matrix:
        return self.faces[(n, i)]

    def s(self, n: int, i: int) -> Matrix:
        return self.degens[(n, i)]

    def check_identities(self) -> None:
        R, N, rk = self.over, self.N, self.ranks

        def mm(A, B, inner, ncols):
            return _mm(R, A, B, inner, ncols)

        def fail(msg):
            raise SimplicialIdentityError(msg)

        # d_i d_j = d_{j-1} d_i  (i < j) on X_n
        for n in range(2, N + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = mm(self.d(n - 1, i), self.d(n, j), rk[n - 1], rk[n])
                    rhs = mm(self.d(n - 1, j - 1), self.d(n, i), rk[n - 1], rk[n])
                    if not _eq(R, lhs, rhs):
                        fail(f"d_{i} d_{j} != d_{j - 1} d_{i} on X_{n}")
        # relations between faces and degeneracies on X_n (s_j: X_n -> X_{n+1})
        ident = {n: la.eye(R, rk[n]) for n in range(N + 1)}
        for n in range(0, N):
            for j in range(n + 1):
                sj = self.s(n, j)
                for i in range(n + 2):
                    lhs = mm(self.d(n + 1, i), sj, rk[n + 1], rk[n])
                    if i < j:
                        rhs = mm(self.s(n - 1, j - 1), self.d(n, i), rk[n - 1], rk[n]) if n >= 1 else None
                    elif i in (j, j + 1):
                        rhs = ident[n]
                    else:
                        rhs = mm(self.s(n - 1, j), self.d(n, i - 1), rk[n - 1], rk[n]) if n >= 1 else None
                    if rhs is not None and not _eq(R, lhs, rhs):
                        fail(f"d_{i} s_{j} identity fails on X_{n}")
        # s_i s_j = s_{j+1} s_i  (i <= j) on X_n
        for n in range(0, N - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = mm(self.s(n + 1, i), self.s(n, j), rk[n + 1], rk[n])
                    rhs = mm(self.s(n + 1, j + 1), self.s(n, i), rk[n + 1], rk[n])
                    if not _eq(R, lhs, rhs):
                        fail(f"s_{i} s_{j} != s_{j + 1} s_{i} on X_{n}")

    def to_json(self) -> Dict:
        def m(M):
            return [[str(x) for x in row] for row in M]

        return {
            "over": str(self.over),
            "N": self.N,
            "ranks": list(self.ranks),
            "d": [[m(self.d(n, i)) for i in range(n + 1)] for n in range(1, self.N + 1)],
            "s": [[m(self.s(n, i)) for i in range(n + 1)] for n in range(0, self.N)],
        }

    @classmethod
    def from_json(cls, data: Dict, over: CoefficientRing) -> "TruncatedSimplicialModule":
        N = int(data["N"])
        faces = {(n, i): [[over.parse_element(x) for x in row] for row in data["d"][n - 1][i]]
                 for n in range(1, N + 1) for i in range(n + 1)}
        degens = {(n, i): [[over.parse_element(x) for x in row] for row in data["s"][n][i]]
                  for n in range(0, N) for i in range(n + 1)}
        return cls(over, N, [int(r) for r in data["ranks"]], faces, degens)


def constant(R: CoefficientRing, rank: int, N: int) -> TruncatedSimplicialModule:
    """The constant simplicial module: every face and degeneracy is the identity."""
    I = la.eye(R, rank)
    faces = {(n, i): [list(r) for r in I] for n in range(1, N + 1) for i in range(n + 1)}
    degens = {(n, i): [list(r) for r in I] for n in range(N) for i in range(n + 1)}
    return TruncatedSimplicialModule(R, N, [rank] * (N + 1), faces, degens)


def zero_module(R: CoefficientRing, N: int) -> TruncatedSimplicialModule:
    return TruncatedSimplicialModule(R, N, [0] * (N + 1), {}, {})


# ----------------------------------------------------------------------------
# Moore and normalized complexes


def moore_complex(X: TruncatedSimplicialModule) -> ChainComplex:
    """C_n = X_n with boundary sum (-1)^i d_i."""
    R = X.over
    bd = {}
    for n in range(1, X.N + 1):
        M = [[R.zero] * X.ranks[n] for _ in range(X.ranks[n - 1])]
        for i in range(n + 1):
            D = X.d(n, i)
            for a in range(X.ranks[n - 1]):
                for b in range(X.ranks[n]):
                    if D[a][b]:
                        M[a][b] = R.add(M[a][b], D[a][b] if i % 2 == 0 else R.neg(D[a][b]))
        bd[n] = M
    return ChainComplex(R, 0, list(X.ranks), bd)


def _kernel_basis(R, A: Matrix, ncols: int) -> List[List]:
    if ncols == 0:
        return []
    if not A:
        return [[R.one if i == j else R.zero for i in range(ncols)] for j in range(ncols)]
    if isinstance(R, QuotientRing):
        return _coordinate_kernel(R, A, ncols)
    if R.is_field:
        return la.kernel(R, A, ncols)
    if R.kind == "Z":
        return la.z_kernel_columns(A, ncols, 0)
    raise NonFieldCoefficients(f"normalized complex needs a field, Z or a polynomial ring, got {R}")


def _coordinate_kernel(R: QuotientRing, A: Matrix, ncols: int) -> List[List]:
    """Over a polynomial ring only kernels spanned by coordinate vectors are handled."""
    gens = kernel_generators(R, A, len(A), ncols)
    coords = set()
    for g in gens:
        nz = [j for j, p in enumerate(g) if not p.is_zero()]
        if len(nz) != 1 or not g[nz[0]].is_constant():
            raise NonFieldCoefficients("normalized kernel is not a coordinate submodule")
        coords.add(nz[0])
    return [[R.one if i == j else R.zero for i in range(ncols)] for j in sorted(coords)]


def _coordinates(R, basis: List[List], v: List, dim: int) -> List:
    """Coordinates of v in a basis of a saturated (or field) subspace."""
    if not basis:
        return []
    if isinstance(R, QuotientRing):
        pos = [next(i for i, p in enumerate(b) if not p.is_zero()) for b in basis]
        if any(not v[i].is_zero() for i in range(dim) if i not in pos):
            raise SimplicialIdentityError("face map does not preserve the normalized subcomplex")
        return [v[i] for i in pos]
    cols = [[b[i] for b in basis] for i in range(dim)]
    if R.is_field:
        sol = la.solve(R, cols, v, len(basis))
    else:
        sol = la.solve(QQ, cols, [QQ(x) for x in v], len(basis))
        if sol is not None:
            if any(x.denominator != 1 for x in sol):
                raise SimplicialIdentityError("normalized boundary left the integer lattice")
            sol = [int(x) for x in sol]
    if sol is None:
        raise SimplicialIdentityError("face map does not preserve the normalized subcomplex")
    return sol


def normalized_basis(X: TruncatedSimplicialModule, n: int) -> List[List]:
    """Basis vectors of NM_n = intersection of ker d_i for i < n."""
    R = X.over
    if n == 0:
        return [[R.one if i == j else R.zero for i in range(X.ranks[0])] for j in range(X.ranks[0])]
    stacked = []
    for i in range(n):
        stacked.extend(X.d(n, i))
    return _kernel_basis(R, stacked, X.ranks[n])


def normalized_complex(X: TruncatedSimplicialModule) -> ChainComplex:
    """NM_n with differential (-1)^n d_n, in the canonical kernel bases."""
    R = X.over
    bases = [normalized_basis(X, n) for n in range(X.N + 1)]
    bd = {}
    for n in range(1, X.N + 1):
        D = X.d(n, n)
        cols = []
        for v in bases[n]:
            img = la.mat_vec(R, D, v) if X.ranks[n - 1] else []
            if n % 2:
                img = [R.neg(x) for x in img]
            cols.append(_coordinates(R, bases[n - 1], img, X.ranks[n - 1]))
        bd[n] = [[c[a] for c in cols] for a in range(len(bases[n - 1]))]
    return ChainComplex(R, 0, [len(b) for b in bases], bd)


def degenerate_rank(X: TruncatedSimplicialModule, n: int) -> int:
    """Rank of DM_n, the span of the images of all degeneracies into X_n."""
    if n == 0:
        return 0
    R = X.over
    vecs = []
    for i in range(n):
        S = X.s(n - 1, i)
        vecs.extend([[S[a][b] for a in range(X.ranks[n])] for b in range(X.ranks[n - 1])])
    if not vecs:
        return 0
    return la.rank(R, vecs, X.ranks[n])


def homotopy_groups(X: TruncatedSimplicialModule) -> List[HomologyReport]:
    """pi_i = H_i(NM) for i <= N; the top degree is flagged unreliable under truncation."""
    C = normalized_complex(X)
    out = []
    for i in range(X.N + 1):
        h = homology(C, i)
        if i == X.N:
            h = HomologyReport(h.degree, h.free_rank, h.torsion, h.dimension, h.zero, h.presentation, False)
        out.append(h)
    return out


# ----------------------------------------------------------------------------
# Dold-Kan


def _theta_star(C: ChainComplex, theta: SimplexMap, src_level: List[SimplexMap], tgt_level: List[SimplexMap],
                offsets_src: List[int], offsets_tgt: Dict[SimplexMap, int], ranks_src: int, ranks_tgt: int) -> Matrix:
    """Matrix of theta^*: Gamma(C)_n -> Gamma(C)_m for theta: [m] -> [n]."""
    R = C.over
    M = [[R.zero] * ranks_src for _ in range(ranks_tgt)]
    for t, off in zip(src_level, offsets_src):
        k = t.target
        ck = C.rank(k)
        if ck == 0:
            continue
        epi, mono = factorize(t.compose(theta))
        if mono.is_identity:
            toff = offsets_tgt[epi]
            for a in range(ck):
                M[toff + a][off + a] = R.one
        elif mono.source == k - 1 and mono == SimplexMap.coface(k, k) and C.rank(k - 1):
            toff = offsets_tgt[epi]
            D = C.d(k)
            sign = -1 if k % 2 else 1
            for a in range(C.rank(k - 1)):
                for b in range(ck):
                    if D[a][b]:
                        M[toff + a][off + b] = R(sign * D[a][b])
    return M


def dold_kan_realize(C: ChainComplex, N: int = 4) -> TruncatedSimplicialModule:
    """Gamma(C) truncated at N: level n is the sum over surjections [n] -> [k] of C_k."""
    if C.lo < 0 and any(C.rank(n) for n in range(C.lo, 0)):
        raise NegativeDegrees("Dold-Kan needs a nonnegatively graded complex")
    R = C.over
    levels, offsets, index, ranks = [], [], [], []
    for n in range(N + 1):
        surj = [t for t in surjections(n) if C.rank(t.target)]
        off, offs, idx = 0, [], {}
        for t in surj:
            offs.append(off)
            idx[t] = off
            off += C.rank(t.target)
        levels.append(surj)
        offsets.append(offs)
        index.append(idx)
        ranks.append(off)
    faces, degens = {}, {}
    for n in range(1, N + 1):
        for i in range(n + 1):
            faces[(n, i)] = _theta_star(C, SimplexMap.coface(n, i), levels[n], levels[n - 1], offsets[n], index[n - 1],
                                        ranks[n], ranks[n - 1])
    for n in range(N):
        for i in range(n + 1):
            degens[(n, i)] = _theta_star(C, SimplexMap.codegeneracy(n, i), levels[n], levels[n + 1], offsets[n],
                                         index[n + 1], ranks[n], ranks[n + 1])
    return TruncatedSimplicialModule(R, N, ranks, faces, degens)


def chain_complexes_equal(C: ChainComplex, D: ChainComplex) -> bool:
    """Exact equality of ranks and boundary matrices on the common range."""
    R = C.over
    lo, hi = min(C.lo, D.lo), max(C.hi, D.hi)
    for n in range(lo, hi + 1):
        if C.rank(n) != D.rank(n):
            return False
    for n in range(lo + 1, hi + 1):
        if not _eq(R, C.d(n), D.d(n)):
            return False
    return True


# ----------------------------------------------------------------------------
# random inputs


def random_chain_complex(rng: random.Random, R: CoefficientRing, top: int, max_rank: int = 3) -> ChainComplex:
    """A random complex C_0..C_top over a finite field with d_n = (kernel basis of d_{n-1}) * random."""
    R.require_field()
    p = R.order
    ranks = [rng.randint(0, max_rank) for _ in range(top + 1)]
    bd: Dict[int, Matrix] = {}
    for n in range(1, top + 1):
        rows, cols = ranks[n - 1], ranks[n]
        if n == 1:
            K = la.eye(R, rows)
        else:
            kv = la.kernel(R, bd[n - 1], rows) if rows else []
            K = [[v[i] for v in kv] for i in range(rows)]
        kdim = len(K[0]) if K and K[0] else 0
        if kdim == 0:
            bd[n] = [[R.zero] * cols for _ in range(rows)]
            continue
        Bm = [[R(rng.randrange(p)) for _ in range(cols)] for _ in range(kdim)]
        bd[n] = la.mat_mul(R, K, Bm, kdim, cols)
    return ChainComplex(R, 0, ranks, bd)


def random_invertible(rng: random.Random, R: CoefficientRing, n: int) -> Tuple[Matrix, Matrix]:
    p = R.order
    while True:
        G = [[R(rng.randrange(p)) for _ in range(n)] for _ in range(n)]
        if la.rank(R, G, n) == n:
            return G, la.inverse(R, G)


def conjugate(X: TruncatedSimplicialModule, rng: random.Random) -> TruncatedSimplicialModule:
    """The same simplicial module in random levelwise bases."""
    R = X.over
    gs = [random_invertible(rng, R, r) if r else ([], []) for r in X.ranks]
    faces, degens = {}, {}
    rk = X.ranks
    for (n, i), D in X.faces.items():
        g, _ = gs[n - 1]
        _, ginv = gs[n]
        faces[(n, i)] = _mm(R, _mm(R, g, D, rk[n - 1], rk[n]), ginv, rk[n], rk[n]) if rk[n] and rk[n - 1] else D
    for (n, i), S in X.degens.items():
        g, _ = gs[n + 1]
        _, ginv = gs[n]
        degens[(n, i)] = _mm(R, _mm(R, g, S, rk[n + 1], rk[n]), ginv, rk[n], rk[n]) if rk[n] and rk[n + 1] else S
    return TruncatedSimplicialModule(R, X.N, list(rk), faces, degens)


def random_simplicial_module(rng: random.Random, R: CoefficientRing, N: int = 4, max_rank: int = 3) -> TruncatedSimplicialModule:
    return conjugate(dold_kan_realize(random_chain_complex(rng, R, N, max_rank), N), rng)
