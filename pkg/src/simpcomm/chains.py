"""Chain complexes of finite free modules, homology, resolutions and exactness checks.

Indexing is homological throughout: boundaries[n] maps degree n to degree n-1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .coeffs import CoefficientRing
from .errors import NotAComplex, ShapeMismatch
from . import linalg as la
from .poly import MultiPoly
from .qring import QuotientRing, kernel_generators, subquotient, columns, ModulePresentationData
from .groebner import prune_generators

Base = Union[CoefficientRing, QuotientRing]


def _zero(over: Base):
    return over.zero


def _mul(over: Base, a, b):
    return over.mul(a, b)


def _is_zero(over: Base, a) -> bool:
    if isinstance(over, QuotientRing):
        return over.is_zero(a)
    return not a


def matmul(over: Base, A, B, inner: int, ncols: int):
    rows = len(A)
    out = [[_zero(over) for _ in range(ncols)] for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            a = A[i][k]
            if (a.is_zero() if isinstance(a, MultiPoly) else not a):
                continue
            for j in range(ncols):
                b = B[k][j]
                if (b.is_zero() if isinstance(b, MultiPoly) else not b):
                    continue
                out[i][j] = over.add(out[i][j], over.mul(a, b))
    return out


@dataclass
class ChainComplex:
    """Finite free chain complex C_lo <- ... <- C_hi over a coefficient ring or quotient ring."""

    over: Base
    lo: int
    ranks: List[int]
    boundaries: Dict[int, list]  # n -> matrix ranks(n-1) x ranks(n)
    check: bool = True

    def __post_init__(self):
        self.ranks = list(self.ranks)
        for n in list(self.boundaries):
            if n <= self.lo or n > self.hi:
                if any(not _is_zero(self.over, x) for row in self.boundaries[n] for x in row):
                    raise ShapeMismatch(f"boundary in degree {n} outside range")
                del self.boundaries[n]
        for n in range(self.lo + 1, self.hi + 1):
            r, c = self.rank(n - 1), self.rank(n)
            M = self.boundaries.get(n)
            if M is None:
                self.boundaries[n] = [[_zero(self.over)] * c for _ in range(r)]
                continue
            if len(M) != r or any(len(row) != c for row in M):
                raise ShapeMismatch(f"boundary {n} has shape {len(M)}x{len(M[0]) if M else 0}, expected {r}x{c}")
            if isinstance(self.over, QuotientRing):
                self.boundaries[n] = [[self.over.reduce(x) for x in row] for row in M]
        if self.check:
            for n in range(self.lo + 2, self.hi + 1):
                prod = matmul(self.over, self.d(n - 1), self.d(n), self.rank(n - 1), self.rank(n))
                if any(not _is_zero(self.over, x) for row in prod for x in row):
                    raise NotAComplex(f"d_{n - 1} o d_{n} != 0")

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def rank(self, n: int) -> int:
        if n < self.lo or n > self.hi:
            return 0
        return self.ranks[n - self.lo]

    def d(self, n: int):
        """Boundary C_n -> C_{n-1} (empty matrices at the ends)."""
        if n in self.boundaries:
            return self.boundaries[n]
        return [[_zero(self.over)] * self.rank(n) for _ in range(self.rank(n - 1))]

    def shift(self, k: int) -> "ChainComplex":
        """C[k]: degree n of the result is degree n-k of C. Differentials pick up (-1)^k."""
        bd = {}
        for n, M in self.boundaries.items():
            bd[n + k] = [[(self.over.neg(x) if k % 2 else x) for x in row] for row in M]
        return ChainComplex(self.over, self.lo + k, list(self.ranks), bd, check=False)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.rank(n) for n in self.degrees)

    def to_json(self) -> Dict:
        def s(x):
            return x.to_str() if isinstance(x, MultiPoly) else str(x)

        return {
            "over": str(self.over),
            "degrees": [self.lo, self.hi],
            "ranks": list(self.ranks),
            "boundaries": {str(n): [[s(x) for x in row] for row in self.boundaries[n]] for n in sorted(self.boundaries)},
        }

    def dual(self) -> "ChainComplex":
        """Hom(C, R) reindexed homologically: degree -n holds C_n^*, boundary is the transpose."""
        ranks = [self.rank(n) for n in range(self.hi, self.lo - 1, -1)]
        bd = {}
        for n in range(self.lo + 1, self.hi + 1):
            M = self.d(n)
            T = [[M[i][j] for i in range(self.rank(n - 1))] for j in range(self.rank(n))]
            bd[-(n - 1)] = T
        return ChainComplex(self.over, -self.hi, ranks, bd, check=False)


@dataclass(frozen=True)
class HomologyReport:
    """Homology in one degree.

    Over a field: dimension (= free_rank). Over Z: free_rank and torsion invariant
    factors. Over Z/m: free_rank counts Z/m summands, torsion lists the rest. Over a
    quotient ring: dimension over the ground field (None if infinite), free_rank when
    the module is free, and a canonical presentation.
    """

    degree: int
    free_rank: Optional[int]
    torsion: Tuple[int, ...] = ()
    dimension: Optional[int] = None
    zero: bool = False
    presentation: Optional[Dict] = None
    reliable: bool = True

    def order(self) -> Optional[int]:
        """Cardinality for finite groups over Z or Z/m."""
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def to_json(self) -> Dict:
        d = {
            "degree": self.degree,
            "free_rank": self.free_rank,
            "torsion": [str(t) for t in self.torsion],
            "dimension": self.dimension,
            "zero": self.zero,
            "reliable": self.reliable,
        }
        if self.presentation is not None:
            d["presentation"] = self.presentation
        return d

    def invariants(self) -> Tuple:
        return (self.degree, self.free_rank, self.torsion, self.dimension, self.zero)


def field_report(degree: int, dim: int, reliable: bool = True) -> HomologyReport:
    return HomologyReport(degree, dim, (), dim, dim == 0, None, reliable)


def module_report(degree: int, pres: ModulePresentationData, reliable: bool = True) -> HomologyReport:
    zero = pres.is_zero()
    dim = 0 if zero else pres.dimension()
    fr = 0 if zero else pres.free_rank()
    return HomologyReport(degree, fr, (), dim, zero, pres.canonical() if not zero else {"generators": 0, "relations": []}, reliable)


def homology_presentation(C: ChainComplex, i: int) -> ModulePresentationData:
    """H_i(C) as a presented module, for complexes over a quotient ring."""
    R = C.over
    n = C.rank(i)
    if n == 0:
        return ModulePresentationData(R, 0, [], [])
    ker = kernel_generators(R, C.d(i), C.rank(i - 1), n)
    return subquotient(R, ker, columns(C.d(i + 1), C.rank(i + 1)), n)


def homology(C: ChainComplex, i: int) -> HomologyReport:
    """H_i(C). Degrees outside the range give zero."""
    n = C.rank(i)
    R = C.over
    if n == 0:
        if isinstance(R, CoefficientRing) and not R.is_field:
            return HomologyReport(i, 0, (), None, True)
        return HomologyReport(i, 0, (), 0, True, None if isinstance(R, CoefficientRing) else {"generators": 0, "relations": []})
    d_in = C.d(i)          # rank(i-1) x n
    d_out = C.d(i + 1)     # n x rank(i+1)
    m_in, m_out = C.rank(i - 1), C.rank(i + 1)
    if isinstance(R, QuotientRing):
        return module_report(i, homology_presentation(C, i))
    if R.is_field:
        r_in = la.rank(R, d_in, n) if m_in else 0
        r_out = la.rank(R, d_out, m_out) if m_out else 0
        return field_report(i, n - r_in - r_out)
    if R.kind == "Z":
        from .snf import invariant_factors
        r_in = la.rank(CoefficientRing("Q"), [[x for x in row] for row in d_in], n) if m_in else 0
        facs = invariant_factors(la.int_matrix(d_out), 0, m_out) if m_out else []
        r_out = len(facs)
        tors = tuple(abs(f) for f in facs if abs(f) > 1)
        free = n - r_in - r_out
        return HomologyReport(i, free, tors, None, free == 0 and not tors)
    # Z/m
    m = R.modulus
    ker = la.z_kernel_columns(d_in, n, m) if m_in else [[1 if a == b else 0 for a in range(n)] for b in range(n)]
    im = [[int(d_out[a][b]) for a in range(n)] for b in range(m_out)]
    facs = la.finite_quotient_invariants(ker, im, n, m)
    free = sum(1 for f in facs if f == m or f == 0)
    tors = tuple(sorted(f for f in facs if f not in (0, m)))
    return HomologyReport(i, free, tors, None, free == 0 and not tors)


def homology_all(C: ChainComplex) -> List[HomologyReport]:
    return [homology(C, i) for i in C.degrees]


# ----------------------------------------------------------------------------
# complexes over a field: tensor products


def tensor_complexes(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """(C (x) D)_n = sum C_p (x) D_q, d(a(x)b) = da(x)b + (-1)^p a(x)db. Coefficient rings only."""
    R = C.over
    if not isinstance(R, CoefficientRing) or D.over != R:
        raise ShapeMismatch("tensor product needs complexes over the same coefficient ring")
    lo, hi = C.lo + D.lo, C.hi + D.hi
    blocks: Dict[int, List[Tuple[int, int, int]]] = {}
    for n in range(lo, hi + 1):
        off = 0
        bl = []
        for p in C.degrees:
            q = n - p
            if D.lo <= q <= D.hi:
                size = C.rank(p) * D.rank(q)
                bl.append((p, q, off))
                off += size
        blocks[n] = bl
    ranks = [sum(C.rank(p) * D.rank(q) for p, q, _ in blocks[n]) for n in range(lo, hi + 1)]
    bd = {}
    for n in range(lo + 1, hi + 1):
        M = la.zeros(R, ranks[n - 1 - lo], ranks[n - lo])
        tgt = {(p, q): off for p, q, off in blocks[n - 1]}
        for p, q, off in blocks[n]:
            rp, rq = C.rank(p), D.rank(q)
            # d_C (x) 1
            if (p - 1, q) in tgt:
                dC = C.d(p)
                t0 = tgt[(p - 1, q)]
                for a in range(rp):
                    for b in range(rq):
                        col = off + a * rq + b
                        for a2 in range(C.rank(p - 1)):
                            v = dC[a2][a]
                            if v:
                                M[t0 + a2 * rq + b][col] = R.add(M[t0 + a2 * rq + b][col], v)
            # (-1)^p 1 (x) d_D
            if (p, q - 1) in tgt:
                dD = D.d(q)
                t0 = tgt[(p, q - 1)]
                rq1 = D.rank(q - 1)
                for a in range(rp):
                    for b in range(rq):
                        col = off + a * rq + b
                        for b2 in range(rq1):
                            v = dD[b2][b]
                            if v:
                                v = R.neg(v) if p % 2 else v
                                M[t0 + a * rq1 + b2][col] = R.add(M[t0 + a * rq1 + b2][col], v)
        bd[n] = M
    return ChainComplex(R, lo, ranks, bd)


# ----------------------------------------------------------------------------
# free resolutions


def free_resolution_matrices(R: QuotientRing, ngens: int, relations: Sequence[Sequence[MultiPoly]], length: int) -> ChainComplex:
    """Free resolution F_length -> ... -> F_0 of R^ngens / relations over R.

    Each step takes syzygies of the previous columns (computed in the ambient ring
    with the defining ideal appended) and drops redundant generators.
    """
    rels = [[R(p) for p in r] for r in relations]
    rels = [r for r in rels if any(not p.is_zero() for p in r)]
    if rels:
        rels = prune_generators(R.field, R.vars, ngens, rels) if not R.ideal else _prune_mod(R, ngens, rels)
    ranks = [ngens]
    bd = {}
    prev_cols = rels
    prev_rank = ngens
    for n in range(1, length + 1):
        cols = prev_cols
        k = len(cols)
        if k == 0:
            break
        ranks.append(k)
        bd[n] = [[cols[j][i] for j in range(k)] for i in range(prev_rank)]
        if n == length:
            break
        ker = kernel_generators(R, bd[n], prev_rank, k)
        ker = _prune_mod(R, k, ker) if ker else []
        prev_cols, prev_rank = ker, k
    return ChainComplex(R, 0, ranks, bd)


def _prune_mod(R: QuotientRing, rank: int, vecs):
    """Drop vectors lying in the span of the others plus J * P^rank."""
    from .groebner import SubmoduleGB, TermOrder

    vecs = [[R.reduce(p) for p in v] for v in vecs]
    vecs = [v for v in vecs if any(not p.is_zero() for p in v)]
    jv = R.ideal_vectors(rank)
    k = len(vecs) - 1
    while k >= 0:
        others = vecs[:k] + vecs[k + 1:]
        gens = others + jv
        if gens:
            gb = SubmoduleGB(R.field, R.vars, rank, gens, TermOrder("grevlex", "pot"))
            if gb.contains(vecs[k]):
                vecs = others
        k -= 1
    return vecs


# ----------------------------------------------------------------------------
# exactness


@dataclass
class PresentedModule:
    """R^ngens / span(relations) over a coefficient ring; relations are columns."""

    ring: CoefficientRing
    ngens: int
    relations: List[List] = field(default_factory=list)


@dataclass
class ExactnessReport:
    junctions: List[bool]
    details: List[str]

    @property
    def exact(self) -> bool:
        return all(self.junctions)

    def to_json(self) -> Dict:
        return {"exact": self.exact, "junctions": self.junctions, "details": self.details}


def _span_contains(R: CoefficientRing, big: List[List], small: List[List], dim: int) -> bool:
    """span(small) inside span(big)."""
    if not small:
        return True
    if R.is_field:
        if not big:
            return all(not any(v) for v in small)
        rows_big = [list(v) for v in big]
        r1 = la.rank(R, rows_big, dim)
        r2 = la.rank(R, rows_big + [list(v) for v in small], dim)
        return r1 == r2
    facs = la.finite_quotient_invariants([[int(x) for x in v] for v in small], [[int(x) for x in v] for v in big], dim, R.modulus)
    return not facs


def _preimage(R: CoefficientRing, g: List[List], src: int, tgt: int, tgt_rels: List[List]) -> List[List]:
    """Generators of {x : g x in span(tgt_rels)} as columns of length src."""
    cols = [[g[i][j] for i in range(tgt)] for j in range(src)] + [[R.neg(x) for x in r] for r in tgt_rels]
    width = len(cols)
    A = [[cols[j][i] for j in range(width)] for i in range(tgt)]
    if R.is_field:
        if tgt == 0:
            return [[R.one if a == b else R.zero for a in range(src)] for b in range(src)]
        K = la.kernel(R, A, width)
    else:
        if tgt == 0:
            return [[1 if a == b else 0 for a in range(src)] for b in range(src)]
        K = la.z_kernel_columns(A, width, R.modulus)
    return [v[:src] for v in K]


def check_les(modules: Sequence[PresentedModule], maps: Sequence[List[List]]) -> ExactnessReport:
    """Exactness of M_0 -> M_1 -> ... -> M_k at every interior module.

    maps[j] is the matrix of M_j -> M_{j+1} on generators (rows index targets).
    Zero end-modules can be included to test injectivity/surjectivity.
    """
    if len(maps) != len(modules) - 1:
        raise ShapeMismatch("need one map between each consecutive pair of modules")
    for j, f in enumerate(maps):
        src, tgt = modules[j].ngens, modules[j + 1].ngens
        if len(f) != tgt or any(len(r) != src for r in f):
            raise ShapeMismatch(f"map {j} should be {tgt}x{src}")
        if modules[j].ring != modules[j + 1].ring:
            raise ShapeMismatch("modules over different rings")
    junctions, details = [], []
    for j in range(1, len(modules) - 1):
        R = modules[j].ring
        M = modules[j]
        f, g = maps[j - 1], maps[j]
        im = [[f[i][c] for i in range(M.ngens)] for c in range(modules[j - 1].ngens)] + [list(r) for r in M.relations]
        ker = _preimage(R, g, M.ngens, modules[j + 1].ngens, modules[j + 1].relations)
        ok_comp = _span_contains(R, ker, im, M.ngens)
        ok_exact = _span_contains(R, im, ker, M.ngens)
        junctions.append(ok_comp and ok_exact)
        details.append("exact" if ok_comp and ok_exact else ("composite nonzero" if not ok_comp else "kernel larger than image"))
    return ExactnessReport(junctions, details)


def check_les_vector_spaces(R: CoefficientRing, dims: Sequence[int], maps: Sequence[List[List]]) -> ExactnessReport:
    return check_les([PresentedModule(R, d) for d in dims], maps)
