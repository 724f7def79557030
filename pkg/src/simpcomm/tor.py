"""Free resolutions of presented modules, Koszul complexes and Tor over presented algebras."""
from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .chains import (ChainComplex, HomologyReport, free_resolution_matrices, homology, homology_presentation,
                     module_report)
from .coeffs import CoefficientRing, GF, Zmod
from .errors import NonFieldCoefficients, UnsupportedBase, VariableMismatch
from . import linalg as la
from .poly import MultiPoly
from .presentation import FinitePresentation, ModulePresentation, Relative, relative
from .qring import ModulePresentationData, QuotientRing
from .regular import constant_prime, is_regular_sequence
from .snf import smith_normal_form, diagonal


def koszul_complex(over, seq: Sequence) -> ChainComplex:
    """K(f_1..f_r): degree i has basis the i-subsets S, d(e_S) = sum (-1)^j f_{s_j} e_{S - s_j}."""
    r = len(seq)
    subsets = [list(combinations(range(r), i)) for i in range(r + 1)]
    index = [{S: n for n, S in enumerate(lv)} for lv in subsets]
    bd = {}
    for i in range(1, r + 1):
        M = [[over.zero for _ in subsets[i]] for _ in subsets[i - 1]]
        for c, S in enumerate(subsets[i]):
            for j, s in enumerate(S):
                T = S[:j] + S[j + 1:]
                v = seq[s] if j % 2 == 0 else over.neg(seq[s])
                M[index[i - 1][T]][c] = over.add(M[index[i - 1][T]][c], v)
        bd[i] = M
    return ChainComplex(over, 0, [len(lv) for lv in subsets], bd)


def _lattice_basis(rows: List[List[int]], n: int) -> List[List[int]]:
    """A Z-basis of the row lattice."""
    if not rows:
        return []
    D, P, Q = smith_normal_form(rows, 0, n)
    Qinv = la.inverse(CoefficientRing("Q"), [[x for x in r] for r in Q])
    out = []
    for i, d in enumerate(diagonal(D)):
        if d:
            out.append([int(d * Qinv[i][j]) for j in range(n)])
    return out


def free_resolution(M: ModulePresentation, length: int) -> ChainComplex:
    """Free resolution F_length -> ... -> F_0 -> M.

    Over a field-based ring this is the Gröbner path. Over Z without variables
    the relation lattice is free; over Z[vars] a cyclic module whose relations
    form a certified regular sequence gets its Koszul complex.
    """
    A = M.over
    k = A.coefficients
    if k.is_field:
        R = QuotientRing(k, A.all_vars, A.ideal())
        return free_resolution_matrices(R, M.generators, [list(r) for r in M.relations], length)
    if k.kind == "Z" and not A.all_vars:
        rows = [[int(p.constant_term()) for p in r] for r in M.relations]
        basis = _lattice_basis(rows, M.generators)
        ranks = [M.generators] + ([len(basis)] if basis and length >= 1 else [])
        bd = {1: [[b[i] for b in basis] for i in range(M.generators)]} if len(ranks) > 1 else {}
        return ChainComplex(k, 0, ranks, bd)
    if k.kind == "Z" and M.generators == 1 and not any(not g.is_zero() for g in A.ideal()):
        seq = [r[0] for r in M.relations if not r[0].is_zero()]
        if is_regular_sequence(k, A.all_vars, (), seq):
            K = koszul_complex(_PolyRing(k, A.all_vars), seq)
            return _truncate(K, length)
    raise NonFieldCoefficients(f"no resolution path over {k} for this module")


class _PolyRing:
    """Minimal ring interface on MultiPoly for Koszul complexes over Z[vars]."""

    def __init__(self, k: CoefficientRing, vars):
        self.k, self.vars = k, tuple(vars)

    @property
    def zero(self):
        return MultiPoly.zero(self.k, self.vars)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def reduce(self, a):
        return a

    def __str__(self):
        return f"{self.k}[{','.join(self.vars)}]"


def _truncate(C: ChainComplex, length: int) -> ChainComplex:
    hi = min(C.hi, C.lo + length)
    ranks = C.ranks[: hi - C.lo + 1]
    bd = {n: M for n, M in C.boundaries.items() if n <= hi}
    return ChainComplex(C.over, C.lo, ranks, bd, check=False)


# ----------------------------------------------------------------------------
# Tor over presented algebras


Ring = Union[CoefficientRing, FinitePresentation]


def _is_flat_layer(rel: Relative) -> bool:
    """A polynomial extension (no relations above the base) is flat."""
    return not rel.relations


def _rename(polys: Sequence[MultiPoly], names: Sequence[str], taken: Sequence[str]) -> Tuple[List[MultiPoly], Tuple[str, ...]]:
    mapping = {}
    used = set(taken)
    for n in names:
        new = n
        while new in used:
            new = new + "_2"
        used.add(new)
        mapping[n] = new
    renamed = []
    for p in polys:
        nv = tuple(mapping.get(v, v) for v in p.vars)
        renamed.append(MultiPoly(p.ring, nv, dict(p.terms)))
    return renamed, tuple(mapping[n] for n in names)


def tor_complex(B: Ring, B2: Ring, A: Optional[Ring] = None, length: int = 3) -> ChainComplex:
    """F tensor_A B2 where F resolves B over A[new vars of B]; field coefficients only."""
    rb = relative(B, A) if isinstance(B, FinitePresentation) else relative(B)
    r2 = relative(B2, A) if isinstance(B2, FinitePresentation) else relative(B2)
    if not rb.coefficients.is_field:
        raise UnsupportedBase(f"Gröbner path over {rb.coefficients}")
    if rb.base_vars != r2.base_vars:
        raise VariableMismatch("B and B2 are not presented over the same base")
    return _field_tor(rb, r2, length - 1)


def _reduce_mod_p(rel: Relative, p: int) -> Relative:
    Fp = GF(p)
    keep = [g.change_ring(Fp) for g in rel.relations]
    keep = [g for g in keep if not g.is_zero()]
    return Relative(Fp, rel.base_vars, rel.new_vars, tuple(g.change_ring(Fp) for g in rel.base_ideal), tuple(keep))


def _field_tor(rb: Relative, r2: Relative, i: int) -> ChainComplex:
    k = rb.coefficients
    z_rels, z_vars = _rename(r2.relations, r2.new_vars, rb.all_vars)
    V = rb.all_vars + z_vars
    Rp = QuotientRing(k, rb.all_vars, rb.base_ideal)
    F = free_resolution_matrices(Rp, 1, [[Rp(f)] for f in rb.relations], i + 1)
    T = QuotientRing(k, V, [g.embed(V) for g in rb.base_ideal] + [g.embed(V) for g in z_rels])
    bd = {n: [[T(x.embed(V)) for x in row] for row in M] for n, M in F.boundaries.items()}
    return ChainComplex(T, 0, list(F.ranks), bd, check=False)


def _sum_with_shift(C: ChainComplex) -> ChainComplex:
    """C plus C[1] with zero connecting map."""
    R = C.over
    hi = C.hi + 1
    ranks = [C.rank(n) + C.rank(n - 1) for n in range(0, hi + 1)]
    bd = {}
    for n in range(1, hi + 1):
        r0, c0 = C.rank(n - 1), C.rank(n)
        r1, c1 = C.rank(n - 2), C.rank(n - 1)
        M = [[R.zero] * (c0 + c1) for _ in range(r0 + r1)]
        top = C.d(n)
        for a in range(r0):
            for b in range(c0):
                M[a][b] = top[a][b]
        low = C.d(n - 1)
        for a in range(r1):
            for b in range(c1):
                M[r0 + a][c0 + b] = R.neg(low[a][b])
        bd[n] = M
    return ChainComplex(R, 0, ranks, bd, check=False)


def tor(B: Ring, B2: Ring, A: Optional[Ring] = None, i: int = 0) -> HomologyReport:
    """Tor_i^A(B, B2) for B, B2 presented over a common base A."""
    if i < 0:
        return HomologyReport(i, 0, (), 0, True)
    rb = relative(B, A) if isinstance(B, FinitePresentation) else relative(B)
    r2 = relative(B2, A) if isinstance(B2, FinitePresentation) else relative(B2)
    if rb.base_vars != r2.base_vars or rb.coefficients != r2.coefficients:
        raise VariableMismatch("B and B2 are not presented over the same base")
    k = rb.coefficients
    if k.is_field:
        return _over_both(_field_tor(rb, r2, i), rb, i)
    return _tor_nonfield(rb, r2, i)


def _over_both(C: ChainComplex, rb: Relative, i: int) -> HomologyReport:
    """H_i(C) reported over B tensor B2, which Tor is a module over; keeps reports symmetric in B, B2."""
    pres = homology_presentation(C, i)
    T = C.over
    both = QuotientRing(T.field, T.vars, list(T.ideal) + [g.embed(T.vars) for g in rb.relations])
    return module_report(i, ModulePresentationData(both, pres.ngens, pres.relations, pres.generator_images))


def _tor_nonfield(rb: Relative, r2: Relative, i: int) -> HomologyReport:
    k = rb.coefficients
    if k.kind != "Z":
        raise UnsupportedBase(f"Tor over {k} needs a field or Z base")
    base_is_poly = not any(not g.is_zero() for g in rb.base_ideal)
    # flat factor: a polynomial extension of a polynomial base
    if base_is_poly and (_is_flat_layer(r2) or _is_flat_layer(rb)):
        if i > 0:
            return HomologyReport(i, 0, (), 0, True)
        # Tor_0 = B tensor B2: report over F_p when possible, else over Z without variables
    p1, p2 = constant_prime(rb.relations), constant_prime(r2.relations)
    if p1 is not None and p1 == p2 and base_is_poly:
        # A/p tensor^L_A A/p = A/p + A/p[1] since p is a nonzerodivisor on A
        C = _field_tor(_reduce_mod_p(rb, p1), _reduce_mod_p(r2, p1), max(i - 1, 0) + 1)
        return homology(_sum_with_shift(C), i)
    if p1 is not None and p2 is not None and p1 != p2 and base_is_poly:
        return HomologyReport(i, 0, (), 0, True)
    if p1 is not None and base_is_poly and _is_flat_layer(r2):
        C = _field_tor(_reduce_mod_p(rb, p1), _reduce_mod_p(r2, p1), 1)
        return homology(C, 0)
    if p2 is not None and base_is_poly and _is_flat_layer(rb):
        C = _field_tor(_reduce_mod_p(r2, p2), _reduce_mod_p(rb, p2), 1)
        return homology(C, 0)
    if not rb.all_vars and not r2.all_vars:
        return homology(_integer_tor_complex(rb, r2, i), i)
    raise UnsupportedBase("Tor over Z is supported for integer quotients, flat factors and F_p-algebras")


def _integer_tor_complex(rb: Relative, r2: Relative, i: int) -> ChainComplex:
    """Z/a tensor Z/b via the lattice resolution of Z/a."""
    from math import gcd

    a = 0
    for g in rb.relations:
        a = gcd(a, int(g.constant_term()))
    b = 0
    for g in r2.relations:
        b = gcd(b, int(g.constant_term()))
    over = CoefficientRing("Z") if b == 0 else (Zmod(abs(b)) if abs(b) > 1 else None)
    if over is None:
        return ChainComplex(CoefficientRing("Z"), 0, [0], {})
    if a == 0:
        return ChainComplex(over, 0, [1], {})
    return ChainComplex(over, 0, [1, 1], {1: [[over(a)]]})
