"""Quotient rings k[vars]/J and finitely generated modules over them.

Module computations work in the ambient polynomial ring with the generators
of J appended as extra relations, so no separate quotient-ring arithmetic
is needed for kernels and cokernels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .coeffs import CoefficientRing
from .errors import NonFieldCoefficients
from .groebner import SubmoduleGB, TermOrder, groebner_basis, module_syzygies, normal_form, vec_from_polys
from .poly import MultiPoly, parse_poly

Vector = List[MultiPoly]


class QuotientRing:
    """k[vars]/J over a field k."""

    def __init__(self, field: CoefficientRing, vars: Sequence[str], ideal: Sequence[MultiPoly] = ()):
        if not field.is_field:
            raise NonFieldCoefficients(f"quotient ring arithmetic needs a field, got {field}")
        self.field = field.as_field()
        self.vars = tuple(vars)
        gens = [g.change_ring(self.field).embed(self.vars) for g in ideal if g]
        self.ideal = groebner_basis(gens) if gens else []

    def __repr__(self):
        rels = ", ".join(str(g) for g in self.ideal)
        return f"QuotientRing({self.field}[{','.join(self.vars)}]/({rels}))"

    def __eq__(self, other):
        return isinstance(other, QuotientRing) and (self.field, self.vars) == (other.field, other.vars) and \
            [g.terms for g in self.ideal] == [g.terms for g in other.ideal]

    def __hash__(self):
        return hash((self.field, self.vars, tuple(self.ideal)))

    @property
    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() and g for g in self.ideal)

    @property
    def zero(self) -> MultiPoly:
        return MultiPoly.zero(self.field, self.vars)

    @property
    def one(self) -> MultiPoly:
        return self.reduce(MultiPoly.constant(self.field, self.vars, 1))

    def __call__(self, x) -> MultiPoly:
        if isinstance(x, MultiPoly):
            return self.reduce(x.change_ring(self.field).embed(self.vars))
        if isinstance(x, str):
            return self.reduce(parse_poly(x, self.field, self.vars))
        return self.reduce(MultiPoly.constant(self.field, self.vars, x))

    def var(self, name: str) -> MultiPoly:
        return self.reduce(MultiPoly.var(self.field, self.vars, name))

    def reduce(self, p: MultiPoly) -> MultiPoly:
        if not self.ideal or p.is_zero():
            return p
        return normal_form(p, self.ideal)

    def is_zero(self, p: MultiPoly) -> bool:
        return self.reduce(p).is_zero()

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return self.reduce(a * b)

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def ideal_vectors(self, rank: int) -> List[Vector]:
        """Generators of J * P^rank."""
        out = []
        for j in range(rank):
            for g in self.ideal:
                v = [self.zero] * rank
                v[j] = g
                out.append(v)
        return out

    # finite-dimensional structure
    @cached_property
    def standard_basis(self) -> Optional[List[Tuple[int, ...]]]:
        if not self.ideal:
            return None if self.vars else [()]
        gb = SubmoduleGB(self.field, self.vars, 1, [[g] for g in self.ideal])
        sm = gb.standard_monomials()
        return None if sm is None else [e for _, e in sm]

    @property
    def dimension(self) -> Optional[int]:
        b = self.standard_basis
        return None if b is None else len(b)

    def coords(self, p: MultiPoly) -> List:
        basis = self.standard_basis
        if basis is None:
            raise ValueError("ring is not finite-dimensional")
        r = self.reduce(p)
        idx = {e: i for i, e in enumerate(basis)}
        v = [self.field.zero] * len(basis)
        for e, c in r.terms.items():
            v[idx[e]] = c
        return v

    def basis_element(self, i: int) -> MultiPoly:
        return MultiPoly.monomial(self.field, self.vars, self.standard_basis[i])

    def mult_matrix(self, p: MultiPoly) -> List[List]:
        basis = self.standard_basis
        cols = [self.coords(p * MultiPoly.monomial(self.field, self.vars, e)) for e in basis]
        n = len(basis)
        return [[cols[j][i] for j in range(n)] for i in range(n)]


# ----------------------------------------------------------------------------
# modules


def _zero_vec(R: QuotientRing, n: int) -> Vector:
    return [R.zero] * n


def _is_zero_vec(v: Vector) -> bool:
    return all(p.is_zero() for p in v)


def columns(M: List[List[MultiPoly]], ncols: int) -> List[Vector]:
    return [[M[i][j] for i in range(len(M))] for j in range(ncols)]


def kernel_generators(R: QuotientRing, M: List[List[MultiPoly]], nrows: int, ncols: int) -> List[Vector]:
    """Generators of ker(R^ncols -> R^nrows), as vectors in the ambient P^ncols."""
    if ncols == 0:
        return []
    if nrows == 0:
        return [[R.one if i == j else R.zero for i in range(ncols)] for j in range(ncols)]
    cols = columns(M, ncols) + R.ideal_vectors(nrows)
    syz = module_syzygies(R.field, R.vars, nrows, cols)
    out = []
    for s in syz:
        v = [R.reduce(p) for p in s[:ncols]]
        if not _is_zero_vec(v):
            out.append(v)
    return out


@dataclass
class ModulePresentationData:
    """R^ngens / relations, with relations as ambient vectors (J * R^ngens implied)."""

    ring: QuotientRing
    ngens: int
    relations: List[Vector]
    generator_images: List[Vector] = field(default_factory=list)  # images in an ambient free module

    def relation_gb(self) -> SubmoduleGB:
        rels = list(self.relations) + self.ring.ideal_vectors(self.ngens)
        return SubmoduleGB(self.ring.field, self.ring.vars, self.ngens, rels, TermOrder("grevlex", "pot"))

    @cached_property
    def _gb(self) -> SubmoduleGB:
        return self.relation_gb()

    def is_zero(self) -> bool:
        return self.ngens == 0 or self._gb.is_unit_module()

    def dimension(self) -> Optional[int]:
        if self.ngens == 0:
            return 0
        return self._gb.standard_monomial_count()

    def free_rank(self) -> Optional[int]:
        """Rank t when the module is R^t (relations reduce to J * R^t), else None."""
        if self.ngens == 0:
            return 0
        jv = self.ring.ideal_vectors(self.ngens)
        if not jv:
            return self.ngens if all(_is_zero_vec(r) for r in self.relations) else None
        jgb = SubmoduleGB(self.ring.field, self.ring.vars, self.ngens, jv, TermOrder("grevlex", "pot"))
        return self.ngens if jgb.contains_module(self._gb) else None

    def canonical(self) -> Dict:
        gb = self._gb
        return {
            "generators": self.ngens,
            "relations": [[p.to_str() for p in v] for v in gb.basis],
        }


def prune_presentation(R: QuotientRing, ngens: int, rels: List[Vector], images: List[Vector]) -> Tuple[int, List[Vector], List[Vector]]:
    """Eliminate generators that a relation expresses through the others (unit pivot)."""
    rels = [[R.reduce(p) for p in r] for r in rels]
    rels = [r for r in rels if not _is_zero_vec(r)]
    images = list(images)
    changed = True
    while changed:
        changed = False
        for ri, r in enumerate(rels):
            j = next((j for j in range(ngens - 1, -1, -1) if r[j].is_constant() and not r[j].is_zero()), None)
            if j is None:
                continue
            c = r[j].constant_term()
            inv = R.field.inv(c)
            # e_j = -inv * sum_{k != j} r[k] e_k
            sub = [(-(r[k] * inv)) if k != j else R.zero for k in range(ngens)]
            new_rels = []
            for s_i, s in enumerate(rels):
                if s_i == ri:
                    continue
                t = [R.reduce(s[k] + s[j] * sub[k]) if k != j else R.zero for k in range(ngens)]
                t = t[:j] + t[j + 1:]
                if not _is_zero_vec(t):
                    new_rels.append(t)
            rels = new_rels
            if images:
                # generator images of the survivors are unchanged; drop the j-th
                images = images[:j] + images[j + 1:]
            ngens -= 1
            changed = True
            break
    return ngens, rels, images


def subquotient(R: QuotientRing, numer: List[Vector], denom: List[Vector], rank: int) -> ModulePresentationData:
    """Presentation of (span numer + J P^rank) / (span denom + J P^rank), denom inside numer."""
    jv = R.ideal_vectors(rank)
    dgb = SubmoduleGB(R.field, R.vars, rank, list(denom) + jv) if (denom or jv) else None
    gens = [v for v in numer if dgb is None or not dgb.contains(v)]
    # drop duplicates and generators redundant modulo denominators
    t = len(gens)
    if t == 0:
        return ModulePresentationData(R, 0, [], [])
    cols = list(gens) + list(denom) + jv
    syz = module_syzygies(R.field, R.vars, rank, cols)
    rels = [s[:t] for s in syz]
    rels = [r for r in rels if not _is_zero_vec(r)]
    ngens, rels, images = prune_presentation(R, t, rels, gens)
    return ModulePresentationData(R, ngens, rels, images)


# ----------------------------------------------------------------------------
# finite-dimensional modules (k-linear models)


class FiniteModule:
    """A module R^g / U that is finite-dimensional over k, with k-linear action matrices."""

    def __init__(self, R: QuotientRing, ngens: int, relations: Sequence[Vector] = (), name: str = "M"):
        self.ring = R
        self.ngens = ngens
        self.name = name
        rels = [[R(p) for p in r] for r in relations] + R.ideal_vectors(ngens)
        self.gb = SubmoduleGB(R.field, R.vars, ngens, rels, TermOrder("grevlex", "pot")) if rels else None
        if self.gb is None:
            if R.vars:
                raise ValueError("module is not finite-dimensional")
            self.basis = [(i, ()) for i in range(ngens)]
        else:
            sm = self.gb.standard_monomials()
            if sm is None:
                raise ValueError("module is not finite-dimensional")
            self.basis = sm
        self.index = {t: i for i, t in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def residue_field(cls, R: QuotientRing, point: Dict[str, object]) -> "FiniteModule":
        rels = [[R.var(v) - R(point.get(v, 0))] for v in R.vars]
        return cls(R, 1, rels, name="k")

    @classmethod
    def quotient(cls, R: QuotientRing, ideal: Sequence[MultiPoly], name: str = "M") -> "FiniteModule":
        return cls(R, 1, [[R(g)] for g in ideal], name=name)

    @classmethod
    def regular(cls, R: QuotientRing) -> "FiniteModule":
        return cls(R, 1, [], name="B")

    def coords(self, vec: Vector) -> List:
        v = vec_from_polys(vec)
        rem = self.gb.reduce_vec(v) if self.gb is not None else v
        out = [self.ring.field.zero] * self.dim
        for t, c in rem.items():
            out[self.index[t]] = c
        return out

    def basis_vector(self, i: int) -> Vector:
        pos, e = self.basis[i]
        R = self.ring
        v = [R.zero] * self.ngens
        v[pos] = MultiPoly.monomial(R.field, R.vars, e)
        return v

    def action(self, p: MultiPoly) -> List[List]:
        """Matrix of multiplication by p in the k-basis."""
        cols = []
        for i in range(self.dim):
            b = self.basis_vector(i)
            cols.append(self.coords([p * q for q in b]))
        n = self.dim
        return [[cols[j][i] for j in range(n)] for i in range(n)]


def tensor_matrix(M: FiniteModule, D: List[List[MultiPoly]], nrows: int, ncols: int) -> List[List]:
    """k-matrix of D (x) M : M^ncols -> M^nrows."""
    F = M.ring.field
    m = M.dim
    out = [[F.zero] * (ncols * m) for _ in range(nrows * m)]
    for i in range(nrows):
        for j in range(ncols):
            p = D[i][j]
            if p.is_zero():
                continue
            A = M.action(p)
            for a in range(m):
                for b in range(m):
                    if A[a][b]:
                        out[i * m + a][j * m + b] = A[a][b]
    return out


def hom_matrix(M: FiniteModule, D: List[List[MultiPoly]], nrows: int, ncols: int) -> List[List]:
    """k-matrix of Hom(D, M) : M^nrows -> M^ncols (precomposition)."""
    F = M.ring.field
    m = M.dim
    out = [[F.zero] * (nrows * m) for _ in range(ncols * m)]
    for i in range(nrows):
        for j in range(ncols):
            p = D[i][j]
            if p.is_zero():
                continue
            A = M.action(p)
            for a in range(m):
                for b in range(m):
                    if A[a][b]:
                        out[j * m + a][i * m + b] = A[a][b]
    return out
