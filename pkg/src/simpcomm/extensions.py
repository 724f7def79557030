"""Square-zero extensions, obstruction classes and Witt vectors.

A class in D^1(B/A; M) is a cocycle on the relation generators: one value
m_j in M per relation f_j, subject to the conditions imposed by degree 2 of
the cotangent complex and taken modulo the Jacobian coboundaries. Cocycles
are reduced against a fixed echelon basis of the coboundaries, so equal
classes have equal canonical cocycles.

Finite extensions also get an explicit ring model: B x M with addition and
multiplication twisted by the cocycle through a set-theoretic section of
P -> B. Orders, characteristics, Baer sums and lifting problems are checked
on these models.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as iproduct
from types import SimpleNamespace
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import linalg as la
from .chains import HomologyReport
from .coeffs import GF, ZZ, CoefficientRing, Zmod, prime_power
from .cotangent import RawComplex, _resolve_module, cotangent, omega_complex, target_ring
from .errors import (BadParameters, CombinatorialBlowup, InfiniteClassGroup, InfiniteUnderlyingSet,
                     NotSquareZero, ScaleCap, SimplicialIdentityError, UnsupportedBase)
from .finite_rings import MODEL_CAP, Elem, FiniteRing
from .groebner import SubmoduleGB, ideal_contains
from .poly import MultiPoly, parse_poly
from .presentation import FinitePresentation, Relative, over_ring, relative
from .qring import FiniteModule, QuotientRing, hom_matrix, subquotient
from .simplicial_rings import resolve

Ring = Union[CoefficientRing, FinitePresentation]

ENUMERATION_CAP = 4096


# ----------------------------------------------------------------------------
# H^1 of Hom(L, M) in cocycle form


def _relation_complex(B: Ring, A: Ring) -> Tuple[Relative, RawComplex, List[MultiPoly]]:
    """The raw cotangent complex with its degree-1 basis matched to explicit relations."""
    rel = relative(B, A)
    V = rel.all_vars
    if rel.coefficients.is_field:
        P, _ = resolve(B, A, 3, method="compute")
        return rel, omega_complex(P), [g.cycle.embed(V) for g in P.stage_generators(1)]
    T = cotangent(B, A, 2, cross_check=False)
    if T.fast_path not in ("Smooth", "RegularSequence"):
        raise UnsupportedBase("over Z only polynomial algebras and regular quotients are supported")
    return rel, T.raw, [f.embed(V) for f in rel.relations]


class _H1:
    """Z^1 modulo B^1 for Hom(L_0) -> Hom(L_1) -> Hom(L_2) with values in a k-linear module."""

    def __init__(self, F: CoefficientRing, raw: RawComplex, module, convert: Callable[[MultiPoly], MultiPoly]):
        self.field = F
        m = module.dim
        r = raw.ranks + [0, 0, 0]
        r0, r1, r2 = r[0], r[1], r[2]
        self.m, self.r0, self.r1 = m, r0, r1
        self.size = r1 * m

        def hom(n, rows, cols):
            D = [[convert(p) for p in row] for row in raw.bd.get(n, [])]
            if rows and cols and m:
                return hom_matrix(module, D, rows, cols)
            return la.zeros(F, cols * m, rows * m)

        self.jacobian = hom(1, r0, r1)
        self.d2 = hom(2, r1, r2)
        bvecs = la.transpose(self.jacobian, r0 * m) if r0 * m else []
        self.bd_rows = la.canonical_span(F, bvecs, self.size)
        self.bd_piv = [next(i for i, x in enumerate(row) if x) for row in self.bd_rows]
        if r2 * m:
            z = la.kernel(F, self.d2, self.size)
        else:
            z = [[F.one if i == j else F.zero for i in range(self.size)] for j in range(self.size)]
        self.classes = la.canonical_span(F, [self.reduce(v) for v in z], self.size)
        self.class_piv = [next(i for i, x in enumerate(row) if x) for row in self.classes]

    @property
    def dimension(self) -> int:
        return len(self.classes)

    def reduce(self, v: Sequence) -> List:
        F = self.field
        v = list(v)
        for row, pc in zip(self.bd_rows, self.bd_piv):
            c = v[pc]
            if c:
                v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, row)]
        return v

    def is_cocycle(self, v: Sequence) -> bool:
        return all(not x for x in la.mat_vec(self.field, self.d2, v)) if self.d2 else True

    def coordinates(self, v: Sequence) -> Tuple:
        """Coordinates of the class of a cocycle in the canonical class basis."""
        F = self.field
        red = self.reduce(v)
        coords = tuple(red[pc] for pc in self.class_piv)
        back = self.combine(coords)
        if back != red:
            raise BadParameters("the vector is not a cocycle")
        return coords

    def combine(self, coords: Sequence) -> List:
        F = self.field
        out = [F.zero] * self.size
        for c, row in zip(coords, self.classes):
            if c:
                out = [F.add(x, F.mul(c, y)) for x, y in zip(out, row)]
        return out

    def coboundary(self, v: Sequence) -> Optional[List]:
        """Some n in Hom(L_0, M) whose Jacobian image is v, or None."""
        if not self.r0 * self.m:
            return [] if all(not x for x in v) else None
        return la.solve(self.field, self.jacobian, list(v), self.r0 * self.m)


@dataclass
class CocycleSpace:
    """Cocycles for extensions of B by M over A, with their canonical forms."""

    B: Ring
    A: Ring
    rel: Relative
    ring: QuotientRing
    module: FiniteModule
    relations: List[MultiPoly]
    raw: RawComplex
    h1: _H1 = field(repr=False)

    @property
    def field(self) -> CoefficientRing:
        return self.ring.field

    @property
    def dimension(self) -> int:
        return self.h1.dimension

    def canonical(self, v: Sequence) -> Tuple:
        if not self.h1.is_cocycle(v):
            raise BadParameters("the vector is not a cocycle")
        return tuple(self.h1.reduce(v))

    def split(self, v: Sequence) -> List[Tuple]:
        m = self.module.dim
        return [tuple(v[j * m:(j + 1) * m]) for j in range(len(self.relations))]

    def presentation(self) -> Dict:
        return {
            "field": str(self.field),
            "dimension": self.dimension,
            "relations": [f.to_str() for f in self.relations],
            "module_dimension": self.module.dim,
            "basis": [[str(x) for x in row] for row in self.h1.classes],
        }

    @cached_property
    def base_model(self) -> Optional[FiniteRing]:
        R = self.ring
        if not self.field.is_finite or R.dimension is None or self.field.characteristic ** R.dimension > MODEL_CAP:
            return None
        return FiniteRing.from_quotient(R, _name(self.B))


def _name(X: Ring) -> str:
    return getattr(X, "name", "") or str(X)


def cocycle_space(B: Ring, A: Optional[Ring] = None, M: Union[None, str, FiniteModule] = "k") -> CocycleSpace:
    if A is None:
        A = B.coefficients if isinstance(B, FinitePresentation) else B
    rel, raw, rels = _relation_complex(B, A)
    R = target_ring(rel)
    if R is None:
        raise UnsupportedBase("extensions need B to be an algebra over a field or over F_p")
    R, FM = _resolve_module(R, M)
    if FM is None:
        if R.dimension is None:
            err = InfiniteClassGroup("B is infinite-dimensional; D^1 is returned as a module")
            err.presentation = cotangent(B, A, 2, cross_check=False).cohomology(1, None).to_json()
            raise err
        FM = FiniteModule.regular(R)
    h1 = _H1(R.field, raw, FM, lambda p: R(p))
    return CocycleSpace(B, A, rel, R, FM, rels, raw, h1)


# ----------------------------------------------------------------------------
# classes


class ExtensionClass:
    """A class in D^1(B/A; M), stored by its canonical cocycle."""

    def __init__(self, space: CocycleSpace, cocycle: Sequence):
        self.space = space
        self.cocycle = space.canonical(cocycle)

    def __eq__(self, other):
        return isinstance(other, ExtensionClass) and other.space is self.space and other.cocycle == self.cocycle

    def __hash__(self):
        return hash(self.cocycle)

    def __repr__(self):
        return f"ExtensionClass({list(self.coordinates)})"

    def __add__(self, other: "ExtensionClass") -> "ExtensionClass":
        F = self.space.field
        return ExtensionClass(self.space, [F.add(a, b) for a, b in zip(self.cocycle, other.cocycle)])

    def scale(self, c) -> "ExtensionClass":
        F = self.space.field
        return ExtensionClass(self.space, [F.mul(F(c), a) for a in self.cocycle])

    @property
    def coordinates(self) -> Tuple:
        return self.space.h1.coordinates(self.cocycle)

    @property
    def is_split(self) -> bool:
        return all(not x for x in self.cocycle)

    @property
    def values(self) -> List[Tuple]:
        """The value assigned to each relation, in coordinates of M."""
        return self.space.split(self.cocycle)

    @cached_property
    def representative(self) -> "SquareZeroExtension":
        return realize_extension(self)

    def to_json(self) -> Dict:
        return {
            "coordinates": [str(c) for c in self.coordinates],
            "split": self.is_split,
            "cocycle": {f.to_str(): [str(c) for c in v] for f, v in zip(self.space.relations, self.values)},
        }


def classify_extensions(B: Ring, A: Optional[Ring] = None, M: Union[None, str, FiniteModule] = "k",
                        cap: int = ENUMERATION_CAP) -> List[ExtensionClass]:
    """All classes of square-zero extensions of B by M over A, the split class first."""
    S = cocycle_space(B, A, M)
    F = S.field
    if not F.is_finite:
        err = InfiniteClassGroup(f"D^1 is a {S.dimension}-dimensional space over {F}")
        err.presentation = S.presentation()
        raise err
    q = F.characteristic
    if q ** S.dimension > cap:
        raise CombinatorialBlowup(f"{q ** S.dimension} classes exceed the cap {cap}")
    return [ExtensionClass(S, S.h1.combine(c)) for c in iproduct(range(q), repeat=S.dimension)]


def extension_generators(B: Ring, A: Optional[Ring] = None, M: Union[None, str, FiniteModule] = "k") -> List[ExtensionClass]:
    """A basis of D^1(B/A; M) as classes; works over any field."""
    S = cocycle_space(B, A, M)
    return [ExtensionClass(S, row) for row in S.h1.classes]


# ----------------------------------------------------------------------------
# realization


@dataclass
class SquareZeroExtension:
    """0 -> M -> E -> B -> 0, with a finite ring model when E is finite."""

    space: CocycleSpace
    ring: Optional[FiniteRing]
    projection: Optional[Callable[[Elem], Elem]]
    inclusion: Optional[Callable[[Elem], Elem]]
    presentation: Optional[FinitePresentation] = None
    structure: Dict[str, Elem] = field(default_factory=dict)
    label: str = ""

    @property
    def order(self) -> Optional[int]:
        return self.ring.order if self.ring is not None else None

    @property
    def characteristic(self) -> Optional[int]:
        return self.ring.characteristic if self.ring is not None else None

    def module_elements(self) -> List[Elem]:
        q = self.space.field.characteristic
        return [tuple(v) for v in iproduct(range(q), repeat=self.space.module.dim)]

    def checks(self) -> Dict[str, bool]:
        """Exactness, M^2 = 0 and ring axioms on the model; quotient and dimension checks on the presentation."""
        out: Dict[str, bool] = {}
        E = self.ring
        if E is not None:
            Bm = self.space.base_model
            Ms = self.module_elements()
            images = [self.inclusion(m) for m in Ms]
            out["ring_axioms"] = E.check_axioms()
            out["inclusion_injective"] = len(set(images)) == len(Ms)
            out["kernel_is_M"] = set(images) == {e for e in E.elements if self.projection(e) == Bm.zero}
            out["projection_surjective"] = {self.projection(e) for e in E.elements} == set(Bm.elements)
            pairs = list(iproduct(E.elements[:64], repeat=2))
            out["projection_is_ring_map"] = all(
                self.projection(E.mul(a, b)) == Bm.mul(self.projection(a), self.projection(b)) and
                self.projection(E.add(a, b)) == Bm.add(self.projection(a), self.projection(b)) for a, b in pairs)
            basis = [self.inclusion(tuple(int(i == j) for i in range(self.space.module.dim)))
                     for j in range(self.space.module.dim)]
            out["square_zero"] = all(E.mul(a, b) == E.zero for a in basis for b in basis)
        if self.presentation is not None and self.space.rel.coefficients.is_field:
            out.update(_presentation_checks(self))
        return out


def _evars(V: Sequence[str], g: int) -> List[str]:
    names, used = [], set(V)
    for i in range(g):
        n = f"e{i}"
        while n in used:
            n += "_"
        names.append(n)
        used.add(n)
    return names


def _lift_poly(p: MultiPoly, k: CoefficientRing, W: Sequence[str]) -> MultiPoly:
    return MultiPoly(k, p.vars, {e: k(int(c) if not k.is_field else c) for e, c in p.terms.items()}).embed(W)


def _module_element(space: CocycleSpace, coords: Sequence, evars: Sequence[str], k: CoefficientRing,
                    W: Sequence[str]) -> MultiPoly:
    FM = space.module
    out = MultiPoly.zero(k, W)
    nV = len(space.ring.vars)
    for c, (pos, e) in zip(coords, FM.basis):
        if c:
            exp = tuple(e) + tuple(int(i == pos) for i in range(len(evars)))
            out = out + MultiPoly.monomial(k, W, exp, k(int(c) if not k.is_field else c))
    return out


def _presentation_of(c: ExtensionClass) -> FinitePresentation:
    S = c.space
    rel, FM = S.rel, S.module
    k = rel.coefficients
    V = rel.all_vars
    ev = _evars(V, FM.ngens)
    W = tuple(V) + tuple(ev)
    evs = [MultiPoly.var(k, W, e) for e in ev]
    rels: List[MultiPoly] = []
    if FM.gb is not None:
        for u in FM.gb.basis:
            r = MultiPoly.zero(k, W)
            for ui, e in zip(u, evs):
                if ui:
                    r = r + _lift_poly(ui, k, W) * e
            if r:
                rels.append(r)
    for i in range(len(evs)):
        for j in range(i, len(evs)):
            rels.append(evs[i] * evs[j])
    if not k.is_field:
        p = S.field.characteristic
        rels.extend(e * p for e in evs)
    for f, v in zip(S.relations, c.values):
        rels.append(f.embed(W) - _module_element(S, v, ev, k, W))
    return over_ring(S.A, tuple(rel.new_vars) + tuple(ev), [r.to_str() for r in rels], f"E({_name(S.B)})")


def _presentation_checks(E: SquareZeroExtension) -> Dict[str, bool]:
    S = E.space
    P = E.presentation
    k = S.rel.coefficients
    W = P.all_vars
    ev = [v for v in W if v not in S.rel.all_vars]
    ideal = [g for g in P.ideal() if g]
    evp = [MultiPoly.var(k, W, e) for e in ev]
    mod_m = QuotientRing(k, W, ideal + evp)
    base = QuotientRing(k, W, [f.embed(W) for f in S.rel.full_ideal] + evp)
    Q = QuotientRing(k, W, ideal)
    out = {
        "quotient_is_B": [g.terms for g in mod_m.ideal] == [g.terms for g in base.ideal],
        "square_zero_presentation": all(Q.is_zero(a * b) for a in evp for b in evp),
    }
    if S.ring.dimension is not None:
        out["dimension_is_B_plus_M"] = Q.dimension == S.ring.dimension + S.module.dim
    return out


class _CofactorMap:
    """phi: I -> M, g = sum a_j f_j  |->  sum a_j m_j, for a cocycle (m_j)."""

    def __init__(self, space: CocycleSpace, cocycle: Sequence):
        self.space = space
        S = space
        self.values = [list(v) for v in S.split(cocycle)]
        rel = S.rel
        k = rel.coefficients
        V = rel.all_vars
        self.F = S.field
        if k.is_field:
            self.rho = None
            gens = [[f] for f in S.relations] + [[h.embed(V)] for h in rel.base_ideal if h]
            self.gb = SubmoduleGB(k, V, 1, gens, track=True) if gens else None
        else:
            if rel.base_ideal:
                raise UnsupportedBase("finite models over Z need A = Z")
            p = self.F.characteristic
            self.rho = next((j for j, f in enumerate(S.relations)
                             if f.is_constant() and abs(int(f.constant_term())) == p), None)
            if self.rho is None:
                raise UnsupportedBase("finite models over Z need p among the relations")
            self.sign = p // int(S.relations[self.rho].constant_term())
            self.others = [j for j in range(len(S.relations)) if j != self.rho]
            gens = [[S.relations[j].change_ring(self.F)] for j in self.others]
            gens = [g for g in gens if g[0]]
            self.gb = SubmoduleGB(self.F, V, 1, gens, track=True) if gens else None
            self.nonzero_others = [j for j in self.others if S.relations[j].change_ring(self.F)]

    def _act(self, a: MultiPoly, m: Sequence) -> List:
        S = self.space
        if not a:
            return [self.F.zero] * S.module.dim
        return la.mat_vec(self.F, S.module.action(S.ring(a)), m)

    def _sum(self, terms: List[List]) -> Tuple:
        F = self.F
        out = [F.zero] * self.space.module.dim
        for t in terms:
            out = [F.add(x, y) for x, y in zip(out, t)]
        return tuple(out)

    def __call__(self, g: MultiPoly) -> Tuple:
        S = self.space
        if not g:
            return tuple([self.F.zero] * S.module.dim)
        if self.rho is None:
            cof = self.gb.lift([g]) if self.gb is not None else None
            if cof is None:
                raise BadParameters(f"{g} is not in the ideal of relations")
            return self._sum([self._act(cof[j], self.values[j]) for j in range(len(S.relations))])
        gp = g.change_ring(self.F)
        terms = []
        rest = g
        if gp:
            cof = self.gb.lift([gp]) if self.gb is not None else None
            if cof is None:
                raise BadParameters(f"{g} is not in the ideal of relations")
            for a, j in zip(cof, self.nonzero_others):
                terms.append(self._act(a, self.values[j]))
                rest = rest - a.change_ring(ZZ) * S.relations[j]
        p = self.F.characteristic
        if any(int(c) % p for c in rest.terms.values()):
            raise BadParameters("cofactor lift failed modulo p")
        h = MultiPoly(ZZ, rest.vars, {e: int(c) // p for e, c in rest.terms.items()})
        terms.append(self._act(h.change_ring(self.F), [self.F.mul(self.sign % p, x) for x in self.values[self.rho]]))
        return self._sum(terms)


def _twisted_model(space: CocycleSpace, cocycle: Sequence) -> Optional[Tuple[FiniteRing, Callable, Callable, Dict]]:
    S = space
    Bm = S.base_model
    if Bm is None:
        return None
    R = S.ring
    q = S.field.characteristic
    nB, m = R.dimension, S.module.dim
    if q ** (nB + m) > MODEL_CAP:
        return None
    k = S.rel.coefficients
    V = R.vars
    basis = R.standard_basis
    phi = _CofactorMap(S, cocycle)

    def lift(b):
        return sum((MultiPoly.monomial(k, V, e, c) for e, c in zip(basis, b) if c), MultiPoly.zero(k, V))

    def act(b, mv):
        if not any(mv):
            return (0,) * m
        return tuple(int(x) for x in la.mat_vec(S.field, S.module.action(R(lift(b))), mv))

    add_cache: Dict = {}
    mul_cache: Dict = {}

    def badd(a, b):
        key = (a, b)
        if key not in add_cache:
            s = Bm.add(a, b)
            corr = phi(lift(a) + lift(b) - lift(s)) if not k.is_field else (0,) * m
            add_cache[key] = (s, tuple(int(x) for x in corr))
        return add_cache[key]

    def bmul(a, b):
        key = (a, b)
        if key not in mul_cache:
            s = Bm.mul(a, b)
            mul_cache[key] = (s, tuple(int(x) for x in phi(lift(a) * lift(b) - lift(s))))
        return mul_cache[key]

    def add(x, y):
        s, corr = badd(x[:nB], y[:nB])
        return s + tuple((a + b + c) % q for a, b, c in zip(x[nB:], y[nB:], corr))

    def mul(x, y):
        bx, by = x[:nB], y[:nB]
        s, corr = bmul(bx, by)
        t1, t2 = act(bx, y[nB:]), act(by, x[nB:])
        return s + tuple((a + b + c) % q for a, b, c in zip(t1, t2, corr))

    els = [b + mm for b in Bm.elements for mm in iproduct(range(q), repeat=m)]
    E = FiniteRing(els, add, mul, (0,) * (nB + m), Bm.one + (0,) * m)
    structure = {}
    for v in S.rel.base_vars:
        structure[v] = tuple(int(c) for c in R.coords(R.var(v))) + (0,) * m
    return E, (lambda e: e[:nB]), (lambda mv: (0,) * nB + tuple(mv)), structure


def realize_extension(c: ExtensionClass) -> SquareZeroExtension:
    """A presentation of the extension, plus its finite ring model when E is finite."""
    S = c.space
    pres = _presentation_of(c)
    model = _twisted_model(S, c.cocycle)
    if model is None:
        return SquareZeroExtension(S, None, None, None, pres, {}, pres.name)
    E, proj, inc, structure = model
    return SquareZeroExtension(S, E, proj, inc, pres, structure, pres.name)


def extension_class(E: SquareZeroExtension, choose: Optional[Callable[[List[Elem]], Elem]] = None) -> ExtensionClass:
    """The class of a finite extension: evaluate the relations at lifts of the generators."""
    S = E.space
    if E.ring is None:
        raise InfiniteUnderlyingSet("extension_class needs a finite ring model")
    R = S.ring
    ring = E.ring
    values = dict(E.structure)
    missing = [v for v in S.rel.base_vars if v not in values]
    if missing:
        raise BadParameters(f"no images for base variables {missing}")
    pick = choose or (lambda cands: cands[0])
    for v in S.rel.new_vars:
        target = tuple(int(x) for x in R.coords(R.var(v)))
        cands = [e for e in ring.elements if E.projection(e) == target]
        if not cands:
            raise BadParameters("the projection is not surjective")
        values[v] = pick(cands)
    table = {E.inclusion(m): m for m in E.module_elements()}
    cocycle = []
    for f in S.relations:
        w = ring.evaluate(f, values)
        if w not in table:
            raise BadParameters(f"relation {f} does not land in M")
        cocycle.extend(S.field(x) for x in table[w])
    return ExtensionClass(S, cocycle)


def baer_sum(E1: SquareZeroExtension, E2: SquareZeroExtension) -> SquareZeroExtension:
    """Fibre product over B modulo the antidiagonal copy of M."""
    if E1.space is not E2.space:
        raise BadParameters("Baer sums need extensions of the same B by the same M")
    if E1.ring is None or E2.ring is None:
        raise InfiniteUnderlyingSet("Baer sums are formed on finite models")
    R1, R2 = E1.ring, E2.ring
    Ms = E1.module_elements()
    anti = [(E1.inclusion(m), R2.neg(E2.inclusion(m))) for m in Ms]

    def canon(a, b):
        return min((R1.add(a, x), R2.add(b, y)) for x, y in anti)

    fibre = [(a, b) for a in R1.elements for b in R2.elements if E1.projection(a) == E2.projection(b)]
    els = sorted({canon(a, b) for a, b in fibre})
    index = {e: i for i, e in enumerate(els)}

    def add(x, y):
        return canon(R1.add(x[0], y[0]), R2.add(x[1], y[1]))

    def mul(x, y):
        return canon(R1.mul(x[0], y[0]), R2.mul(x[1], y[1]))

    flat = [a + b for a, b in els]
    n1 = len(R1.zero)
    unflat = lambda e: (e[:n1], e[n1:])
    ring = FiniteRing(flat, lambda x, y: (lambda r: r[0] + r[1])(add(unflat(x), unflat(y))),
                      lambda x, y: (lambda r: r[0] + r[1])(mul(unflat(x), unflat(y))),
                      (lambda r: r[0] + r[1])(canon(R1.zero, R2.zero)),
                      (lambda r: r[0] + r[1])(canon(R1.one, R2.one)), "Baer sum")
    proj = lambda e: E1.projection(e[:n1])
    inc = lambda m: (lambda r: r[0] + r[1])(canon(E1.inclusion(m), R2.zero))
    structure = {v: (lambda r: r[0] + r[1])(canon(E1.structure[v], E2.structure[v])) for v in E1.structure}
    return SquareZeroExtension(E1.space, ring, proj, inc, None, structure, "Baer sum")


# ----------------------------------------------------------------------------
# lifting maps


class _PulledBack:
    """M viewed as an A-module through A -> B."""

    def __init__(self, space: CocycleSpace, images: Dict[str, MultiPoly]):
        self.space = space
        self.ring = SimpleNamespace(field=space.field)
        self.dim = space.module.dim
        self.images = images

    def action(self, p: MultiPoly) -> List[List]:
        R = self.space.ring
        q = p.change_ring(R.field)
        q = q.subs(self.images, R.vars) if q.vars else q.embed(R.vars)
        return self.space.module.action(R(q))


@dataclass
class MapObstruction:
    """Obstruction in D^1(A/base; M) to lifting A -> B through E -> B."""

    cocycle: Tuple
    zero: bool
    group_dimension: int
    lift: Optional[Dict[str, Elem]]

    def to_json(self) -> Dict:
        return {
            "obstruction": [str(c) for c in self.cocycle],
            "zero": self.zero,
            "group_dimension": self.group_dimension,
            "lift": None if self.lift is None else {v: list(e) for v, e in sorted(self.lift.items())},
        }


def map_obstruction(A_alg: Ring, E: SquareZeroExtension, images: Dict[str, Sequence[int]],
                    base: Optional[Ring] = None) -> MapObstruction:
    """Obstruction to lifting the map A -> B (variables to B-coordinates) through E."""
    if E.ring is None:
        raise InfiniteUnderlyingSet("lifting problems are solved on finite models")
    if base is None:
        base = A_alg.coefficients if isinstance(A_alg, FinitePresentation) else A_alg
    S = E.space
    R = S.ring
    basis = R.standard_basis
    relA, raw, rels = _relation_complex(A_alg, base)
    if relA.base_vars:
        raise UnsupportedBase("lifting problems are supported over a coefficient ring")
    F = S.field
    img_polys = {}
    for v in relA.new_vars:
        b = images[v]
        img_polys[v] = sum((MultiPoly.monomial(F, R.vars, e, c) for e, c in zip(basis, b) if c), R.zero)
    module = _PulledBack(S, img_polys)
    h1 = _H1(F, raw, module, lambda p: p)
    ring = E.ring
    lifts = {}
    for v in relA.new_vars:
        target = tuple(images[v])
        lifts[v] = next(e for e in ring.elements if E.projection(e) == target)
    table = {E.inclusion(m): m for m in E.module_elements()}
    values = []
    for f in rels:
        w = ring.evaluate(f, lifts)
        if w not in table:
            raise BadParameters("the map does not respect the relations of A")
        values.extend(F(x) for x in table[w])
    if not h1.is_cocycle(values):
        raise SimplicialIdentityError("obstruction vector is not a cocycle")
    canon = tuple(h1.reduce(values))
    zero = all(not x for x in canon)
    lift = None
    if zero:
        n = h1.coboundary([F.neg(x) for x in values])
        m = module.dim
        lift = {}
        for i, v in enumerate(relA.new_vars):
            corr = E.inclusion(tuple(int(x) for x in n[i * m:(i + 1) * m]))
            lift[v] = ring.add(lifts[v], corr)
        if any(ring.evaluate(f, lift) != ring.zero for f in rels):
            raise SimplicialIdentityError("corrected lift does not satisfy the relations")
    return MapObstruction(canon, zero, h1.dimension, lift)


# ----------------------------------------------------------------------------
# deformations


@dataclass
class DeformationReport:
    obstruction_zero: bool
    obstruction: List[List[str]]
    groups: Dict[int, Optional[HomologyReport]]
    deformation: Optional[Ring]
    lifted_relations: List[str]
    flat_verified: Optional[bool]
    method: str

    @property
    def unique(self) -> Optional[bool]:
        g = self.groups.get(1)
        return None if g is None else (g.zero if self.obstruction_zero else None)

    def to_json(self) -> Dict:
        return {
            "obstruction_zero": self.obstruction_zero,
            "obstruction": self.obstruction,
            "groups": {f"D{i}": (None if g is None else g.to_json()) for i, g in sorted(self.groups.items())},
            "unique": self.unique,
            "deformation": None if self.deformation is None else str(self.deformation),
            "lifted_relations": self.lifted_relations,
            "flat_verified": self.flat_verified,
            "method": self.method,
        }


def deformation_obstruction(At: Ring, ideal: Sequence[str], new_vars: Sequence[str] = (),
                            relations: Sequence[str] = ()) -> DeformationReport:
    """Deform B = (At/I)[new_vars]/(relations) to a flat At-algebra.

    The relation strings are read in At[new_vars] and serve as the initial lifts.
    """
    if isinstance(At, CoefficientRing) and At.kind == "Zmod" and not At.is_field:
        return _deform_mod_prime_power(At, ideal, new_vars, relations)
    k = At if isinstance(At, CoefficientRing) else At.coefficients
    if not k.is_field:
        raise UnsupportedBase("deformations are computed over fields or over Z/p^n")
    return _deform_over_field(At, k, ideal, new_vars, relations)


def _deform_over_field(At: Ring, k: CoefficientRing, ideal: Sequence[str], new_vars: Sequence[str],
                       relations: Sequence[str]) -> DeformationReport:
    T = () if isinstance(At, CoefficientRing) else tuple(At.all_vars)
    V = T + tuple(new_vars)
    At_ideal = [] if isinstance(At, CoefficientRing) else [g.embed(V) for g in At.ideal() if g]
    iota = [parse_poly(s, k, T).embed(V) for s in ideal]
    iota = [g for g in iota if g]
    for a in range(len(iota)):
        for b in range(a, len(iota)):
            sq = iota[a] * iota[b]
            if sq and not (At_ideal and ideal_contains(At_ideal, sq)):
                raise NotSquareZero(f"({iota[a]})*({iota[b]}) is not zero in the thickening")
    lifts = [parse_poly(s, k, V) for s in relations]
    base_rels = [g.to_str() for g in At_ideal + iota]
    A_flat = over_ring(k, T, base_rels, "A") if T else k
    if T:
        B = over_ring(A_flat, new_vars, relations, "B")
    else:
        B = over_ring(k, new_vars, relations, "B")
    rel = relative(B, A_flat)
    P, _ = resolve(B, A_flat, 3, method="compute")
    nz = [i for i, f in enumerate(rel.relations) if not f.is_zero()]
    stage1 = P.stage_generators(1)
    subs = {f"{g.name}@01": lifts[nz[j]] for j, g in enumerate(stage1)}
    Q = QuotientRing(k, V, At_ideal)
    obs, cols = [], []
    stage2 = P.stage_generators(2)
    lin = [P.linear_part(g.cycle, 1) for g in stage2]
    L1 = P.level_vars(1)
    for g in stage2:
        z = g.cycle.embed(L1)
        o = Q.reduce(z.subs(subs, V))
        if o and not ideal_contains(At_ideal + iota, o):
            raise SimplicialIdentityError("lifted cycle does not vanish modulo I")
        obs.append(o)
    n2 = len(stage2)
    zero = MultiPoly.zero(k, V)
    for j, g1 in enumerate(stage1):
        for a in iota:
            cols.append([Q.reduce(l.get(g1.name, zero).embed(V) * a) for l in lin])
    denom = []
    for a in iota:
        for f in lifts:
            for i in range(n2):
                v = [zero] * n2
                v[i] = Q.reduce(a * f)
                denom.append(v)
    ob_zero, cof = True, None
    fixed = list(lifts)
    if n2 and any(obs):
        gb = SubmoduleGB(k, V, n2, cols + denom + Q.ideal_vectors(n2), track=True)
        cof = gb.lift(obs)
        ob_zero = cof is not None
        if ob_zero:
            for j, g1 in enumerate(stage1):
                h = zero
                for ai, a in enumerate(iota):
                    h = h + cof[j * len(iota) + ai] * a
                fixed[nz[j]] = Q.reduce(fixed[nz[j]] - h)
            subs2 = {f"{g.name}@01": fixed[nz[j]] for j, g in enumerate(stage1)}
            check = SubmoduleGB(k, V, n2, denom + Q.ideal_vectors(n2)) if (denom or Q.ideal) else None
            after = [Q.reduce(g.cycle.embed(L1).subs(subs2, V)) for g in stage2]
            if any(after) and (check is None or not check.contains(after)):
                raise SimplicialIdentityError("corrected lifts still carry an obstruction")
    R_B = target_ring(rel)
    J = subquotient(Q, [[a] for a in iota], [[a * f] for a in iota for f in lifts], 1) if iota else None
    groups: Dict[int, Optional[HomologyReport]] = {0: None, 1: None, 2: None}
    TB = cotangent(B, A_flat, 2, cross_check=False)
    if J is None or J.ngens == 0:
        groups = {i: HomologyReport(i, 0, (), None, True) for i in range(3)}
    elif J.dimension() is not None:
        FM = FiniteModule(R_B, J.ngens, J.relations, name="J")
        groups = {i: TB.cohomology(i, FM) for i in range(3)}
    elif J.ngens == 1 and all(R_B.is_zero(r[0]) for r in J.relations):
        groups = {i: TB.cohomology(i, None) for i in range(3)}
    deformation, flat = None, None
    strs = [f.to_str() for f in fixed]
    if ob_zero:
        deformation = over_ring(At, new_vars, strs, "B~") if not isinstance(At, CoefficientRing) else \
            over_ring(k, new_vars, strs, "B~")
        dim_def = QuotientRing(k, V, At_ideal + fixed).dimension
        dim_j = 0 if J is None else J.dimension()
        if dim_def is not None and R_B.dimension is not None and dim_j is not None:
            flat = dim_def == R_B.dimension + dim_j
    return DeformationReport(ob_zero, [[o.to_str()] for o in obs], groups, deformation, strs, flat,
                             "cycle lifting over a field")


def _deform_mod_prime_power(At: CoefficientRing, ideal: Sequence[str], new_vars: Sequence[str],
                            relations: Sequence[str]) -> DeformationReport:
    N = At.modulus
    pp = prime_power(N)
    if pp is None:
        raise UnsupportedBase("thickenings of Z/m need m to be a prime power")
    p, _ = pp
    gens = [int(s) % N for s in ideal]
    for a in gens:
        for b in gens:
            if (a * b) % N:
                raise NotSquareZero(f"{a}*{b} is not zero modulo {N}")
    from math import gcd
    g = N
    for a in gens:
        g = gcd(g, a)
    if N // g != p:
        raise UnsupportedBase("the ideal must be p^(n-1) Z/p^n, a copy of F_p")
    rels = [parse_poly(s, ZZ, tuple(new_vars)) for s in relations]
    if rels and (len(new_vars) != 1 or len(rels) != 1):
        raise UnsupportedBase("over Z/p^n only one monic relation in one variable is supported")
    flat = True
    for f in rels:
        d = f.total_degree()
        lead = f.terms.get((d,), 0)
        flat = d >= 1 and int(lead) % p != 0
        if not flat:
            raise UnsupportedBase("the relation must have unit leading coefficient")
    Fp = GF(p)
    # flat base change: L_{B/A} tensor B_1 is L_{B_1/F_p}, and J = I (x) B is B_1
    B1 = over_ring(Fp, new_vars, [f.change_ring(Fp).to_str() for f in rels], "B1")
    T1 = cotangent(B1, Fp, 2, cross_check=False)
    R1 = target_ring(relative(B1, Fp))
    M: Union[None, FiniteModule] = FiniteModule.regular(R1) if R1.dimension is not None else None
    groups = {i: T1.cohomology(i, M) for i in range(3)}
    if T1.raw.ranks[2:] and any(T1.raw.ranks[2:]):
        raise UnsupportedBase("the reduction is not a regular quotient")
    strs = [f.to_str() for f in rels]
    deformation = over_ring(At, new_vars, strs, "B~") if new_vars else At
    return DeformationReport(True, [], groups, deformation, strs, flat, "regular sequence, flat base change to F_p")


# ----------------------------------------------------------------------------
# Witt vectors


WITT_MAX_Q = 64
WITT_MAX_N = 4


def _irreducible(p: int, e: int) -> List[int]:
    """The first monic irreducible of degree e over F_p (coefficients from the constant term up)."""
    for tail in iproduct(range(p), repeat=e):
        g = list(reversed(tail)) + [1]
        if g[0] == 0 and e > 1:
            continue
        if FiniteRing.monic_extension(p, g).is_field():
            return g
    raise BadParameters(f"no irreducible polynomial of degree {e} over F_{p}")


def _poly_str(g: Sequence[int]) -> str:
    terms = []
    for i in range(len(g) - 1, -1, -1):
        c = g[i]
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(terms) or "0"


@dataclass
class WittVectors:
    q: int
    p: int
    e: int
    n: int
    modulus: Optional[List[int]]
    presentation: Ring
    steps: List[DeformationReport]
    flat: bool
    reduces_to_field: bool

    @property
    def unobstructed(self) -> bool:
        return all(s.obstruction_zero and s.groups[2] is not None and s.groups[2].zero for s in self.steps)

    @property
    def unique(self) -> bool:
        return all(s.unique for s in self.steps)

    def ring(self) -> FiniteRing:
        if self.modulus is None:
            return FiniteRing.integers_mod(self.p ** self.n)
        return FiniteRing.monic_extension(self.p ** self.n, self.modulus, f"W_{self.n}(F_{self.q})")

    def to_json(self) -> Dict:
        return {
            "q": self.q,
            "n": self.n,
            "presentation": str(self.presentation),
            "modulus": None if self.modulus is None else _poly_str(self.modulus),
            "steps": [s.to_json() for s in self.steps],
            "flat": self.flat,
            "reduces_to_field": self.reduces_to_field,
            "unobstructed": self.unobstructed,
            "unique": self.unique,
        }


def witt_vectors(q: int, n: int) -> WittVectors:
    """W_n(F_q) over Z/p^n, lifted one step at a time through square-zero thickenings."""
    pp = prime_power(q)
    if pp is None:
        raise BadParameters(f"{q} is not a prime power")
    if n < 1:
        raise BadParameters("n must be at least 1")
    if q > WITT_MAX_Q or n > WITT_MAX_N:
        raise ScaleCap(f"Witt vectors are capped at q <= {WITT_MAX_Q}, n <= {WITT_MAX_N}")
    p, e = pp
    g = None if e == 1 else _irreducible(p, e)
    vars_ = [] if g is None else ["x"]
    rels = [] if g is None else [_poly_str(g)]
    steps = []
    for m in range(1, n):
        rep = deformation_obstruction(Zmod(p ** (m + 1)), [str(p ** m)], vars_, rels)
        if not rep.obstruction_zero:
            raise SimplicialIdentityError(f"lifting step {m} -> {m + 1} is obstructed")
        steps.append(rep)
    base = Zmod(p ** n) if n > 1 else GF(p)
    pres = base if g is None else over_ring(base, ["x"], rels, f"W{n}(F{q})")
    # free with basis 1, x, .., x^(e-1) because the modulus is monic
    flat = g is None or g[-1] == 1
    residue = FiniteRing.monic_extension(p, g if g is not None else [1])
    reduces = residue.is_field() and residue.order == q
    return WittVectors(q, p, e, n, g, pres, steps, flat, reduces)
