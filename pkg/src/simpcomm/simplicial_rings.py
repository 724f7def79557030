"""Truncated free simplicial algebras, resolutions by cycle killing, homotopy rings.

A resolution is built in stages. Stage 0 is the constant algebra on the
presentation variables; a generator of stage s >= 1 kills a class of pi_{s-1}
and contributes one variable x_t at level n for every surjection t: [n] -> [s].
A simplicial operator theta acts by factoring t o theta = mu o eps: the result
is x_eps when mu is the identity, eps^*(z) when mu is the coface delta_0
(z being the killed cycle), and 0 otherwise.

Homotopy groups are computed on the normalized complex (the quotient by
degenerate monomials) of the piece of weight <= s+1, where a stage-s generator
has weight s. On the associated graded of this filtration each weight-w layer
is a tensor product of symmetric powers of Dold-Kan modules, whose homotopy sits
in degree exactly w, so pi_s of the weight <= s+1 piece agrees with pi_s of the
whole algebra.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .chains import HomologyReport, columns, module_report
from .coeffs import CoefficientRing, GF
from .errors import (CombinatorialBlowup, InfiniteUnderlyingSet, NonComputableBase, SimplicialIdentityError,
                     TruncationExceeded, TruncationTooDeep, UnsupportedProduct)
from .groebner import groebner_basis, normal_form
from .poly import MultiPoly
from .presentation import FinitePresentation, Relative, relative
from .qring import ModulePresentationData, QuotientRing, kernel_generators, subquotient
from .regular import constant_prime, is_regular_sequence
from .simplicial import SimplexMap, factorize, surjections
from .snf import invariant_factors
from .tor import tor

MAX_N = 3

Ring = Union[CoefficientRing, FinitePresentation]


# ----------------------------------------------------------------------------
# generic truncated free simplicial algebras


class TruncatedFreeSimplicialAlgebra:
    """Levels 0..N, level n the polynomial algebra over A on the generator names of X_n.

    Faces are algebra maps given on generators; degeneracies send generators to
    generators. Subclasses provide generators, face_image and degeneracy_image.
    """

    def __init__(self, coefficients: CoefficientRing, base_vars: Sequence[str], base_ideal: Sequence[MultiPoly], N: int):
        self.coefficients = coefficients
        self.base_vars = tuple(base_vars)
        self.base_ideal = [g for g in base_ideal if not g.is_zero()]
        self.N = N
        self._gb_cache: Dict[Tuple[str, ...], List[MultiPoly]] = {}

    # interface
    def generators(self, n: int) -> List[str]:
        raise NotImplementedError

    def face_image(self, n: int, i: int, name: str) -> MultiPoly:
        raise NotImplementedError

    def degeneracy_image(self, n: int, j: int, name: str) -> str:
        raise NotImplementedError

    def is_fresh(self, n: int, name: str) -> bool:
        if n == 0:
            return True
        return not any(self.degeneracy_image(n - 1, j, g) == name
                       for j in range(n) for g in self.generators(n - 1))

    # derived structure
    def level_vars(self, n: int) -> Tuple[str, ...]:
        return self.base_vars + tuple(self.generators(n))

    @property
    def generator_sets(self) -> List[List[str]]:
        return [self.generators(n) for n in range(self.N + 1)]

    @property
    def face_images(self) -> Dict[Tuple[int, int, str], MultiPoly]:
        return {(n, i, g): self.face_image(n, i, g)
                for n in range(1, self.N + 1) for i in range(n + 1) for g in self.generators(n)}

    def reduce(self, p: MultiPoly) -> MultiPoly:
        if not self.base_ideal or p.is_zero():
            return p
        gb = self._gb_cache.get(p.vars)
        if gb is None:
            base = groebner_basis([g.change_ring(self.coefficients) for g in self.base_ideal])
            gb = [g.embed(p.vars) for g in base]
            self._gb_cache[p.vars] = gb
        return normal_form(p, gb)

    def face(self, n: int, i: int, p: MultiPoly) -> MultiPoly:
        imgs = {g: self.face_image(n, i, g) for g in self.generators(n)}
        return self.reduce(p.subs(imgs, self.level_vars(n - 1)))

    def degeneracy(self, n: int, j: int, p: MultiPoly) -> MultiPoly:
        tv = self.level_vars(n + 1)
        imgs = {g: MultiPoly.var(self.coefficients, tv, self.degeneracy_image(n, j, g)) for g in self.generators(n)}
        return p.subs(imgs, tv)

    def var(self, n: int, name: str) -> MultiPoly:
        return MultiPoly.var(self.coefficients, self.level_vars(n), name)

    def check_identities(self) -> None:
        """Verify the simplicial identities as algebra maps on every generator."""
        N = self.N
        for n in range(N + 1):
            for g in self.generators(n):
                x = self.var(n, g)
                for i in range(n + 1):
                    for j in range(i + 1, n + 1):
                        if n >= 2 and self.face(n - 1, i, self.face(n, j, x)) != self.face(n - 1, j - 1, self.face(n, i, x)):
                            raise SimplicialIdentityError(f"d{i}d{j} != d{j-1}d{i} on {g} at level {n}")
                if n + 1 <= N:
                    for j in range(n + 1):
                        y = self.degeneracy(n, j, x)
                        for i in range(n + 2):
                            lhs = self.face(n + 1, i, y)
                            if i < j:
                                rhs = self.degeneracy(n - 1, j - 1, self.face(n, i, x))
                            elif i in (j, j + 1):
                                rhs = x
                            else:
                                rhs = self.degeneracy(n - 1, j, self.face(n, i - 1, x))
                            if self.reduce(lhs) != self.reduce(rhs):
                                raise SimplicialIdentityError(f"d{i}s{j} fails on {g} at level {n}")
                    if n + 2 <= N:
                        for i in range(n + 1):
                            for j in range(i, n + 1):
                                a = self.degeneracy(n + 1, i, self.degeneracy(n, j, x))
                                b = self.degeneracy(n + 1, j + 1, self.degeneracy(n, i, x))
                                if a != b:
                                    raise SimplicialIdentityError(f"s{i}s{j} fails on {g} at level {n}")

    def to_json(self) -> Dict:
        out = {"N": self.N, "coefficients": str(self.coefficients), "base_vars": list(self.base_vars), "levels": []}
        for n in range(self.N + 1):
            lv = {"generators": self.generators(n),
                  "fresh": [g for g in self.generators(n) if self.is_fresh(n, g)]}
            if n:
                lv["faces"] = {g: [self.face_image(n, i, g).to_str() for i in range(n + 1)] for g in self.generators(n)}
            out["levels"].append(lv)
        return out


# ----------------------------------------------------------------------------
# staged algebras: the resolution objects


@dataclass
class Generator:
    name: str
    stage: int
    cycle: Optional[MultiPoly] = None  # lives at level stage-1 with all faces zero
    part: int = 0


def _tstr(t: SimplexMap) -> str:
    return "".join(str(v) for v in t.values)


class StagedAlgebra(TruncatedFreeSimplicialAlgebra):
    """A free simplicial algebra whose generators are adjoined stage by stage."""

    def __init__(self, coefficients, base_vars, base_ideal, N: int):
        if N > MAX_N:
            raise TruncationTooDeep(f"truncation {N} exceeds {MAX_N}")
        super().__init__(coefficients, base_vars, base_ideal, N)
        self.gens: List[Generator] = []
        self._cache: Dict = {}

    # building
    def add(self, gen: Generator) -> None:
        if gen.stage > self.N:
            return
        if gen.stage >= 1:
            gen.cycle = self.reduce(gen.cycle.embed(self.level_vars(gen.stage - 1)))
        self.gens.append(gen)
        self._cache.clear()

    @property
    def stage0(self) -> List[str]:
        return [g.name for g in self.gens if g.stage == 0]

    @property
    def coeff_vars(self) -> Tuple[str, ...]:
        return self.base_vars + tuple(self.stage0)

    def stage_generators(self, s: int) -> List[Generator]:
        return [g for g in self.gens if g.stage == s]

    def level_info(self, n: int) -> List[Tuple[str, Generator, SimplexMap]]:
        key = ("info", n)
        if key not in self._cache:
            out = []
            for g in self.gens:
                if 1 <= g.stage <= n:
                    for t in surjections(n, g.stage):
                        out.append((f"{g.name}@{_tstr(t)}", g, t))
            self._cache[key] = out
        return self._cache[key]

    def generators(self, n: int) -> List[str]:
        return list(self.stage0) + [name for name, _, _ in self.level_info(n)]

    def _lookup(self, n: int) -> Dict[str, Tuple[Generator, SimplexMap]]:
        key = ("lookup", n)
        if key not in self._cache:
            self._cache[key] = {name: (g, t) for name, g, t in self.level_info(n)}
        return self._cache[key]

    def operator_image(self, theta: SimplexMap, name: str) -> MultiPoly:
        """theta^* of a level-(theta.target) generator, at level theta.source."""
        key = ("op", theta, name)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        m = theta.source
        tv = self.level_vars(m)
        info = self._lookup(theta.target).get(name)
        if info is None:
            res = MultiPoly.var(self.coefficients, tv, name)
        else:
            g, t = info
            eps, mu = factorize(t.compose(theta))
            if mu.is_identity:
                res = MultiPoly.var(self.coefficients, tv, f"{g.name}@{_tstr(eps)}")
            elif mu == SimplexMap.coface(g.stage, 0):
                res = self.operator(eps, g.cycle)
            else:
                res = MultiPoly.zero(self.coefficients, tv)
        self._cache[key] = res
        return res

    def operator(self, theta: SimplexMap, p: MultiPoly) -> MultiPoly:
        if theta.is_identity:
            return p
        imgs = {name: self.operator_image(theta, name) for name, _, _ in self.level_info(theta.target)}
        return self.reduce(p.subs(imgs, self.level_vars(theta.source)))

    def face_image(self, n: int, i: int, name: str) -> MultiPoly:
        return self.operator_image(SimplexMap.coface(n, i), name)

    def degeneracy_image(self, n: int, j: int, name: str) -> str:
        info = self._lookup(n).get(name)
        if info is None:
            return name
        g, t = info
        return f"{g.name}@{_tstr(t.compose(SimplexMap.codegeneracy(n, j)))}"

    def is_fresh(self, n: int, name: str) -> bool:
        info = self._lookup(n).get(name)
        if info is None:
            return n == 0
        return info[1].is_identity

    def face(self, n: int, i: int, p: MultiPoly) -> MultiPoly:
        return self.operator(SimplexMap.coface(n, i), p)

    def degeneracy(self, n: int, j: int, p: MultiPoly) -> MultiPoly:
        return self.operator(SimplexMap.codegeneracy(n, j), p)

    # homotopy groups on the weight filtration
    @property
    def ground(self) -> QuotientRing:
        """A[stage-0 variables] as a quotient ring over the coefficient field."""
        key = ("ground",)
        if key not in self._cache:
            self._cache[key] = QuotientRing(self.coefficients, self.coeff_vars,
                                            [g.embed(self.coeff_vars) for g in self.base_ideal])
        return self._cache[key]

    def nondegenerate_basis(self, n: int, D: int) -> List[Tuple[int, ...]]:
        """Exponent vectors (over the stage >= 1 variables of level n) of nondegenerate monomials of weight <= D."""
        key = ("basis", n, D)
        if key in self._cache:
            return self._cache[key]
        info = self.level_info(n)
        weights = [g.stage for _, g, _ in info]
        degen = [frozenset(j for j in range(n) if t.values[j] == t.values[j + 1]) for _, _, t in info]
        out: List[Tuple[int, ...]] = []
        full = frozenset(range(n))

        def rec(i, left, exp, common):
            if i == len(info):
                if not common:
                    out.append(tuple(exp))
                return
            w = weights[i]
            for e in range(left // w + 1):
                exp.append(e)
                rec(i + 1, left - e * w, exp, common & degen[i] if e else common)
                exp.pop()

        rec(0, D, [], full)
        out.sort(key=lambda e: (sum(a * w for a, w in zip(e, weights)), tuple(-a for a in e)))
        self._cache[key] = out
        return out

    def _monomial(self, n: int, exp: Tuple[int, ...]) -> MultiPoly:
        c = len(self.coeff_vars)
        return MultiPoly.monomial(self.coefficients, self.level_vars(n), (0,) * c + tuple(exp))

    def moore_matrix(self, n: int, D: int) -> List[List[MultiPoly]]:
        """sum (-1)^i d_i from level n to level n-1 on the quotient by degenerate monomials, over the ground ring."""
        key = ("moore", n, D)
        if key in self._cache:
            return self._cache[key]
        R = self.ground
        cols = self.nondegenerate_basis(n, D)
        rows = self.nondegenerate_basis(n - 1, D)
        index = {e: r for r, e in enumerate(rows)}
        c = len(self.coeff_vars)
        M = [[R.zero for _ in cols] for _ in rows]
        faces = [SimplexMap.coface(n, i) for i in range(n + 1)]
        for j, e in enumerate(cols):
            mono = self._monomial(n, e)
            total = MultiPoly.zero(self.coefficients, self.level_vars(n - 1))
            for i, th in enumerate(faces):
                img = self.operator(th, mono)
                total = total + img if i % 2 == 0 else total - img
            total = self.reduce(total)
            for ex, coef in total.terms.items():
                r = index.get(ex[c:])
                if r is None:
                    continue  # degenerate
                M[r][j] = M[r][j] + MultiPoly.monomial(R.field, R.vars, ex[:c], coef)
        M = [[R.reduce(p) for p in row] for row in M]
        self._cache[key] = M
        return M

    def homotopy_module(self, s: int) -> Tuple[ModulePresentationData, List[Tuple[int, ...]]]:
        """pi_s as a module over the ground ring, with generators as cycles on the normalized basis."""
        if not self.coefficients.is_field:
            raise NonComputableBase("homotopy computations need field coefficients")
        if s + 1 > self.N:
            raise TruncationExceeded(f"pi_{s} needs level {s + 1} > {self.N}")
        D = s + 1
        R = self.ground
        basis = self.nondegenerate_basis(s, D)
        n = len(basis)
        if s == 0:
            ker = [[R.one if a == b else R.zero for a in range(n)] for b in range(n)]
        else:
            lo = self.nondegenerate_basis(s - 1, D)
            ker = kernel_generators(R, self.moore_matrix(s, D), len(lo), n)
        hi = self.nondegenerate_basis(s + 1, D)
        im = columns(self.moore_matrix(s + 1, D), len(hi)) if hi else []
        return subquotient(R, ker, im, n), basis

    def cycle_polynomial(self, s: int, vec: Sequence[MultiPoly], basis) -> MultiPoly:
        tv = self.level_vars(s)
        p = MultiPoly.zero(self.coefficients, tv)
        for c, e in zip(vec, basis):
            if not c.is_zero():
                p = p + c.embed(tv) * self._monomial(s, e)
        return self.reduce(p)

    def normalize(self, p: MultiPoly, n: int) -> MultiPoly:
        """Project onto the intersection of ker d_1..d_n: apply (1 - s_j d_{j+1}) for j = n-1..0."""
        for j in range(n - 1, -1, -1):
            p = self.reduce(p - self.degeneracy(n - 1, j, self.face(n, j + 1, p)))
        return p

    def linear_part(self, p: MultiPoly, n: int) -> Dict[str, MultiPoly]:
        """Coefficients (over the ground ring) of the fresh level-n variables in the part of p linear in generators."""
        c = len(self.coeff_vars)
        info = self.level_info(n)
        R = self.ground
        out: Dict[str, MultiPoly] = {}
        for ex, coef in p.terms.items():
            ge = ex[c:]
            if sum(ge) != 1:
                continue
            k = ge.index(1)
            name, g, t = info[k]
            if not t.is_identity:
                continue
            out[g.name] = out.get(g.name, R.zero) + MultiPoly.monomial(R.field, R.vars, ex[:c], coef)
        return out


# ----------------------------------------------------------------------------
# resolutions


@dataclass
class ResolutionCertificate:
    target: str
    stages: List[Tuple[int, List[str]]]
    verified_through: int
    method: str
    weight_bounds: Dict[int, int] = field(default_factory=dict)
    pi0_matches: bool = True

    def to_json(self) -> Dict:
        return {
            "target": self.target,
            "method": self.method,
            "stages": [{"degree": i, "killed": list(z)} for i, z in self.stages],
            "verified_through": self.verified_through,
            "weight_bounds": {str(k): v for k, v in sorted(self.weight_bounds.items())},
            "pi0_matches": self.pi0_matches,
        }


def _shuffle_combine(rng: Optional[random.Random], items: List, k: CoefficientRing, add, scale) -> List:
    """Reorder a generating list and apply unimodular changes; the span is unchanged."""
    if rng is None or len(items) == 0:
        return list(items)
    items = list(items)
    rng.shuffle(items)
    if k.is_field:
        nonzero = [c for c in range(1, min(k.characteristic or 7, 7))] or [1]
        items = [scale(x, rng.choice(nonzero)) for x in items]
        if len(items) > 1:
            a, b = rng.sample(range(len(items)), 2)
            items[a] = add(items[a], scale(items[b], rng.choice(nonzero)))
    return items


def _name(B: Ring) -> str:
    return getattr(B, "name", "") or str(B)


def resolve(B: Ring, A: Optional[Ring] = None, N: int = 3, seed: Optional[int] = None,
            method: str = "auto") -> Tuple[StagedAlgebra, ResolutionCertificate]:
    """A free simplicial A-algebra P with levels 0..N and pi_0 = B, pi_i = 0 for 0 < i < N.

    method "auto" certifies Koszul-regular relation sequences directly; "compute"
    always computes the homotopy groups of each stage.
    """
    if N > MAX_N:
        raise TruncationTooDeep(f"truncation {N} exceeds {MAX_N}")
    rel = relative(B, A)
    P = StagedAlgebra(rel.coefficients, rel.base_vars, rel.base_ideal, N)
    cert = extend(P, rel.new_vars, list(rel.relations), seed=seed, method=method, part=0)
    cert.target = _name(B)
    return P, cert


def extend(P: StagedAlgebra, new_vars: Sequence[str], relations: Sequence[MultiPoly], seed: Optional[int] = None,
           method: str = "auto", part: int = 0) -> ResolutionCertificate:
    """Adjoin variables and kill relations, then kill pi_1..pi_{N-1} of the result. Mutates P."""
    k = P.coefficients
    rng = random.Random(seed) if seed is not None else None
    for v in new_vars:
        P.add(Generator(v, 0, part=part))
    tv0 = P.level_vars(0)
    rels = [f.embed(tv0) for f in relations if not f.is_zero()]
    rels = _shuffle_combine(rng, rels, k, lambda a, b: a + b, lambda a, c: a.scale(c))
    tag = "abcdefgh"[part] if part < 8 else str(part)
    if P.N >= 1:
        for j, f in enumerate(rels):
            P.add(Generator(f"{tag}1_{j}", 1, f, part))
    stages: List[Tuple[int, List[str]]] = [(0, [f.to_str() for f in rels])]
    all_stage1 = [g.cycle for g in P.stage_generators(1)]
    only_stage1 = all(g.stage <= 1 for g in P.gens)
    regular = None
    if only_stage1 and method == "auto":
        regular = is_regular_sequence(k, P.coeff_vars, P.base_ideal, all_stage1)
    if regular:
        return ResolutionCertificate("", stages, P.N - 1, "regular-sequence")
    if not k.is_field:
        raise NonComputableBase(f"over {k} only regular relation sequences are resolved")
    bounds: Dict[int, int] = {}
    for s in range(1, P.N):
        pres, basis = P.homotopy_module(s)
        bounds[s] = s + 1
        killed: List[str] = []
        if not pres.is_zero():
            R = P.ground
            vecs = _shuffle_combine(rng, list(pres.generator_images), k,
                                    lambda a, b: [x + y for x, y in zip(a, b)],
                                    lambda a, c: [x.scale(c) for x in a])
            start = len(P.stage_generators(s + 1))
            for j, vec in enumerate(vecs):
                c = P.cycle_polynomial(s, [R.reduce(x) for x in vec], basis)
                z = P.normalize(c, s)
                for i in range(s + 1):
                    if not P.face(s, i, z).is_zero():
                        raise SimplicialIdentityError(f"normalized cycle has nonzero face d{i}")
                if z.is_zero():
                    continue
                P.add(Generator(f"{tag}{s + 1}_{start + j}", s + 1, z, part))
                killed.append(z.to_str())
            after, _ = P.homotopy_module(s)
            if not after.is_zero():
                raise SimplicialIdentityError(f"pi_{s} survived the killing stage")
        stages.append((s, killed))
    return ResolutionCertificate("", stages, P.N - 1, "cycle-killing", bounds)


def koszul_stage(B: Ring, A: Optional[Ring] = None, N: int = 2) -> StagedAlgebra:
    """The stage-1 algebra: presentation variables plus one degree-1 generator per relation, nothing killed."""
    if N > MAX_N:
        raise TruncationTooDeep(f"truncation {N} exceeds {MAX_N}")
    rel = relative(B, A)
    P = StagedAlgebra(rel.coefficients, rel.base_vars, rel.base_ideal, N)
    for v in rel.new_vars:
        P.add(Generator(v, 0))
    V = P.level_vars(0)
    for j, f in enumerate(g for g in rel.relations if not g.is_zero()):
        P.add(Generator(f"a1_{j}", 1, f.embed(V)))
    return P


def pi0_presentation(P: StagedAlgebra) -> List[MultiPoly]:
    """Generators of the ideal J with pi_0(P) = ground / J."""
    return [g.cycle for g in P.stage_generators(1)]


def check_pi0(P: StagedAlgebra, B: Ring, A: Optional[Ring] = None) -> bool:
    """pi_0(P) and B define the same ideal (compared by reduced Gröbner bases)."""
    rel = relative(B, A)
    if not P.coefficients.is_field:
        # the stage-1 cycles are the relations themselves, possibly reordered
        return sorted(g.to_str() for g in pi0_presentation(P)) == \
            sorted(g.embed(P.coeff_vars).to_str() for g in rel.relations if not g.is_zero())
    V = P.coeff_vars
    a = groebner_basis([g.embed(V) for g in list(P.base_ideal) + pi0_presentation(P)] or [MultiPoly.zero(P.coefficients, V)])
    b = groebner_basis([g.embed(V) for g in rel.full_ideal] or [MultiPoly.zero(P.coefficients, V)])
    return [g.terms for g in a] == [g.terms for g in b]


# ----------------------------------------------------------------------------
# homotopy rings


@dataclass
class HomotopyRing:
    pi0: List[str]
    groups: List[HomologyReport]
    truncation: int

    def product(self, i: int, j: int):
        """Products pi_i x pi_j; only the module action of pi_0 is exposed."""
        if i == 0 or j == 0:
            return "pi_0-module action"
        if self.groups[i].zero or self.groups[j].zero:
            return "zero"
        raise UnsupportedProduct(f"product pi_{i} x pi_{j} lies outside the Koszul subcomplex")

    def to_json(self) -> Dict:
        return {"pi0": self.pi0, "groups": [g.to_json() for g in self.groups], "truncation": self.truncation}


def homotopy_ring(P: StagedAlgebra, through: int) -> HomotopyRing:
    if through > P.N - 1:
        raise TruncationExceeded(f"pi_{through} needs truncation > {P.N}")
    groups = []
    for s in range(through + 1):
        pres, _ = P.homotopy_module(s)
        groups.append(module_report(s, pres))
    return HomotopyRing([g.to_str() for g in pi0_presentation(P)], groups, P.N)


# ----------------------------------------------------------------------------
# derived tensor products


@dataclass
class DerivedTensor:
    groups: List[HomologyReport]
    classical: bool
    exterior_generators: Optional[int] = None  # Koszul ring structure when available

    def product(self, S: Tuple[int, ...], T: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...]]:
        """Wedge product of Koszul basis classes e_S, e_T: (sign, S u T), sign 0 when they overlap."""
        if self.exterior_generators is None:
            raise UnsupportedProduct("ring structure is exposed only for Koszul cases")
        if set(S) & set(T):
            return 0, ()
        seq = list(S) + list(T)
        sign = 1
        for a in range(len(seq)):
            for b in range(a + 1, len(seq)):
                if seq[a] > seq[b]:
                    sign = -sign
        return sign, tuple(sorted(seq))

    def to_json(self) -> Dict:
        d = {"groups": [g.to_json() for g in self.groups], "classical": self.classical}
        if self.exterior_generators is not None:
            d["exterior_generators"] = self.exterior_generators
        return d


def _koszul_exterior(rb: Relative, r2: Relative) -> Optional[int]:
    """r when B2 = A/(f_1..f_r) is a regular quotient with every f_i zero in B."""
    if r2.new_vars or not r2.relations:
        return None
    k = rb.coefficients
    seq = list(r2.relations)
    if not is_regular_sequence(k, r2.base_vars, r2.base_ideal, seq):
        return None
    if k.is_field:
        V = rb.all_vars
        ideal = [g.embed(V) for g in rb.full_ideal]
        if not ideal:
            return None
        gb = groebner_basis(ideal)
        if all(normal_form(f.embed(V), gb).is_zero() for f in seq):
            return len(seq)
        return None
    p = constant_prime(rb.relations)
    if p is None:
        return None
    Fp = GF(p)
    V = rb.all_vars
    gb = groebner_basis([g.change_ring(Fp).embed(V) for g in rb.full_ideal])
    if all(normal_form(f.change_ring(Fp).embed(V), gb).is_zero() for f in seq):
        return len(seq)
    return None


def derived_tensor(B: Ring, B2: Ring, A: Optional[Ring] = None, through: int = 3) -> DerivedTensor:
    """pi_i(B tensor^L_A B2) = Tor_i^A(B, B2) for i <= through."""
    groups = [tor(B, B2, A, i) for i in range(through + 1)]
    classical = all(g.zero for g in groups[1:])
    rb = relative(B, A)
    r2 = relative(B2, A)
    ext = _koszul_exterior(rb, r2)
    if ext is None:
        ext = _koszul_exterior(r2, rb)
    return DerivedTensor(groups, classical, ext)


# ----------------------------------------------------------------------------
# the bar construction oracle


class BarConstruction(TruncatedFreeSimplicialAlgebra):
    """Levels A[B] and a finite part of A[A[B]] for a finite ring B.

    Level 0 has a symbol [b] per element. Level 1 has a symbol [p] for each
    polynomial p in a generating family: the degenerate [[b]], sums [b]+[c],
    products [b][c] and the unit. d_0 [p] = p, d_1 [p] = [eval p], s_0 [b] = [[b]].
    """

    def __init__(self, A: CoefficientRing, elements: List[Tuple], add, mul, one, zero, labels: List[str], levels: int):
        super().__init__(A, (), (), levels - 1)
        self.elements = elements
        self.labels = labels
        self._add, self._mul = add, mul
        self.one_el, self.zero_el = one, zero
        idx = {e: i for i, e in enumerate(elements)}
        self.index = idx
        self.level0 = [f"[{l}]" for l in labels]
        self.level1: List[str] = []
        self._d0: Dict[str, MultiPoly] = {}
        self._d1: Dict[str, str] = {}
        if levels > 1:
            V0 = tuple(self.level0)
            sym = lambda e: MultiPoly.var(A, V0, self.level0[idx[e]])

            def put(name, poly, value):
                if name not in self._d0:
                    self.level1.append(name)
                    self._d0[name] = poly
                    self._d1[name] = self.level0[idx[value]]

            for e in elements:
                put(f"[[{labels[idx[e]]}]]", sym(e), e)
            put("[1]", MultiPoly.constant(A, V0, 1), one)
            for a in elements:
                for b in elements:
                    la, lb = labels[idx[a]], labels[idx[b]]
                    put(f"[[{la}]+[{lb}]]", sym(a) + sym(b), add(a, b))
                    put(f"[[{la}][{lb}]]", sym(a) * sym(b), mul(a, b))

    def generators(self, n: int) -> List[str]:
        return list(self.level0) if n == 0 else list(self.level1)

    def face_image(self, n: int, i: int, name: str) -> MultiPoly:
        V0 = self.level_vars(0)
        return self._d0[name] if i == 0 else MultiPoly.var(self.coefficients, V0, self._d1[name])

    def degeneracy_image(self, n: int, j: int, name: str) -> str:
        return f"[{name}]"

    def _times(self, n: int, x):
        acc = self.zero_el
        for _ in range(n % self.additive_order):
            acc = self._add(acc, x)
        return acc

    @property
    def additive_order(self) -> int:
        n, x = 1, self.one_el
        while x != self.zero_el:
            x = self._add(x, self.one_el)
            n += 1
        return n

    def augmentation(self, p: MultiPoly):
        """Evaluate a level-0 polynomial in B."""
        total = self.zero_el
        for e, c in p.terms.items():
            term = self.one_el
            for i, k in enumerate(e):
                for _ in range(k):
                    term = self._mul(term, self.elements[i])
            total = self._add(total, self._times(int(c), term))
        return total

    def augmentation_surjective(self) -> bool:
        return {self.augmentation(self.var(0, s)) for s in self.level0} == set(self.elements)

    def pi0_invariants(self) -> List[int]:
        """Invariant factors of pi_0 = A[B] / (d_0 - d_1) as an A-module.

        Products [b][c] - [bc] and the unit relation reduce every polynomial to a
        combination of symbols; what remains is A^B modulo the additive relations.
        """
        n = len(self.level0)
        rows: List[List[int]] = []
        for name in self.level1:
            p = self._d0[name]
            if p.total_degree() != 1:
                continue
            v = [0] * n
            for e, c in p.terms.items():
                v[e.index(1)] += int(c)
            v[self.level0.index(self._d1[name])] -= 1
            if any(v):
                rows.append(v)
        char = self.coefficients.characteristic
        if char:
            for i in range(n):
                rows.append([char if j == i else 0 for j in range(n)])
        # the unit symbol [1] stands for 1, which is itself a free generator of A[B]
        facs = invariant_factors(rows, 0, n) if rows else []
        free = n - len(facs)
        tors = [abs(f) for f in facs if abs(f) > 1]
        return tors + [0] * free

    def pi0_order(self) -> Optional[int]:
        inv = self.pi0_invariants()
        if any(f == 0 for f in inv):
            return None
        out = 1
        for f in inv:
            out *= f
        return out


def _finite_elements(B: Ring, A: Optional[Ring]):
    """Elements of a finite ring B with its operations, as coordinate tuples."""
    if isinstance(B, CoefficientRing):
        if not B.is_finite:
            raise InfiniteUnderlyingSet(f"{B} is infinite")
        m = B.characteristic
        els = [(i,) for i in range(m)]
        return els, (lambda a, b: ((a[0] + b[0]) % m,)), (lambda a, b: ((a[0] * b[0]) % m,)), (1 % m,), (0,), \
            [str(i) for i in range(m)]
    rel = relative(B)
    k = rel.coefficients
    V = rel.all_vars
    ideal = list(rel.full_ideal)
    if k.kind == "Z":
        p = constant_prime(ideal)
        if p is None:
            if not V:
                from math import gcd
                m = 0
                for g in ideal:
                    m = gcd(m, int(g.constant_term()))
                if m > 1:
                    return _finite_elements(CoefficientRing.integers_mod(m), None)
            raise InfiniteUnderlyingSet(f"{B} has no finite underlying set that can be enumerated")
        k = GF(p)
        ideal = [g.change_ring(k) for g in ideal]
    if not k.is_finite:
        raise InfiniteUnderlyingSet(f"{B} has infinite coefficients")
    R = QuotientRing(k, V, ideal)
    basis = R.standard_basis
    if basis is None:
        raise InfiniteUnderlyingSet(f"{B} is infinite")
    q = k.characteristic
    dim = len(basis)
    if q ** dim > 64:
        raise CombinatorialBlowup(f"{q ** dim} elements exceed the oracle cap")

    def poly(v):
        return sum((MultiPoly.monomial(k, V, e, c) for e, c in zip(basis, v) if c), R.zero)

    from itertools import product as iproduct
    els = [tuple(v) for v in iproduct(range(q), repeat=dim)]
    add = lambda a, b: tuple((x + y) % q for x, y in zip(a, b))
    mul = lambda a, b: tuple(int(c) % q for c in R.coords(poly(a) * poly(b)))
    one = tuple(int(c) % q for c in R.coords(R.one))
    zero = (0,) * dim
    labels = ["".join(str(c) for c in e) for e in els]
    return els, add, mul, one, zero, labels


def bar_resolution_oracle(B: Ring, A: Optional[CoefficientRing] = None, levels: int = 2,
                          cap: int = 5000) -> BarConstruction:
    """The bar construction of B over A truncated to the first levels, for finite B."""
    if levels < 1 or levels > 2:
        raise TruncationTooDeep("the bar oracle stores at most two levels")
    if A is None:
        A = B.coefficients if isinstance(B, FinitePresentation) else CoefficientRing.integers()
    els, add, mul, one, zero, labels = _finite_elements(B, A)
    count = len(els) + (2 * len(els) ** 2 + len(els) + 1 if levels > 1 else 0)
    if count > cap:
        raise CombinatorialBlowup(f"{count} generators exceed the cap {cap}")
    return BarConstruction(A, els, add, mul, one, zero, labels, levels)
