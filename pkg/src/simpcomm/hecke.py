"""Derived Hecke algebras through finite quotients.

Three models live here:

* the torus algebra Lambda[Z^r] (x) H^*((Z/(q-1))^r; Lambda) with its Weyl action;
* the rank-one (PGL_2) algebra, with stabilizer cohomology taken on G(F_q) at
  the identity double coset and on B(F_q) elsewhere, and the Satake transform
  defined by restriction to the torus;
* a finite pair K <= G, where Ext_G(Lambda[G/K], Lambda[G/K]) acts on the right
  on Ext_K(Lambda, M), computed as Hom_G(Ind P, M) for a resolution P over K.
"""
from __future__ import annotations

import random
from itertools import permutations, product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .coeffs import is_prime
from .errors import BadCharacteristic, BadParameters, ScaleCap, UnsupportedProduct
from .groups import (MAX_DEGREE, MAX_GROUP, CohomologyClass, CohomologyRing, FiniteGroup, FreeComplex, GroupHom,
                     Resolution, group_cohomology, lift_chain_map, pgl2_normalize)
from .snf import integer_kernel
from .zmodlin import Subquotient

Cochar = Tuple[int, ...]


def _check_coefficients(ell: int, n: int):
    if not is_prime(ell) or n < 1:
        raise BadParameters("coefficients must be Z/ell^n with ell prime and n >= 1")


def _as_class(ring: CohomologyRing, d: int, value) -> CohomologyClass:
    if isinstance(value, CohomologyClass):
        if value.ring is not ring or value.degree != d:
            raise BadParameters("class does not match its slot")
        return value
    return ring.cls(d, value)


# ---------------------------------------------------------------------------
# torus


class TorusDHAElement:
    """A finite sum of e_lambda (x) c with c homogeneous in H^*(T(F_q))."""

    def __init__(self, algebra: "TorusDHA", terms: Dict[Tuple[Cochar, int], CohomologyClass]):
        self.algebra = algebra
        self.terms = {k: v for k, v in terms.items() if not v.is_zero}
        self.checks: Dict[str, bool] = {}

    def _combine(self, other: "TorusDHAElement", sign: int) -> "TorusDHAElement":
        if other.algebra is not self.algebra:
            raise BadParameters("elements of different algebras")
        out = dict(self.terms)
        for k, v in other.terms.items():
            v = v if sign > 0 else -v
            out[k] = out[k] + v if k in out else v
        return TorusDHAElement(self.algebra, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return TorusDHAElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return TorusDHAElement(self.algebra, {k: v * int(other) for k, v in self.terms.items()})
        return self.algebra.multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusDHAElement) and other.algebra is self.algebra and other.terms == self.terms

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, lam: Cochar, d: int) -> Tuple[int, ...]:
        c = self.terms.get((tuple(lam), d))
        return c.coords if c is not None else (0,) * self.algebra.H.dimension(d)

    def __repr__(self):
        return " + ".join(f"e{list(k[0])}*{v}" for k, v in sorted(self.terms.items())) or "0"

    def to_json(self) -> Dict:
        return {"rank": self.algebra.r,
                "terms": [{"cocharacter": [str(x) for x in lam], "degree": d,
                           "coords": [str(c) for c in v.coords]}
                          for (lam, d), v in sorted(self.terms.items())]}


class TorusDHA:
    """Lambda[X_*(T)] (x) H^*(T(F_q); Lambda) through degree D, T split of rank r."""

    def __init__(self, r: int, q: int, ell: int, n: int = 1, D: int = 2):
        _check_coefficients(ell, n)
        if r < 1 or q < 2:
            raise BadParameters("rank and q must be positive")
        if q % ell == 0:
            raise BadParameters("ell must not divide q")
        self.r, self.q, self.ell, self.n, self.N, self.D = r, q, ell, n, ell ** n, D
        self.factors = [q - 1] * r
        if (q - 1) ** r <= MAX_GROUP:
            self.T: Optional[FiniteGroup] = FiniteGroup.abelian(self.factors, f"T(F{q})")
            self.H = group_cohomology(self.T, ell, n, D)
        else:
            self.T = None
            self.H = group_cohomology(self.factors, ell, n, D)
        # W: inversion in rank one, coordinate permutations otherwise
        if r == 1:
            self.weyl_group = [((0,), 1), ((0,), -1)]
        else:
            self.weyl_group = [(p, 1) for p in permutations(range(r))]
        self._weyl_maps: Dict = {}

    # elements
    @property
    def zero(self) -> TorusDHAElement:
        return TorusDHAElement(self, {})

    @property
    def unit(self) -> TorusDHAElement:
        return self.e((0,) * self.r)

    def e(self, lam: Sequence[int], cls: Optional[CohomologyClass] = None) -> TorusDHAElement:
        lam = tuple(int(x) for x in lam)
        if len(lam) != self.r:
            raise BadParameters("cocharacter has the wrong rank")
        c = self.H.unit if cls is None else _as_class(self.H, cls.degree, cls)
        return TorusDHAElement(self, {(lam, c.degree): c})

    def element(self, terms: Dict[Tuple[Cochar, int], Union[CohomologyClass, Sequence[int]]]) -> TorusDHAElement:
        out = self.zero
        for (lam, d), v in terms.items():
            out = out + self.e(lam, _as_class(self.H, d, v))
        return out

    def basis(self, degree: int, radius: int = 1) -> List[TorusDHAElement]:
        """e_lambda (x) b for lambda in the box of the given radius and b a basis class of H^degree."""
        box = list(iproduct(range(-radius, radius + 1), repeat=self.r))
        return [self.e(lam, b) for lam in box for b in self.H.basis(degree)]

    def multiply(self, x: TorusDHAElement, y: TorusDHAElement) -> TorusDHAElement:
        """Convolution on cocharacters, cup product on classes; degrees above D are truncated."""
        out: Dict[Tuple[Cochar, int], CohomologyClass] = {}
        for (l1, d1), a in x.terms.items():
            for (l2, d2), b in y.terms.items():
                if d1 + d2 > self.D:
                    continue
                key = (tuple(s + t for s, t in zip(l1, l2)), d1 + d2)
                c = a * b
                out[key] = out[key] + c if key in out else c
        return TorusDHAElement(self, out)

    # Weyl group
    def _lattice_action(self, w, lam: Cochar) -> Cochar:
        perm, sign = w
        out = [0] * self.r
        for i, x in enumerate(lam):
            out[perm[i]] = sign * x
        return tuple(out)

    def _cohomology_action(self, w):
        """(alpha_w^{-1})^* on H^*(T), so that e_lambda (x) c -> e_{w lambda} (x) w_* c is an action."""
        if w not in self._weyl_maps:
            if self.T is None:
                raise ScaleCap("the Weyl action is only computed for tori with an explicit table")
            perm, sign = w
            inv = [0] * self.r
            for i, p in enumerate(perm):
                inv[p] = i
            winv = (tuple(inv), sign)
            index = {lab: i for i, lab in enumerate(self.T.labels)}
            images = [index[tuple(x % (self.q - 1) for x in self._lattice_action(winv, lab))]
                      for lab in self.T.labels]
            self._weyl_maps[w] = self.H.pullback(GroupHom(self.T, self.T, images), self.H)
        return self._weyl_maps[w]

    def act(self, w, x: TorusDHAElement) -> TorusDHAElement:
        f = self._cohomology_action(w)
        out: Dict[Tuple[Cochar, int], CohomologyClass] = {}
        for (lam, d), c in x.terms.items():
            out[(self._lattice_action(w, lam), d)] = f(c)
        return TorusDHAElement(self, out)


def torus_dha(r: int, q: int, ell: int, n: int = 1, D: int = 2) -> TorusDHA:
    return TorusDHA(r, q, ell, n, D)


def is_weyl_invariant(x: TorusDHAElement) -> bool:
    A = x.algebra
    return all(A.act(w, x) == x for w in A.weyl_group)


def weyl_invariants(A: TorusDHA, degree: int, radius: int = 1) -> List[TorusDHAElement]:
    """A generating set (a basis over a field) of the W-invariants supported in the box."""
    orders = A.H.orders(degree)
    if not orders:
        return []
    box = list(iproduct(range(-radius, radius + 1), repeat=A.r))
    keys = [(lam, t) for lam in box for t in range(len(orders))]
    pos = {k: i for i, k in enumerate(keys)}
    m = len(keys)
    rows: List[List[int]] = []
    row_orders: List[int] = []
    for w in A.weyl_group:
        M = A._cohomology_action(w).matrix(degree)
        block = [[0] * m for _ in range(m)]
        for lam in box:
            wl = A._lattice_action(w, lam)
            for s in range(len(orders)):
                for t in range(len(orders)):
                    block[pos[(wl, t)]][pos[(lam, s)]] += M[t][s]
        for i in range(m):
            block[i][i] -= 1
        rows += block
        row_orders += [orders[k[1]] for k in keys]
    if A.n == 1:
        gens = Subquotient(A.ell, 1, m, rows, []).generators
    else:
        # x in Z^m with each row value divisible by its order
        big = [row + [-o if i == j else 0 for j in range(len(rows))] for i, (row, o) in enumerate(zip(rows, row_orders))]
        K = integer_kernel(big, m + len(rows))
        zgens = [[K[i][j] for i in range(m)] for j in range(len(K[0]) if K and K[0] else 0)]
        rels = [[orders[keys[i][1]] if i == j else 0 for i in range(m)] for j in range(m)]
        gens = Subquotient.from_lattices(A.ell, A.n, m, zgens + rels, rels).generators
    out = []
    for g in gens:
        terms: Dict[Tuple[Cochar, int], List[int]] = {}
        for (lam, t), c in zip(keys, g):
            terms.setdefault((lam, degree), [0] * len(orders))[t] = c
        out.append(A.element(terms))
    return out


# ---------------------------------------------------------------------------
# rank one


class RankOneDHAElement:
    """h(a) in H^*(stabilizer quotient) for finitely many double cosets a >= 0."""

    def __init__(self, model: "PGL2Model", terms: Dict[Tuple[int, int], CohomologyClass]):
        self.model = model
        self.terms = {k: v for k, v in terms.items() if not v.is_zero}

    def __add__(self, other: "RankOneDHAElement") -> "RankOneDHAElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return RankOneDHAElement(self.model, out)

    def __neg__(self):
        return RankOneDHAElement(self.model, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return RankOneDHAElement(self.model, {k: v * int(other) for k, v in self.terms.items()})
        return self.model.convolve(self, other)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other) -> bool:
        return isinstance(other, RankOneDHAElement) and other.model is self.model and other.terms == self.terms

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self) -> List[int]:
        return sorted({a for a, _ in self.terms})

    def __repr__(self):
        return " + ".join(f"[{a}]*{v}" for (a, _), v in sorted(self.terms.items())) or "0"

    def to_json(self) -> Dict:
        return {"group": f"PGL2(F{self.model.q})",
                "terms": [{"coset": str(a), "degree": d, "coords": [str(c) for c in v.coords]}
                          for (a, d), v in sorted(self.terms.items())]}


def _primitive_root(q: int) -> int:
    return next(g for g in range(2, q) if all(pow(g, k, q) != 1 for k in range(1, q - 1))) if q > 2 else 1


class PGL2Model:
    """Finite shadow of PGL_2 over a q-adic field: G(F_q), B(F_q), T(F_q) and their restrictions."""

    def __init__(self, q: int, ell: int, n: int = 1, D: int = 2):
        _check_coefficients(ell, n)
        if ell == 2:
            raise BadCharacteristic("ell = 2: the Weyl group order is not invertible")
        if not is_prime(q):
            raise BadParameters("the model is built for prime q")
        if (q - 1) % (ell ** n):
            raise BadCharacteristic(f"q = {q} is not 1 in Z/{ell ** n}")
        if D > MAX_DEGREE:
            raise ScaleCap(f"degrees are capped at {MAX_DEGREE}")
        self.q, self.ell, self.n, self.N, self.D = q, ell, n, ell ** n, D
        self.G = FiniteGroup.pgl2(q)
        index = {lab: i for i, lab in enumerate(self.G.labels)}
        self.B, inc = self.G.subgroup([i for i, lab in enumerate(self.G.labels) if lab[2] == 0], f"B(F{q})")
        bindex = {lab: i for i, lab in enumerate(self.B.labels)}
        self.torus = TorusDHA(1, q, ell, n, D)
        T = self.torus.T
        g = _primitive_root(q)
        diag = [pgl2_normalize((pow(g, k, q), 0, 0, 1), q) for (k,) in T.labels]
        # w diag(t, 1) w^-1 = diag(1, t)
        twisted = [pgl2_normalize((1, 0, 0, pow(g, k, q)), q) for (k,) in T.labels]
        self.HG = group_cohomology(self.G, ell, n, D)
        self.HB = group_cohomology(self.B, ell, n, D)
        HT = self.torus.H
        self.res_GT = self.HG.pullback(GroupHom(T, self.G, [index[x] for x in diag]), HT)
        self.res_GB = self.HG.pullback(inc, self.HB)
        self.res_BT = self.HB.pullback(GroupHom(T, self.B, [bindex[x] for x in diag]), HT)
        self.res_BT_w = self.HB.pullback(GroupHom(T, self.B, [bindex[x] for x in twisted]), HT)

    def ring(self, a: int) -> CohomologyRing:
        if a < 0:
            raise BadParameters("double cosets are indexed by a >= 0")
        return self.HG if a == 0 else self.HB

    def element(self, terms: Dict[Tuple[int, int], Union[CohomologyClass, Sequence[int]]]) -> RankOneDHAElement:
        out = RankOneDHAElement(self, {})
        for (a, d), v in terms.items():
            out = out + RankOneDHAElement(self, {(a, d): _as_class(self.ring(a), d, v)})
        return out

    def basic(self, a: int) -> RankOneDHAElement:
        return self.element({(a, 0): self.ring(a).unit})

    @property
    def unit(self) -> RankOneDHAElement:
        return self.basic(0)

    def random_element(self, rng: random.Random, radius: int = 2) -> RankOneDHAElement:
        terms = {}
        for a in range(radius + 1):
            R = self.ring(a)
            for d in range(self.D + 1):
                if R.dimension(d) and rng.random() < 0.7:
                    terms[(a, d)] = [rng.randrange(o) for o in R.orders(d)]
        return self.element(terms)

    def convolve(self, h1: RankOneDHAElement, h2: RankOneDHAElement) -> RankOneDHAElement:
        """Convolution when one factor lives on the identity double coset (a cup product there)."""
        out: Dict[Tuple[int, int], CohomologyClass] = {}

        def put(key, c):
            out[key] = out[key] + c if key in out else c

        if set(h1.support) <= {0}:
            for (_, d1), c1 in h1.terms.items():
                for (b, d2), c2 in h2.terms.items():
                    if d1 + d2 <= self.D:
                        put((b, d1 + d2), c1 * c2 if b == 0 else self.res_GB(c1) * c2)
        elif set(h2.support) <= {0}:
            for (b, d1), c1 in h1.terms.items():
                for (_, d2), c2 in h2.terms.items():
                    if d1 + d2 <= self.D:
                        put((b, d1 + d2), c1 * c2 if b == 0 else c1 * self.res_GB(c2))
        else:
            raise UnsupportedProduct("convolution is implemented when one factor sits on the identity double coset")
        return RankOneDHAElement(self, out)

    def multiplicativity(self, rng: random.Random, pairs: int = 20) -> Dict[str, int]:
        """Count pairs with S(h1 * h2) = S(h1) S(h2), h1 on the identity coset."""
        hits = 0
        for _ in range(pairs):
            h1 = self.random_element(rng, radius=0)
            h2 = self.random_element(rng)
            hits += satake_restrict(h1 * h2) == satake_restrict(h1) * satake_restrict(h2)
        return {"pairs": pairs, "multiplicative": hits}


def satake_restrict(h: RankOneDHAElement) -> TorusDHAElement:
    """Restriction to the torus: res from G(F_q) at lambda = 0, from B(F_q) at +a, from wBw^-1 at -a."""
    M = h.model
    A = M.torus
    out = A.zero
    for (a, d), c in h.terms.items():
        if a == 0:
            out = out + A.e((0,), M.res_GT(c))
        else:
            out = out + A.e((a,), M.res_BT(c)) + A.e((-a,), M.res_BT_w(c))
    out.checks = {"weyl_invariant": is_weyl_invariant(out)}
    return out


# ---------------------------------------------------------------------------
# finite pair K <= G


class GModule:
    """A finite free Z/ell^n-module with a left G-action by matrices on columns."""

    def __init__(self, G: FiniteGroup, ell: int, n: int, matrices):
        self.G, self.ell, self.n, self.N = G, ell, n, ell ** n
        try:
            rho = np.array(matrices, dtype=np.int64) % self.N
        except ValueError as exc:
            raise BadParameters("action matrices must be square and of one size") from exc
        if rho.ndim != 3 or rho.shape[0] != G.order or rho.shape[1] != rho.shape[2]:
            raise BadParameters("one square matrix per group element is required")
        lhs = rho[G.mt]
        rhs = np.einsum("gij,hjk->ghik", rho, rho) % self.N
        if not (lhs == rhs).all() or not (rho[G.identity] == np.eye(rho.shape[1], dtype=np.int64)).all():
            raise BadParameters("matrices do not define an action")
        self.rho = rho
        self.dim = rho.shape[1]
        self.matrices = rho.tolist()

    @classmethod
    def trivial(cls, G: FiniteGroup, ell: int, n: int = 1) -> "GModule":
        return cls(G, ell, n, [[[1]]] * G.order)

    @classmethod
    def permutation(cls, G: FiniteGroup, coset_of: Sequence[int], reps: Sequence[int], ell: int, n: int = 1):
        m = len(reps)
        mats = []
        for g in range(G.order):
            M = [[0] * m for _ in range(m)]
            for x, r in enumerate(reps):
                M[coset_of[G.mul(g, r)]][x] = 1
            mats.append(M)
        return cls(G, ell, n, mats)


def _hom_cochain_matrix(images: np.ndarray, rho: np.ndarray, N: int) -> np.ndarray:
    """delta on Hom_G(F_k, M) = M^{r_k}: block (j, a) is sum_g c_{j,a,g} rho(g)."""
    r1, r0, _ = images.shape
    d = rho.shape[1]
    return (np.einsum("jag,gst->jsat", images, rho).reshape(r1 * d, r0 * d)) % N


class ExtSpace(CohomologyRing):
    """Ext^*_G(Lambda[G/K], M) = H^*(Hom_G(Ind P, M)) through degree D."""

    def __init__(self, model: "DerivedHeckeModel", module: GModule, name: str, algebra: bool):
        super().__init__(model.ell, model.n, model.D)
        self.model, self.module, self.name, self.algebra = model, module, name, algebra
        Q, d = model.Q, module.dim
        self.delta = [_hom_cochain_matrix(Q.images[k + 1], module.rho, self.N) for k in range(self.D + 1)]
        self.H = []
        for k in range(self.D + 1):
            cols = self.delta[k - 1].T.tolist() if k else []
            self.H.append(Subquotient(self.ell, self.n, Q.ranks[k] * d, self.delta[k].tolist(), cols))

    def orders(self, k: int) -> List[int]:
        return self.H[k].orders

    def cocycle(self, x: CohomologyClass) -> List[int]:
        return self.H[x.degree].lift(x.coords)

    def class_of(self, k: int, cocycle: Sequence[int]) -> CohomologyClass:
        if not self.H[k].is_cocycle(cocycle):
            raise BadParameters("not a cocycle")
        return CohomologyClass(self, k, self.H[k].coords(cocycle))

    @property
    def unit(self) -> CohomologyClass:
        if not self.algebra:
            raise BadParameters("derived invariants have no unit")
        v = [0] * self.module.dim
        v[self.model.coset_of[self.model.G.identity]] = 1
        return self.class_of(0, v)

    def _basis_product(self, i: int, a: int, j: int, b: int) -> Tuple[int, ...]:
        if not self.algebra:
            raise BadParameters("derived invariants are a module, not an algebra")
        # h1 h2 is f1 after the lift of h2, so that (m h1) h2 = m (h1 h2)
        tau = self.model.lift(j, b, i)[i]
        f1 = np.array(self.H[i].generators[a], dtype=np.int64).reshape(-1, self.module.dim)
        return self.H[i + j].coords(self.model.compose(tau, f1, self.module.rho))


class DerivedHeckeModel:
    """Ext_G(Lambda[G/K], Lambda[G/K]) and its right action on Ext_K(Lambda, M) = Ext_G(Lambda[G/K], M)."""

    def __init__(self, G: FiniteGroup, K: Sequence[int], ell: int, n: int = 1, module: Optional[GModule] = None,
                 D: int = 3, seed: int = 0):
        _check_coefficients(ell, n)
        if D > MAX_DEGREE:
            raise ScaleCap(f"degrees are capped at {MAX_DEGREE}")
        if G.order > MAX_GROUP:
            raise ScaleCap(f"groups are capped at order {MAX_GROUP}")
        self.G, self.ell, self.n, self.N, self.D = G, ell, n, ell ** n, D
        self.K, self.inc = G.subgroup(K, "K")
        Kset = set(int(x) for x in self.inc.images)
        self.coset_of = [-1] * G.order
        self.reps: List[int] = []
        for x in range(G.order):
            if self.coset_of[x] < 0:
                for k in Kset:
                    self.coset_of[G.mul(x, k)] = len(self.reps)
                self.reps.append(x)
        self.module = module or GModule.trivial(G, ell, n)
        if self.module.G is not G or self.module.N != self.N:
            raise BadParameters("module does not match the group and coefficients")
        self.U = GModule.permutation(G, self.coset_of, self.reps, ell, n)
        P = Resolution(self.K, ell, n, D + 1, "auto", seed)
        self.P = P
        images = {}
        for k in range(1, D + 2):
            im = np.zeros(P.images[k].shape[:2] + (G.order,), dtype=np.int64)
            im[:, :, self.inc.images] = P.images[k]
            images[k] = im
        self.Q = FreeComplex(G, ell, n, list(P.ranks), images)
        self.hecke = ExtSpace(self, self.U, "Ext_G(U, U)", True)
        self.invariants = ExtSpace(self, self.module, "Ext_K(Lambda, M)", False)
        self._lifts: Dict[Tuple[int, int], List[np.ndarray]] = {}
        self._action: Dict[Tuple[int, int, int, int], Tuple[int, ...]] = {}

    def lift(self, i: int, b: int, top: int) -> List[np.ndarray]:
        """Chain map Q_{i+k} -> Q_k (k <= top) over the i-th degree basis cocycle b of the Hecke algebra."""
        have = self._lifts.get((i, b))
        if have is None or len(have) <= top:
            f = np.array(self.hecke.H[i].generators[b], dtype=np.int64).reshape(-1, self.U.dim)
            tau0 = np.zeros((f.shape[0], 1, self.G.order), dtype=np.int64)
            for x, r in enumerate(self.reps):
                tau0[:, 0, r] = f[:, x]
            self._lifts[(i, b)] = lift_chain_map(self.Q, self.Q, np.arange(self.G.order), i, tau0, top)
        return self._lifts[(i, b)]

    def compose(self, tau: np.ndarray, phi: np.ndarray, rho: np.ndarray) -> List[int]:
        """The cochain phi after tau, where tau sends generators to Q_j and phi lives on Q_j."""
        return (np.einsum("eag,gst,at->es", tau, rho, phi) % self.N).reshape(-1).tolist()

    def act(self, m: CohomologyClass, h: CohomologyClass) -> CohomologyClass:
        """m . h: the cocycle of m after the lift of h."""
        if m.ring is not self.invariants or h.ring is not self.hecke:
            raise BadParameters("expected a derived invariant and a Hecke class")
        j, i = m.degree, h.degree
        if i + j > self.D:
            raise ScaleCap(f"classes are stored through degree {self.D}")
        out = [0] * self.invariants.dimension(i + j)
        for a, ca in enumerate(m.coords):
            for b, cb in enumerate(h.coords):
                if ca and cb:
                    key = (j, a, i, b)
                    if key not in self._action:
                        phi = np.array(self.invariants.H[j].generators[a], dtype=np.int64).reshape(-1, self.module.dim)
                        tau = self.lift(i, b, j)[j]
                        self._action[key] = self.invariants.H[i + j].coords(self.compose(tau, phi, self.module.rho))
                    for t, v in enumerate(self._action[key]):
                        out[t] += ca * cb * v
        return CohomologyClass(self.invariants, i + j, out)

    def double_coset_class(self, g: int) -> CohomologyClass:
        """The degree-0 class of the characteristic function of KgK."""
        v = [0] * self.U.dim
        for k1 in self.inc.images:
            for k2 in self.inc.images:
                v[self.coset_of[self.G.mul(self.G.mul(int(k1), g), int(k2))]] = 1
        return self.hecke.class_of(0, v)

    def random_hecke(self, rng: random.Random, degree: Optional[int] = None) -> CohomologyClass:
        return self._random(self.hecke, rng, degree)

    def random_invariant(self, rng: random.Random, degree: Optional[int] = None) -> CohomologyClass:
        return self._random(self.invariants, rng, degree)

    def _random(self, space: ExtSpace, rng: random.Random, degree: Optional[int]) -> CohomologyClass:
        d = rng.randint(0, self.D // 3) if degree is None else degree
        return space.cls(d, [rng.randrange(o) for o in space.orders(d)])

    def frobenius_check(self) -> bool:
        """Compare Ext_G(U, M) with H^*(K; M) from inhomogeneous bar cochains of K."""
        K, d = self.K, self.module.dim
        if K.order ** (self.D + 1) * d > 20000:
            raise ScaleCap("bar cochains too large for the comparison")
        rho = self.module.rho[self.inc.images]
        mats = [_bar_coboundary(K, rho, k, self.N) for k in range(self.D + 1)]
        for k in range(self.D + 1):
            cols = mats[k - 1].T.tolist() if k else []
            H = Subquotient(self.ell, self.n, K.order ** k * d, mats[k].tolist(), cols)
            if sorted(H.orders) != sorted(self.invariants.orders(k)):
                return False
        return True


def _bar_coboundary(K: FiniteGroup, rho: np.ndarray, k: int, N: int) -> np.ndarray:
    """delta: C^k(K; M) -> C^{k+1}(K; M) on functions K^k -> M."""
    n, d = K.order, rho.shape[1]
    src = {t: i for i, t in enumerate(iproduct(range(n), repeat=k))}
    out = np.zeros((n ** (k + 1) * d, len(src) * d), dtype=np.int64)
    I = np.eye(d, dtype=np.int64)
    for row, g in enumerate(iproduct(range(n), repeat=k + 1)):
        r = slice(row * d, row * d + d)

        def add(t, M):
            c = src[t]
            out[r, c * d:c * d + d] += M

        add(g[1:], rho[g[0]])
        for i in range(k):
            add(g[:i] + (K.mul(g[i], g[i + 1]),) + g[i + 2:], (-1) ** (i + 1) * I)
        add(g[:k], (-1) ** (k + 1) * I)
    return out % N


def dha_action(h: CohomologyClass, m: CohomologyClass) -> CohomologyClass:
    """The right action m . h of a derived Hecke class on a derived invariant."""
    return h.ring.model.act(m, h)
