"""Finite groups, free resolutions over Z/ell^n[G], and group cohomology rings.

Cohomology is computed from a free resolution of the trivial module: periodic
for cyclic groups, the tensor product of periodic ones for abelian groups, and
otherwise a resolution grown degree by degree from kernels. Products are Yoneda
composites obtained by lifting a cocycle to a chain map; maps along group
homomorphisms are lifted the same way.
"""
from __future__ import annotations

from itertools import permutations, product as iproduct
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .coeffs import is_prime
from .errors import BadParameters, ScaleCap
from .snf import invariant_factors
from .zmodlin import LocalSolver, Subquotient

MAX_GROUP = 400
MAX_DEGREE = 6
MAX_ABELIAN_RANK = 4
MAX_TABLE = 2000


class FiniteGroup:
    """A finite group on elements 0..n-1 given by its multiplication table."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = "", labels: Optional[List] = None,
                 check: bool = True):
        self.mt = np.array(table, dtype=np.int64)
        n = len(self.mt)
        if self.mt.shape != (n, n):
            raise BadParameters("multiplication table must be square")
        self.name = name
        self.labels = labels if labels is not None else list(range(n))
        self.factors: Optional[List[int]] = None
        self._projections: List[Tuple["FiniteGroup", Callable[[int], int]]] = []
        if check:
            self._check()
        self.identity = int(next(i for i in range(n) if (self.mt[i] == np.arange(n)).all()))
        self.inverse = [int(np.nonzero(self.mt[a] == self.identity)[0][0]) for a in range(n)]

    def _check(self):
        n = len(self.mt)
        rng = np.arange(n)
        if ((self.mt < 0) | (self.mt >= n)).any():
            raise BadParameters("table entries out of range")
        for row in list(self.mt) + list(self.mt.T):
            if not (np.sort(row) == rng).all():
                raise BadParameters("table is not a Latin square")
        ids = [i for i in range(n) if (self.mt[i] == rng).all() and (self.mt[:, i] == rng).all()]
        if not ids:
            raise BadParameters("no identity element")
        for a in range(n):
            if not (self.mt[self.mt[a]] == self.mt[a][self.mt]).all():
                raise BadParameters("table is not associative")

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order {self.order})"

    @property
    def table(self) -> List[List[int]]:
        return self.mt.tolist()

    @property
    def order(self) -> int:
        return len(self.mt)

    @property
    def is_abelian(self) -> bool:
        return bool((self.mt == self.mt.T).all())

    def mul(self, a: int, b: int) -> int:
        return int(self.mt[a, b])

    def power(self, a: int, k: int) -> int:
        out = self.identity
        for _ in range(k % self.element_order(a)):
            out = self.mul(out, a)
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def element_of_order(self, k: int) -> int:
        return next(a for a in range(self.order) if self.element_order(a) == k)

    def generated_by(self, gens: Sequence[int]) -> List[int]:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    b = self.mul(a, g)
                    if b not in seen:
                        seen.add(b)
                        new.append(b)
            frontier = new
        return sorted(seen)

    def generators(self) -> List[int]:
        """A small generating set, chosen greedily among elements of large order."""
        cand = sorted(range(self.order), key=lambda a: (-self.element_order(a), a))
        gens: List[int] = []
        span = {self.identity}
        for a in cand:
            if len(span) == self.order:
                break
            if a not in span:
                gens.append(a)
                span = set(self.generated_by(gens))
        return gens

    def subgroup(self, elements: Sequence[int], name: str = "") -> Tuple["FiniteGroup", "GroupHom"]:
        els = sorted(set(int(e) for e in elements))
        pos = {e: i for i, e in enumerate(els)}
        if self.identity not in pos:
            raise BadParameters("subgroup must contain the identity")
        table = []
        for a in els:
            row = []
            for b in els:
                c = self.mul(a, b)
                if c not in pos:
                    raise BadParameters("subset is not closed under multiplication")
                row.append(pos[c])
            table.append(row)
        H = FiniteGroup(table, name, [self.labels[e] for e in els], check=False)
        return H, GroupHom(H, self, els)

    def projection(self, i: int) -> "GroupHom":
        target, f = self._projections[i]
        return GroupHom(self, target, [f(a) for a in range(self.order)])

    # constructions
    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], name: str = "") -> "FiniteGroup":
        return cls(table, name)

    @classmethod
    def from_elements(cls, elements: Sequence, op: Callable, name: str = "") -> "FiniteGroup":
        index = {e: i for i, e in enumerate(elements)}
        table = [[index[op(a, b)] for b in elements] for a in elements]
        return cls(table, name, list(elements), check=False)

    @classmethod
    def cyclic(cls, m: int) -> "FiniteGroup":
        return cls.abelian([m], f"Z/{m}")

    @classmethod
    def abelian(cls, factors: Sequence[int], name: str = "") -> "FiniteGroup":
        """Product of cyclic groups; element i of factor j is the tuple with i in slot j."""
        factors = [int(m) for m in factors]
        if any(m < 1 for m in factors):
            raise BadParameters("cyclic factors must be positive")
        order = int(np.prod(factors)) if factors else 1
        if order > MAX_TABLE:
            raise ScaleCap(f"abelian group of order {order} is too large for an explicit table")
        els = list(iproduct(*[range(m) for m in factors]))
        G = cls.from_elements(els, lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, factors)),
                              name or " x ".join(f"Z/{m}" for m in factors))
        G.factors = factors
        for j, m in enumerate(factors):
            G._projections.append((_cyclic_plain(m), lambda a, j=j: els[a][j]))
        return G

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        els = sorted(permutations(range(n)))
        if len(els) > MAX_TABLE:
            raise ScaleCap("symmetric group too large for an explicit table")
        return cls.from_elements(els, lambda p, q: tuple(p[q[i]] for i in range(n)), f"S{n}")

    @classmethod
    def direct_product(cls, G: "FiniteGroup", H: "FiniteGroup") -> "FiniteGroup":
        els = [(a, b) for a in range(G.order) for b in range(H.order)]
        P = cls.from_elements(els, lambda x, y: (G.mul(x[0], y[0]), H.mul(x[1], y[1])), f"{G.name} x {H.name}")
        P._projections = [(G, lambda i: els[i][0]), (H, lambda i: els[i][1])]
        return P

    @classmethod
    def pgl2(cls, q: int) -> "FiniteGroup":
        """PGL_2(F_q) for q prime; matrices scaled so the first nonzero of (a, c) is 1."""
        if not is_prime(q):
            raise BadParameters("PGL_2 is built for prime q only")
        if q * (q * q - 1) > MAX_TABLE:
            raise ScaleCap("PGL_2 too large for an explicit table")
        return cls.from_elements(pgl2_elements(q), lambda x, y: pgl2_mul(x, y, q), f"PGL2(F{q})")


def _cyclic_plain(m: int) -> FiniteGroup:
    G = FiniteGroup([[(a + b) % m for b in range(m)] for a in range(m)], f"Z/{m}", check=False)
    G.factors = [m]
    return G


def pgl2_normalize(M: Tuple[int, int, int, int], q: int) -> Tuple[int, int, int, int]:
    a, b, c, d = (x % q for x in M)
    s = a if a else c
    inv = pow(s, -1, q)
    return (a * inv % q, b * inv % q, c * inv % q, d * inv % q)


def pgl2_mul(x, y, q: int):
    a, b, c, d = x
    e, f, g, h = y
    return pgl2_normalize((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h), q)


def pgl2_elements(q: int) -> List[Tuple[int, int, int, int]]:
    out = set()
    for a, b, c, d in iproduct(range(q), repeat=4):
        if (a * d - b * c) % q:
            out.add(pgl2_normalize((a, b, c, d), q))
    return sorted(out)


def _same_table(G: FiniteGroup, H: FiniteGroup) -> bool:
    return G is H or (G.order == H.order and bool((G.mt == H.mt).all()))


class GroupHom:
    """A homomorphism given by the images of all elements; checked on construction."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images: Sequence[int], check: bool = True):
        self.source, self.target = source, target
        self.images = np.array([int(x) for x in images], dtype=np.int64)
        if len(self.images) != source.order:
            raise BadParameters("one image per source element is required")
        if check and not self.is_homomorphism():
            raise BadParameters("map is not a homomorphism")

    def is_homomorphism(self) -> bool:
        f, S, T = self.images, self.source.mt, self.target.mt
        return bool((f[S] == T[f[:, None], f[None, :]]).all())

    def __call__(self, a: int) -> int:
        return int(self.images[a])

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        return GroupHom(other.source, self.target, self.images[other.images], check=False)


# ---------------------------------------------------------------------------
# free complexes over Z/N[G]


def equivariant_matrix(images: np.ndarray, G: FiniteGroup, alpha: np.ndarray, N: int) -> np.ndarray:
    """Matrix of the alpha-twisted Z/N[H]-linear map sending generator j to images[j].

    images has shape (r_src, r_tgt, |G|); the result has shape
    (r_tgt |G|, r_src |H|), columns ordered as (j, h).
    """
    r_src, r_tgt, nG = images.shape
    nH = len(alpha)
    out = np.zeros((r_tgt, nG, r_src, nH), dtype=np.int64)
    vals = np.transpose(images, (1, 2, 0))
    block = np.zeros((r_tgt, nG, r_src), dtype=np.int64)
    for h in range(nH):
        block[:, G.mt[alpha[h]], :] = vals
        out[..., h] = block
    return out.reshape(r_tgt * nG, r_src * nH) % N


class FreeComplex:
    """F_L -> ... -> F_0 of free Z/ell^n[G]-modules, differentials given on generators.

    images[k] has shape (r_k, r_{k-1}, |G|): the coefficients of d(e_j).
    """

    def __init__(self, G: Optional[FiniteGroup], ell: int, n: int, ranks: List[int], images: Dict[int, np.ndarray]):
        self.G, self.ell, self.n, self.N = G, ell, n, ell ** n
        self.ranks = ranks
        self.images = images
        self._mat: Dict[int, np.ndarray] = {}
        self._solver: Dict[int, LocalSolver] = {}

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def matrix(self, k: int) -> np.ndarray:
        if k not in self._mat:
            G = self.G
            self._mat[k] = equivariant_matrix(self.images[k], G, np.arange(G.order), self.N)
        return self._mat[k]

    def solver(self, k: int) -> LocalSolver:
        if k not in self._solver:
            if self.G is None or self.G.order > MAX_GROUP:
                raise ScaleCap("group too large for group-ring linear algebra")
            self._solver[k] = LocalSolver(self.matrix(k), self.ell, self.n)
        return self._solver[k]

    def generator_columns(self, k: int) -> np.ndarray:
        """d(e_j) for the generators of F_k, as columns of length r_{k-1}|G|."""
        im = self.images[k]
        return im.reshape(im.shape[0], -1).T % self.N


def lift_chain_map(src: FreeComplex, tgt: FreeComplex, alpha: np.ndarray, shift: int, tau0: np.ndarray,
                   top: int) -> List[np.ndarray]:
    """Images of generators under a chain map src_{shift+k} -> tgt_k for k = 0..top.

    tau0 has shape (r_src_shift, r_tgt_0, |G|). Each further degree is found by
    solving d(x) = tau_{k-1}(d e) in tgt, which is possible because tgt is exact
    and the previous stage is a chain map.
    """
    G = tgt.G
    out = [tau0 % tgt.N]
    for k in range(1, top + 1):
        prev = equivariant_matrix(out[-1], G, alpha, tgt.N)
        Y = (prev @ src.generator_columns(shift + k)) % tgt.N
        X = tgt.solver(k).solve_many(Y)
        if X is None:
            raise ArithmeticError("chain map does not lift; the target is not exact")
        out.append(X.T.reshape(src.ranks[shift + k], tgt.ranks[k], G.order))
    return out


def _group_ring_element(G: FiniteGroup, terms: Dict[int, int]) -> np.ndarray:
    v = np.zeros(G.order, dtype=np.int64)
    for g, c in terms.items():
        v[g] += c
    return v


class Resolution(FreeComplex):
    """A free resolution of the trivial module Z/ell^n over Z/ell^n[G] through degree L."""

    def __init__(self, G: FiniteGroup, ell: int, n: int, L: int, method: str = "auto", seed: int = 0):
        if method == "auto":
            method = "tensor" if G.factors else "general"
        if method == "tensor" and not G.factors:
            raise BadParameters("the tensor resolution needs an abelian group given by cyclic factors")
        ranks, images = [1], {}
        if method == "tensor":
            ranks, images = _tensor_resolution(G, ell ** n, L)
        super().__init__(G, ell, n, ranks, images)
        self.method = method
        if method == "general":
            if G.order > MAX_GROUP:
                raise ScaleCap(f"general resolutions are capped at |G| <= {MAX_GROUP}")
            self._grow(L, seed)

    def _grow(self, L: int, seed: int):
        G, N = self.G, self.N
        rng = np.random.default_rng(seed)
        e = G.identity
        gens = G.generators()
        self.ranks = [1, len(gens)]
        self.images[1] = np.array([[_group_ring_element(G, {g: 1, e: -1})] for g in gens],
                                  dtype=np.int64).reshape(len(gens), 1, G.order) % N
        for k in range(2, L + 1):
            S = self.solver(k - 1)
            target = S.kernel_length()
            if target == 0:
                self.ranks.append(0)
                self.images[k] = np.zeros((0, self.ranks[k - 1], G.order), dtype=np.int64)
                continue
            basis = np.array(S.kernel()).T if S.kernel() else np.zeros((S.shape[1], 0), dtype=np.int64)
            chosen: List[np.ndarray] = []
            span = None
            while span is None or span.image_length() < target:
                v = (basis @ rng.integers(0, N, basis.shape[1])) % N
                trial = LocalSolver(self._span(chosen + [v], k - 1), self.ell, self.n)
                if span is None or trial.image_length() > span.image_length():
                    chosen.append(v)
                    span = trial
            self._solver[k] = span
            r_prev = self.ranks[k - 1]
            self.ranks.append(len(chosen))
            self.images[k] = np.array([v.reshape(r_prev, G.order) for v in chosen])

    def _span(self, vecs: List[np.ndarray], k: int) -> np.ndarray:
        im = np.array([v.reshape(self.ranks[k], self.G.order) for v in vecs])
        return equivariant_matrix(im, self.G, np.arange(self.G.order), self.N)

    def cochain_matrix(self, k: int) -> List[List[int]]:
        """delta: Hom(F_k, Lambda) -> Hom(F_{k+1}, Lambda), rows indexed by generators of F_{k+1}."""
        return (self.images[k + 1].sum(axis=2) % self.N).tolist()


def _tensor_resolution(G: FiniteGroup, N: int, L: int):
    """Tensor product of the periodic resolutions of the cyclic factors."""
    factors = G.factors
    r = len(factors)
    gens = [G.labels.index(tuple(int(i == j) % m for i, m in enumerate(factors))) for j in range(r)]
    norms = [[G.power(g, i) for i in range(m)] for g, m in zip(gens, factors)]
    degs = [_compositions(k, r) for k in range(L + 1)]
    ranks = [len(d) for d in degs]
    images = {}
    e = G.identity
    for k in range(1, L + 1):
        pos = {kap: i for i, kap in enumerate(degs[k - 1])}
        im = np.zeros((ranks[k], ranks[k - 1], G.order), dtype=np.int64)
        for j, kap in enumerate(degs[k]):
            sign = 1
            for i in range(r):
                if kap[i]:
                    low = kap[:i] + (kap[i] - 1,) + kap[i + 1:]
                    if kap[i] % 2:
                        im[j, pos[low], gens[i]] += sign
                        im[j, pos[low], e] -= sign
                    else:
                        for g in norms[i]:
                            im[j, pos[low], g] += sign
                if kap[i] % 2:
                    sign = -sign
        images[k] = im % N
    return ranks, images


def _compositions(k: int, r: int) -> List[Tuple[int, ...]]:
    return sorted((c for c in iproduct(range(k + 1), repeat=r) if sum(c) == k), reverse=True)


def abelian_cochain_matrix(factors: Sequence[int], k: int, N: int) -> List[List[int]]:
    """The same coboundary as Resolution.cochain_matrix for the tensor resolution, from the formula alone."""
    r = len(factors)
    src = {kap: i for i, kap in enumerate(_compositions(k, r))}
    rows = []
    for kap in _compositions(k + 1, r):
        row = [0] * len(src)
        sign = 1
        for i in range(r):
            if kap[i]:
                low = kap[:i] + (kap[i] - 1,) + kap[i + 1:]
                if kap[i] % 2 == 0:
                    row[src[low]] = (row[src[low]] + sign * factors[i]) % N
            if kap[i] % 2:
                sign = -sign
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# cohomology rings


class CohomologyClass:
    """A homogeneous class: degree and coordinates in the canonical decomposition of H^degree."""

    __slots__ = ("ring", "degree", "coords")

    def __init__(self, ring: "CohomologyRing", degree: int, coords: Sequence[int]):
        orders = ring.orders(degree)
        if len(coords) != len(orders):
            raise BadParameters("wrong number of coordinates")
        self.ring = ring
        self.degree = degree
        self.coords = tuple(int(c) % o for c, o in zip(coords, orders))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._same(other)
        return CohomologyClass(self.ring, self.degree, [a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "CohomologyClass":
        return CohomologyClass(self.ring, self.degree, [-a for a in self.coords])

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CohomologyClass(self.ring, self.degree, [a * int(other) for a in self.coords])
        if other.ring is not self.ring:
            raise BadParameters("classes live in different rings")
        return self.ring.product(self, other)

    __rmul__ = __mul__

    def _same(self, other):
        if other.ring is not self.ring or other.degree != self.degree:
            raise BadParameters("classes must share ring and degree")

    def __eq__(self, other) -> bool:
        return (isinstance(other, CohomologyClass) and other.ring is self.ring and other.degree == self.degree
                and other.coords == self.coords)

    def __hash__(self):
        return hash((id(self.ring), self.degree, self.coords))

    def __repr__(self):
        return f"H^{self.degree}{list(self.coords)}"

    def to_json(self) -> Dict:
        return {"degree": self.degree, "coords": [str(c) for c in self.coords]}


class CohomologyRing:
    """Common interface: graded pieces through degree D with canonical coordinates and a product."""

    name = ""

    def __init__(self, ell: int, n: int, D: int):
        self.ell, self.n, self.N, self.D = ell, n, ell ** n, D
        self._table: Dict[Tuple[int, int, int, int], Tuple[int, ...]] = {}

    # to be provided
    def orders(self, k: int) -> List[int]:
        raise NotImplementedError

    def _basis_product(self, i: int, a: int, j: int, b: int) -> Tuple[int, ...]:
        raise NotImplementedError

    # derived
    @property
    def is_field(self) -> bool:
        return self.n == 1

    def dimension(self, k: int) -> int:
        """Number of cyclic summands (the dimension over a field)."""
        return len(self.orders(k))

    def order(self, k: int) -> int:
        return int(np.prod(self.orders(k))) if self.orders(k) else 1

    @property
    def higher_nonzero(self) -> bool:
        return any(self.dimension(k) for k in range(1, self.D + 1))

    def cls(self, k: int, coords: Sequence[int]) -> CohomologyClass:
        return CohomologyClass(self, k, coords)

    def zero(self, k: int) -> CohomologyClass:
        return CohomologyClass(self, k, [0] * self.dimension(k))

    def basis(self, k: int) -> List[CohomologyClass]:
        d = self.dimension(k)
        return [CohomologyClass(self, k, [int(i == j) for j in range(d)]) for i in range(d)]

    @property
    def unit(self) -> CohomologyClass:
        return CohomologyClass(self, 0, [1])

    def labels(self, k: int) -> List:
        return list(range(self.dimension(k)))

    def product(self, x: CohomologyClass, y: CohomologyClass) -> CohomologyClass:
        i, j = x.degree, y.degree
        if i + j > self.D:
            raise ScaleCap(f"products are stored through degree {self.D}")
        out = [0] * self.dimension(i + j)
        for a, ca in enumerate(x.coords):
            if not ca:
                continue
            for b, cb in enumerate(y.coords):
                if not cb:
                    continue
                key = (i, a, j, b)
                if key not in self._table:
                    self._table[key] = self._basis_product(i, a, j, b)
                for t, v in enumerate(self._table[key]):
                    out[t] += ca * cb * v
        return CohomologyClass(self, i + j, out)

    def span_rank(self, classes: Sequence[CohomologyClass]) -> int:
        """Length (log_ell of the order) of the subgroup generated by the classes."""
        if not classes:
            return 0
        orders = self.orders(classes[0].degree)
        if not orders:
            return 0
        # index of (class lattice + relations) in Z^k is |target| / |span|
        cols = [list(c.coords) for c in classes] + [[o if i == t else 0 for t in range(len(orders))]
                                                     for i, o in enumerate(orders)]
        M = [[col[i] for col in cols] for i in range(len(orders))]
        index = 1
        for d in invariant_factors(M, 0, len(cols)):
            index *= abs(d)
        size = int(np.prod(orders)) // index
        length = 0
        while size > 1:
            size //= self.ell
            length += 1
        return length

    def to_json(self, products: bool = False) -> Dict:
        out = {
            "group": self.name,
            "coefficients": f"Z/{self.N}",
            "through": self.D,
            "degrees": [{"degree": k, "rank": self.dimension(k), "orders": [str(o) for o in self.orders(k)]}
                        for k in range(self.D + 1)],
        }
        if products:
            table = []
            for i in range(self.D + 1):
                for j in range(self.D + 1 - i):
                    for a, x in enumerate(self.basis(i)):
                        for b, y in enumerate(self.basis(j)):
                            table.append({"left": [i, a], "right": [j, b],
                                          "product": [str(c) for c in (x * y).coords]})
            out["products"] = table
        return out


class CohomologyMap:
    """A graded map between cohomology rings given by coordinate matrices."""

    def __init__(self, source: CohomologyRing, target: CohomologyRing, images: Dict[int, List[Tuple[int, ...]]]):
        self.source, self.target, self.images = source, target, images

    def __call__(self, x: CohomologyClass) -> CohomologyClass:
        if x.ring is not self.source:
            raise BadParameters("class is not in the source ring")
        out = [0] * self.target.dimension(x.degree)
        for c, img in zip(x.coords, self.images[x.degree]):
            for t, v in enumerate(img):
                out[t] += c * v
        return CohomologyClass(self.target, x.degree, out)

    def matrix(self, k: int) -> List[List[int]]:
        cols = self.images[k]
        return [[col[t] for col in cols] for t in range(self.target.dimension(k))]


class GroupCohomology(CohomologyRing):
    """H^*(G; Z/ell^n) through degree D from an explicit free resolution; Yoneda products."""

    def __init__(self, G: FiniteGroup, ell: int, n: int, D: int, method: str = "auto", seed: int = 0):
        super().__init__(ell, n, D)
        self.group = G
        self.name = G.name
        self.res = Resolution(G, ell, n, D + 1, method, seed)
        ranks = self.res.ranks
        self.delta = [self.res.cochain_matrix(k) for k in range(D + 1)]
        self.H = []
        for k in range(D + 1):
            cols = [[self.delta[k - 1][j][i] for j in range(ranks[k])] for i in range(ranks[k - 1])] if k else []
            self.H.append(Subquotient(ell, n, ranks[k], self.delta[k], cols))
        self._lifts: Dict[Tuple[int, int], List[np.ndarray]] = {}

    def orders(self, k: int) -> List[int]:
        return self.H[k].orders

    def cocycle(self, x: CohomologyClass) -> List[int]:
        return self.H[x.degree].lift(x.coords)

    def class_of(self, k: int, cocycle: Sequence[int]) -> CohomologyClass:
        if not self.H[k].is_cocycle(cocycle):
            raise BadParameters("not a cocycle")
        return CohomologyClass(self, k, self.H[k].coords(cocycle))

    def _lift(self, i: int, a: int, top: int) -> List[np.ndarray]:
        key = (i, a)
        have = self._lifts.get(key)
        if have is None or len(have) <= top:
            f = self.H[i].generators[a]
            tau0 = np.zeros((self.res.ranks[i], 1, self.group.order), dtype=np.int64)
            tau0[:, 0, self.group.identity] = f
            self._lifts[key] = lift_chain_map(self.res, self.res, np.arange(self.group.order), i, tau0, top)
        return self._lifts[key]

    def _basis_product(self, i: int, a: int, j: int, b: int) -> Tuple[int, ...]:
        # Yoneda composite: the cocycle of the right factor after the chain-map lift of the left one
        tau = self._lift(i, a, j)[j]
        g = np.array(self.H[j].generators[b], dtype=np.int64)
        cocycle = (tau.sum(axis=2) @ g) % self.N
        return self.H[i + j].coords(cocycle.tolist())

    def pullback(self, hom: GroupHom, source: "GroupCohomology") -> CohomologyMap:
        """hom^*: H^*(target group) -> H^*(source group), from an equivariant chain map of resolutions."""
        if not (_same_table(hom.target, self.group) and _same_table(hom.source, source.group)):
            raise BadParameters("homomorphism does not match the rings")
        if source.N != self.N:
            raise BadParameters("coefficient rings differ")
        top = min(self.D, source.D)
        tau0 = np.zeros((1, 1, self.group.order), dtype=np.int64)
        tau0[0, 0, self.group.identity] = 1
        sigma = lift_chain_map(source.res, self.res, hom.images, 0, tau0, top)
        images = {}
        for k in range(top + 1):
            aug = sigma[k].sum(axis=2) % self.N       # (r_src, r_tgt)
            images[k] = [source.H[k].coords(((aug @ np.array(g, dtype=np.int64)) % self.N).tolist())
                         for g in self.H[k].generators]
        return CohomologyMap(self, source, images)

    restriction = pullback


class TensorCohomology(CohomologyRing):
    """The Kunneth ring A (x) B over a field, with the Koszul sign on products."""

    def __init__(self, A: CohomologyRing, B: CohomologyRing, name: str = ""):
        if A.N != B.N:
            raise BadParameters("coefficient rings differ")
        super().__init__(A.ell, A.n, min(A.D, B.D))
        self.A, self.B = A, B
        self.name = name or f"({A.name}) x ({B.name})"
        self._labels = {k: [((i, a), (k - i, b)) for i in range(k + 1)
                            for a in range(A.dimension(i)) for b in range(B.dimension(k - i))]
                        for k in range(self.D + 1)}
        self._pos = {k: {lab: t for t, lab in enumerate(v)} for k, v in self._labels.items()}

    def orders(self, k: int) -> List[int]:
        return [self.N] * len(self._labels[k]) if self.is_field else self._nonfield()

    def _nonfield(self):
        raise ScaleCap("the Kunneth decomposition is only used over a field")

    def labels(self, k: int) -> List:
        return self._labels[k]

    def _basis_product(self, i: int, s: int, j: int, t: int) -> Tuple[int, ...]:
        (i1, a1), (i2, b1) = self._labels[i][s]
        (j1, a2), (j2, b2) = self._labels[j][t]
        sign = -1 if (i2 * j1) % 2 else 1
        left = self.A.basis(i1)[a1] * self.A.basis(j1)[a2]
        right = self.B.basis(i2)[b1] * self.B.basis(j2)[b2]
        out = [0] * len(self._labels[i + j])
        for x, cx in enumerate(left.coords):
            for y, cy in enumerate(right.coords):
                if cx and cy:
                    out[self._pos[i + j][((i1 + j1, x), (i2 + j2, y))]] += sign * cx * cy
        return tuple(out)


def kunneth(A: CohomologyRing, B: CohomologyRing) -> TensorCohomology:
    if not A.is_field:
        raise ScaleCap("the Kunneth decomposition is only used over a field")
    return TensorCohomology(A, B)


class FormulaCohomology(CohomologyRing):
    """Additive structure of a large abelian group from the tensor-resolution cochains; no products."""

    def __init__(self, factors: Sequence[int], ell: int, n: int, D: int):
        super().__init__(ell, n, D)
        self.factors = list(factors)
        self.name = " x ".join(f"Z/{m}" for m in factors)
        N = self.N
        self.H = []
        for k in range(D + 1):
            out = abelian_cochain_matrix(factors, k, N)
            prev = abelian_cochain_matrix(factors, k - 1, N) if k else []
            r = len(_compositions(k, len(factors)))
            cols = [[row[i] for row in prev] for i in range(len(prev[0]))] if prev else []
            self.H.append(Subquotient(ell, n, r, out, cols))

    def orders(self, k: int) -> List[int]:
        return self.H[k].orders

    def _basis_product(self, i, a, j, b):
        raise ScaleCap("products for this group need a field and small cyclic factors")


GroupInput = Union[FiniteGroup, Sequence[int]]


def group_cohomology(G: GroupInput, ell: int, n: int = 1, D: int = 4, method: str = "auto",
                     seed: int = 0) -> CohomologyRing:
    """H^*(G; Z/ell^n) through degree D.

    G is a group table or a list of cyclic factors. Tables are capped at 400
    elements; abelian groups of larger order (rank at most 4) are handled by
    their small cochain complex, with products by Kunneth over a field.
    """
    if not is_prime(ell) or n < 1:
        raise BadParameters("coefficients must be Z/ell^n with ell prime and n >= 1")
    if D > MAX_DEGREE or D < 0:
        raise ScaleCap(f"degrees are capped at {MAX_DEGREE}")
    if not isinstance(G, FiniteGroup):
        factors = [int(m) for m in G if int(m) != 1]
        if len(factors) > MAX_ABELIAN_RANK:
            raise ScaleCap(f"abelian groups are capped at rank {MAX_ABELIAN_RANK}")
        order = int(np.prod(factors)) if factors else 1
        if order <= MAX_GROUP:
            return GroupCohomology(FiniteGroup.abelian(factors), ell, n, D, method, seed)
        additive = FormulaCohomology(factors, ell, n, D)
        if n > 1 or any(m > MAX_GROUP for m in factors):
            return additive
        ring: CohomologyRing = GroupCohomology(FiniteGroup.cyclic(factors[0]), ell, n, D)
        for m in factors[1:]:
            ring = TensorCohomology(ring, GroupCohomology(FiniteGroup.cyclic(m), ell, n, D))
        # two routes to the same groups
        if [ring.dimension(k) for k in range(D + 1)] != [additive.dimension(k) for k in range(D + 1)]:
            raise ArithmeticError("Kunneth dimensions disagree with the cochain computation")
        ring.name = additive.name
        return ring
    if G.order > MAX_GROUP and not (G.factors and len(G.factors) <= MAX_ABELIAN_RANK and method != "general"):
        raise ScaleCap(f"group tables are capped at order {MAX_GROUP}")
    if G.factors and len(G.factors) > MAX_ABELIAN_RANK:
        raise ScaleCap(f"abelian groups are capped at rank {MAX_ABELIAN_RANK}")
    return GroupCohomology(G, ell, n, D, method, seed)
