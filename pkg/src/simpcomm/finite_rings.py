"""Finite commutative rings as explicit element sets, and isomorphism search between them."""
from __future__ import annotations

import random
from itertools import product as iproduct
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import BadParameters, CombinatorialBlowup
from .poly import MultiPoly
from .qring import QuotientRing

Elem = Tuple[int, ...]

MODEL_CAP = 4096


class FiniteRing:
    """A finite commutative ring: its elements (int tuples) and its operations."""

    def __init__(self, elements: Sequence[Elem], add: Callable, mul: Callable, zero: Elem, one: Elem, name: str = ""):
        self.elements = list(elements)
        self._add = add
        self._mul = mul
        self.zero = zero
        self.one = one
        self.name = name
        self.index = {e: i for i, e in enumerate(self.elements)}
        self._neg: Dict[Elem, Elem] = {}

    def __repr__(self):
        return f"FiniteRing({self.name or '?'}, order {self.order})"

    @property
    def order(self) -> int:
        return len(self.elements)

    def add(self, a: Elem, b: Elem) -> Elem:
        return self._add(a, b)

    def mul(self, a: Elem, b: Elem) -> Elem:
        return self._mul(a, b)

    def neg(self, a: Elem) -> Elem:
        if a not in self._neg:
            self._neg[a] = self.times(self.additive_order(a) - 1, a)
        return self._neg[a]

    def sub(self, a: Elem, b: Elem) -> Elem:
        return self.add(a, self.neg(b))

    def times(self, n: int, a: Elem) -> Elem:
        if n < 0:
            return self.times(-n, self.neg(a))
        out, base = self.zero, a
        while n:
            if n & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            n >>= 1
        return out

    def power(self, a: Elem, k: int) -> Elem:
        out, base = self.one, a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def additive_order(self, a: Elem) -> int:
        n, x = 1, a
        while x != self.zero:
            x = self.add(x, a)
            n += 1
        return n

    @property
    def characteristic(self) -> int:
        return self.additive_order(self.one)

    def evaluate(self, p: MultiPoly, values: Dict[str, Elem]) -> Elem:
        """p at the given values; integer coefficients act through the unit."""
        out = self.zero
        for e, c in p.terms.items():
            t = self.times(int(c), self.one)
            for v, k in zip(p.vars, e):
                if k:
                    t = self.mul(t, self.power(values[v], k))
            out = self.add(out, t)
        return out

    def is_unit(self, a: Elem) -> bool:
        return any(self.mul(a, b) == self.one for b in self.elements)

    def is_field(self) -> bool:
        return self.one != self.zero and all(self.is_unit(a) for a in self.elements if a != self.zero)

    def check_axioms(self, samples: int = 3000, seed: int = 0) -> bool:
        """Commutativity, associativity, distributivity and units, on all triples when small."""
        els = self.elements
        if len(els) ** 3 <= samples:
            triples = list(iproduct(els, repeat=3))
        else:
            rng = random.Random(seed)
            triples = [(rng.choice(els), rng.choice(els), rng.choice(els)) for _ in range(samples)]
        A, M = self.add, self.mul
        for a, b, c in triples:
            if A(a, b) != A(b, a) or M(a, b) != M(b, a):
                return False
            if A(A(a, b), c) != A(a, A(b, c)) or M(M(a, b), c) != M(a, M(b, c)):
                return False
            if M(a, A(b, c)) != A(M(a, b), M(a, c)):
                return False
            if A(a, self.zero) != a or M(a, self.one) != a:
                return False
        return True

    # constructions
    @classmethod
    def integers_mod(cls, n: int) -> "FiniteRing":
        if n < 1:
            raise BadParameters("Z/n needs n >= 1")
        return cls([(i,) for i in range(n)], lambda a, b: ((a[0] + b[0]) % n,), lambda a, b: ((a[0] * b[0]) % n,),
                   (0,), (1 % n,), f"Z/{n}")

    @classmethod
    def monic_extension(cls, modulus: int, g: Sequence[int], name: str = "") -> "FiniteRing":
        """(Z/modulus)[x]/(g) for g monic, coefficients listed from the constant term up."""
        g = [c % modulus for c in g]
        d = len(g) - 1
        if d < 0 or g[-1] != 1 % modulus:
            raise BadParameters("the modulus polynomial must be monic")
        if d == 0:
            return cls.integers_mod(modulus)
        if modulus ** d > MODEL_CAP:
            raise CombinatorialBlowup(f"{modulus ** d} elements exceed the model cap")

        def mul(a, b):
            prod = [0] * (2 * d - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        prod[i + j] += x * y
            for k in range(2 * d - 2, d - 1, -1):
                c = prod[k] % modulus
                if c:
                    for i in range(d + 1):
                        prod[k - d + i] -= c * g[i]
            return tuple(x % modulus for x in prod[:d])

        els = list(iproduct(range(modulus), repeat=d))
        one = tuple([1 % modulus] + [0] * (d - 1))
        return cls(els, lambda a, b: tuple((x + y) % modulus for x, y in zip(a, b)), mul, (0,) * d, one,
                   name or f"Z/{modulus}[x]/({g})")

    @classmethod
    def from_quotient(cls, R: QuotientRing, name: str = "") -> "FiniteRing":
        """A finite-dimensional algebra over F_p, elements as coordinates in the standard basis."""
        q = R.field.characteristic
        basis = R.standard_basis
        if not q or basis is None:
            raise BadParameters("the ring is not finite")
        dim = len(basis)
        if q ** dim > MODEL_CAP:
            raise CombinatorialBlowup(f"{q ** dim} elements exceed the model cap")
        k, V = R.field, R.vars

        def poly(v):
            return sum((MultiPoly.monomial(k, V, e, c) for e, c in zip(basis, v) if c), R.zero)

        cache: Dict[Tuple[Elem, Elem], Elem] = {}

        def mul(a, b):
            key = (a, b) if a <= b else (b, a)
            if key not in cache:
                cache[key] = tuple(int(c) for c in R.coords(poly(a) * poly(b)))
            return cache[key]

        els = list(iproduct(range(q), repeat=dim))
        one = tuple(int(c) for c in R.coords(R.one))
        return cls(els, lambda a, b: tuple((x + y) % q for x, y in zip(a, b)), mul, (0,) * dim, one, name)


def find_isomorphism(S: FiniteRing, T: FiniteRing, generators: Sequence[Elem] = ()) -> Optional[Dict[Elem, Elem]]:
    """A ring isomorphism S -> T, searching over images of the given generators of S.

    The map is propagated from the unit and the generators by sums and products;
    any inconsistency rejects the candidate, and the survivor is verified to be
    additive, multiplicative and bijective on all of S.
    """
    if S.order != T.order or S.characteristic != T.characteristic:
        return None
    for imgs in iproduct(T.elements, repeat=len(generators)):
        f = _propagate(S, T, generators, imgs)
        if f is not None and _is_isomorphism(S, T, f):
            return f
    return None


def _propagate(S: FiniteRing, T: FiniteRing, gens: Sequence[Elem], imgs: Sequence[Elem]) -> Optional[Dict[Elem, Elem]]:
    f: Dict[Elem, Elem] = {S.zero: T.zero, S.one: T.one}
    for g, t in zip(gens, imgs):
        if f.get(g, t) != t:
            return None
        f[g] = t
    frontier = list(f)
    while frontier:
        new = []
        keys = list(f)
        for a in frontier:
            for b in keys:
                for s, t in ((S.add(a, b), T.add(f[a], f[b])), (S.mul(a, b), T.mul(f[a], f[b]))):
                    if s in f:
                        if f[s] != t:
                            return None
                    else:
                        f[s] = t
                        new.append(s)
        frontier = new
    return f if len(f) == S.order else None


def _is_isomorphism(S: FiniteRing, T: FiniteRing, f: Dict[Elem, Elem]) -> bool:
    if len(set(f.values())) != T.order:
        return False
    for a in S.elements:
        for b in S.elements:
            if f[S.add(a, b)] != T.add(f[a], f[b]) or f[S.mul(a, b)] != T.mul(f[a], f[b]):
                return False
    return True
