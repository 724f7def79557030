"""Sparse multivariate polynomials with exact coefficients."""
from __future__ import annotations

import ast
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .coeffs import CoefficientRing
from .errors import ParseError, VariableMismatch

Exp = Tuple[int, ...]


def lex_key(e: Exp):
    return e


def grevlex_key(e: Exp):
    return (sum(e), tuple(-x for x in reversed(e)))


ORDERS: Dict[str, Callable] = {"lex": lex_key, "grevlex": grevlex_key}


def order_key(order: str) -> Callable:
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}") from None


class MultiPoly:
    """Element of ring[vars]. Treat as immutable once built."""

    __slots__ = ("ring", "vars", "terms", "_hash")

    def __init__(self, ring: CoefficientRing, vars: Sequence[str], terms: Optional[Dict[Exp, object]] = None):
        self.ring = ring
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != n:
                    raise VariableMismatch(f"exponent {e} has wrong length for {self.vars}")
                c = ring(c)
                if c != 0:
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, ring, vars) -> "MultiPoly":
        return cls(ring, vars)

    @classmethod
    def constant(cls, ring, vars, c) -> "MultiPoly":
        return cls(ring, vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, ring, vars, name: str) -> "MultiPoly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(ring, vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, ring, vars, exp: Exp, c=1) -> "MultiPoly":
        return cls(ring, vars, {tuple(exp): c})

    @classmethod
    def gens(cls, ring, vars) -> List["MultiPoly"]:
        return [cls.var(ring, vars, v) for v in vars]

    def _new(self, terms) -> "MultiPoly":
        p = MultiPoly.__new__(MultiPoly)
        p.ring, p.vars, p.terms, p._hash = self.ring, self.vars, terms, None
        return p

    def _check(self, other: "MultiPoly") -> None:
        if self.vars != other.vars or self.ring != other.ring:
            raise VariableMismatch(f"{self.ring}{list(self.vars)} vs {other.ring}{list(other.vars)}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.ring, self.vars, other)

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        R = self.ring
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = R.add(t.get(e, R.zero), c)
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        R = self.ring
        return self._new({e: R.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        R = self.ring
        t: Dict[Exp, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = R.add(t.get(e, R.zero), R.mul(c1, c2))
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return self._new(t)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "MultiPoly":
        R = self.ring
        c = R(c)
        if c == 0:
            return self._new({})
        t = {}
        for e, a in self.terms.items():
            v = R.mul(a, c)
            if v:
                t[e] = v
        return self._new(t)

    def mul_term(self, exp: Exp, c) -> "MultiPoly":
        R = self.ring
        t = {}
        for e, a in self.terms.items():
            v = R.mul(a, c)
            if v:
                t[tuple(x + y for x, y in zip(e, exp))] = v
        return self._new(t)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.ring, self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        try:
            return self == MultiPoly.constant(self.ring, self.vars, other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), self.ring.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    # ordering
    def leading(self, key: Callable) -> Tuple[Exp, object]:
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def sorted_terms(self, key: Callable) -> List[Tuple[Exp, object]]:
        return sorted(self.terms.items(), key=lambda ec: key(ec[0]), reverse=True)

    def monic(self, key: Callable) -> "MultiPoly":
        _, c = self.leading(key)
        return self.scale(self.ring.inv(c))

    # calculus and substitution
    def diff(self, name: str) -> "MultiPoly":
        i = self.vars.index(name)
        t = {}
        R = self.ring
        for e, c in self.terms.items():
            if e[i]:
                v = R.mul(c, e[i])
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    t[tuple(ne)] = v
        return self._new(t)

    def subs(self, values: Dict[str, "MultiPoly"], target_vars: Optional[Sequence[str]] = None) -> "MultiPoly":
        """Substitute polynomials for variables; result lives over target_vars."""
        tv = tuple(target_vars) if target_vars is not None else self.vars
        ring = self.ring
        imgs = []
        for v in self.vars:
            if v in values:
                img = values[v]
                if img.vars != tv:
                    img = img.embed(tv)
                imgs.append(img)
            else:
                imgs.append(MultiPoly.var(ring, tv, v) if v in tv else None)
        result = MultiPoly.zero(ring, tv)
        cache: Dict[Tuple[int, int], MultiPoly] = {}
        for e, c in self.terms.items():
            term = MultiPoly.constant(ring, tv, c)
            for i, k in enumerate(e):
                if k:
                    if imgs[i] is None:
                        raise VariableMismatch(f"no image for variable {self.vars[i]}")
                    pk = cache.get((i, k))
                    if pk is None:
                        pk = imgs[i] ** k
                        cache[(i, k)] = pk
                    term = term * pk
            result = result + term
        return result

    def embed(self, new_vars: Sequence[str]) -> "MultiPoly":
        """Reinterpret over a variable list containing every variable actually used."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        pos = []
        for i, v in enumerate(self.vars):
            if v in new_vars:
                pos.append(new_vars.index(v))
            else:
                pos.append(None)
        t = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise VariableMismatch(f"variable {self.vars[i]} not in {list(new_vars)}")
                    ne[pos[i]] = k
            t[tuple(ne)] = c
        p = MultiPoly.__new__(MultiPoly)
        p.ring, p.vars, p.terms, p._hash = self.ring, new_vars, t, None
        return p

    def change_ring(self, ring: CoefficientRing) -> "MultiPoly":
        return MultiPoly(ring, self.vars, {e: ring(c) for e, c in self.terms.items()})

    def used_vars(self) -> List[str]:
        return [v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms)]

    def evaluate(self, point: Dict[str, object]):
        R = self.ring
        total = R.zero
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = R.mul(t, R(point[self.vars[i]] ** k))
            total = R.add(total, t)
        return total

    # printing
    def to_str(self, key: Callable = grevlex_key) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms(key):
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k
            )
            cs = str(c)
            if self.ring.modulus and self.ring.kind in ("Fp", "Zmod"):
                # print symmetric representatives for readability
                m = self.ring.modulus
                cv = c if c <= m // 2 else c - m
                cs = str(cv)
            if mono:
                if cs == "1":
                    s = mono
                elif cs == "-1":
                    s = "-" + mono
                else:
                    s = f"{cs}*{mono}"
            else:
                s = cs
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += (" - " + s[1:]) if s.startswith("-") else (" + " + s)
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MultiPoly({self.to_str()!r} over {self.ring}{list(self.vars)})"


def parse_poly(text: str, ring: CoefficientRing, vars: Sequence[str]) -> MultiPoly:
    """Parse an expression with integer coefficients, + - * ^ and parentheses."""
    vars = tuple(vars)
    src = text.strip().replace("^", "**")
    if not src:
        raise ParseError("empty polynomial")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse polynomial {text!r}") from exc

    def ev(node) -> MultiPoly:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return MultiPoly.constant(ring, vars, node.value)
        if isinstance(node, ast.Name):
            if node.id not in vars:
                raise ParseError(f"unknown variable {node.id!r} (have {list(vars)})")
            return MultiPoly.var(ring, vars, node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)) or node.right.value < 0:
                    raise ParseError("exponents must be nonnegative integer literals")
                return ev(node.left) ** node.right.value
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
        raise ParseError(f"unsupported syntax in {text!r}")

    return ev(tree)


def poly_ring_gens(ring: CoefficientRing, names: Iterable[str]) -> List[MultiPoly]:
    names = tuple(names)
    return MultiPoly.gens(ring, names)
