"""Finitely presented algebras and modules, and the declaration grammar.

Grammar (one declaration per line, '#' starts a comment):

    base Fp(5) | base Q | base Z | base Zmod(9)
    ring A = poly[x,y]
    ring B = A / (x^2 - y^3, x*y)
    ring F = base / (3)
    ring At = base[t] / (t^2)
    ring D = A[z] / (z^2 - x)
    ring C = A loc (x)
    module M over B = gens 2 rels [[x,0],[y,x]]
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .coeffs import CoefficientRing, GF, QQ, ZZ, Zmod
from .errors import ParseError, VariableMismatch, BadParameters
from .poly import MultiPoly, parse_poly

MAX_DEPTH = 2


@dataclass(frozen=True, eq=False)
class FinitePresentation:
    """B = base[vars]/(relations)[localized_at^-1].

    Relations are polynomials in base variables plus this layer's variables.
    Localization at f adjoins a fresh variable u with f*u - 1 = 0.
    """

    base: Union[CoefficientRing, "FinitePresentation"]
    vars: Tuple[str, ...] = ()
    relations: Tuple[MultiPoly, ...] = ()
    localized_at: Tuple[MultiPoly, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.depth > MAX_DEPTH:
            raise BadParameters(f"presentation nesting depth {self.depth} exceeds {MAX_DEPTH}")
        clash = set(self.vars) & set(self.base_vars)
        if clash:
            raise VariableMismatch(f"variables {sorted(clash)} already used by the base")
        layer = self.base_vars + self.vars
        for r in self.relations + self.localized_at:
            if r.vars != layer:
                raise VariableMismatch(f"{r!r} is not over {list(layer)}")

    # structure
    @property
    def coefficients(self) -> CoefficientRing:
        return self.base if isinstance(self.base, CoefficientRing) else self.base.coefficients

    @property
    def depth(self) -> int:
        return 1 if isinstance(self.base, CoefficientRing) else self.base.depth + 1

    @property
    def base_vars(self) -> Tuple[str, ...]:
        return () if isinstance(self.base, CoefficientRing) else self.base.all_vars

    @property
    def layer_vars(self) -> Tuple[str, ...]:
        return self.base_vars + self.vars

    @property
    def inverse_vars(self) -> Tuple[str, ...]:
        taken = set(self.layer_vars)
        out = []
        i = 0
        for _ in self.localized_at:
            while True:
                cand = f"{self.name or 'L'}_inv{i}"
                i += 1
                if cand not in taken:
                    break
            out.append(cand)
            taken.add(cand)
        return tuple(out)

    @property
    def own_vars(self) -> Tuple[str, ...]:
        """Variables introduced by this layer, localization inverses included."""
        return self.vars + self.inverse_vars

    @property
    def all_vars(self) -> Tuple[str, ...]:
        return self.layer_vars + self.inverse_vars

    def own_relations(self) -> List[MultiPoly]:
        """This layer's relations over all_vars (including f*u - 1 for localizations)."""
        av = self.all_vars
        out = [r.embed(av) for r in self.relations]
        for f, u in zip(self.localized_at, self.inverse_vars):
            out.append(f.embed(av) * MultiPoly.var(self.coefficients, av, u) - 1)
        return out

    def ideal(self) -> List[MultiPoly]:
        """Defining ideal of the flattened presentation over the coefficient ring."""
        base = [] if isinstance(self.base, CoefficientRing) else [g.embed(self.all_vars) for g in self.base.ideal()]
        return base + self.own_relations()

    def ancestors(self) -> List[Union[CoefficientRing, "FinitePresentation"]]:
        out: List = [self]
        cur = self
        while isinstance(cur, FinitePresentation):
            cur = cur.base
            out.append(cur)
        return out

    def poly(self, text: str) -> MultiPoly:
        return parse_poly(text, self.coefficients, self.all_vars)

    def is_polynomial_ring(self) -> bool:
        """No relations or localizations anywhere in the tower."""
        return all(not (isinstance(a, FinitePresentation) and (a.relations or a.localized_at)) for a in self.ancestors())

    def __str__(self):
        body = str(self.base) if isinstance(self.base, CoefficientRing) else (self.base.name or "A")
        if self.vars:
            body += f"[{','.join(self.vars)}]"
        if self.relations:
            body += " / (" + ", ".join(r.to_str() for r in self.relations) + ")"
        if self.localized_at:
            body += " loc (" + ", ".join(r.to_str() for r in self.localized_at) + ")"
        return f"{self.name} = {body}" if self.name else body

    def describe(self) -> Dict:
        return {
            "name": self.name,
            "coefficients": str(self.coefficients),
            "vars": list(self.all_vars),
            "ideal": [g.to_str() for g in self.ideal()],
        }


def polynomial_ring(coeffs: CoefficientRing, vars: Sequence[str], name: str = "") -> FinitePresentation:
    return FinitePresentation(coeffs, tuple(vars), (), (), name)


def over_ring(A: Union[CoefficientRing, FinitePresentation], vars: Sequence[str], relations: Sequence[str] = (),
              name: str = "") -> FinitePresentation:
    """A[vars]/(relations) with relations given as strings."""
    coeffs = A if isinstance(A, CoefficientRing) else A.coefficients
    layer = (() if isinstance(A, CoefficientRing) else A.all_vars) + tuple(vars)
    rels = tuple(parse_poly(r, coeffs, layer) for r in relations)
    return FinitePresentation(A, tuple(vars), rels, (), name)


def quotient(A: Union[CoefficientRing, FinitePresentation], relations: Sequence[str], name: str = "") -> FinitePresentation:
    return over_ring(A, (), relations, name)


def localization(A: FinitePresentation, elements: Sequence[str], name: str = "") -> FinitePresentation:
    coeffs = A.coefficients
    elems = tuple(parse_poly(e, coeffs, A.all_vars) for e in elements)
    return FinitePresentation(A, (), (), elems, name)


@dataclass(frozen=True)
class Relative:
    """The morphism A -> B flattened: B = (k[base_vars]/base_ideal)[new_vars]/relations."""

    coefficients: CoefficientRing
    base_vars: Tuple[str, ...]
    new_vars: Tuple[str, ...]
    base_ideal: Tuple[MultiPoly, ...]
    relations: Tuple[MultiPoly, ...]
    localization_layers: int = 0

    @property
    def all_vars(self) -> Tuple[str, ...]:
        return self.base_vars + self.new_vars

    @property
    def full_ideal(self) -> List[MultiPoly]:
        return list(self.base_ideal) + list(self.relations)


def relative(B: Union[CoefficientRing, FinitePresentation], A: Union[CoefficientRing, FinitePresentation, None] = None) -> Relative:
    """Flatten the morphism A -> B, where A occurs in the tower of B (default: the coefficients)."""
    if isinstance(B, CoefficientRing):
        if A is not None and A != B:
            raise VariableMismatch("a coefficient ring has no proper base")
        return Relative(B, (), (), (), ())
    if A is None:
        A = B.coefficients
    anc = B.ancestors()
    pos = next((i for i, a in enumerate(anc) if a is A or (isinstance(a, CoefficientRing) and a == A)), None)
    if pos is None:
        raise VariableMismatch(f"{A} is not a base of {B.name or B}")
    av = B.all_vars
    if isinstance(A, CoefficientRing):
        base_vars: Tuple[str, ...] = ()
        base_ideal: List[MultiPoly] = []
    else:
        base_vars = A.all_vars
        base_ideal = [g.embed(av) for g in A.ideal()]
    rels: List[MultiPoly] = []
    nloc = 0
    for layer in reversed(anc[:pos]):
        rels.extend(g.embed(av) for g in layer.own_relations())
        nloc += 1 if layer.localized_at else 0
    new_vars = tuple(v for v in av if v not in base_vars)
    return Relative(B.coefficients, base_vars, new_vars, tuple(base_ideal), tuple(rels), nloc)


@dataclass(frozen=True, eq=False)
class ModulePresentation:
    """over^generators / rowspace(relations); each relation row has one entry per generator."""

    over: FinitePresentation
    generators: int
    relations: Tuple[Tuple[MultiPoly, ...], ...] = ()
    name: str = ""

    def __post_init__(self):
        for row in self.relations:
            if len(row) != self.generators:
                raise VariableMismatch(f"relation row of length {len(row)} for {self.generators} generators")


# ----------------------------------------------------------------------------
# grammar


_BASE_RE = re.compile(r"^base\s*(Fp\s*\(\s*(\d+)\s*\)|Q|Z|Zmod\s*\(\s*(\d+)\s*\))$")
_POLY_RE = re.compile(r"^ring\s+([A-Za-z_]\w*)\s*=\s*poly\s*\[([^\]]*)\]$")
_RING_OVER_RE = re.compile(r"^ring\s+([A-Za-z_]\w*)\s*=\s*([A-Za-z_]\w*)\s*\[([^\]]*)\]\s*(?:/\s*\((.*)\))?$")
_QUOT_RE = re.compile(r"^ring\s+([A-Za-z_]\w*)\s*=\s*([A-Za-z_]\w*)\s*/\s*\((.*)\)$")
_LOC_RE = re.compile(r"^ring\s+([A-Za-z_]\w*)\s*=\s*([A-Za-z_]\w*)\s+loc\s*\((.*)\)$")
_MOD_RE = re.compile(r"^module\s+([A-Za-z_]\w*)\s+over\s+([A-Za-z_]\w*)\s*=\s*gens\s*(\d+)\s*(?:rels\s*(\[.*\]))?$")


def _split_top(s: str, sep: str = ",") -> List[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {s!r}")
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if depth:
        raise ParseError(f"unbalanced brackets in {s!r}")
    out.append(cur)
    return [x.strip() for x in out if x.strip()]


def _names(s: str) -> Tuple[str, ...]:
    names = tuple(n.strip() for n in s.split(",") if n.strip())
    for n in names:
        if not re.fullmatch(r"[A-Za-z_]\w*", n):
            raise ParseError(f"bad variable name {n!r}")
    if len(set(names)) != len(names):
        raise ParseError("repeated variable name")
    return names


@dataclass
class Document:
    base: Optional[CoefficientRing] = None
    rings: Dict[str, FinitePresentation] = field(default_factory=dict)
    modules: Dict[str, ModulePresentation] = field(default_factory=dict)
    order: List[str] = field(default_factory=list)

    @property
    def last_ring(self) -> FinitePresentation:
        for name in reversed(self.order):
            if name in self.rings:
                return self.rings[name]
        raise ParseError("no ring declared")

    def ring(self, name: str) -> Union[CoefficientRing, FinitePresentation]:
        if name in ("base", "k") and name not in self.rings:
            if self.base is None:
                raise ParseError("no base declared")
            return self.base
        try:
            return self.rings[name]
        except KeyError:
            raise ParseError(f"unknown ring {name!r}") from None


def parse_document(text: str) -> Document:
    doc = Document()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        line = re.sub(r"\s+", " ", line)
        try:
            _parse_line(doc, line)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        except (ValueError, VariableMismatch, BadParameters) as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return doc


def _base_of(doc: Document, name: str):
    return doc.ring(name)


def _parse_line(doc: Document, line: str) -> None:
    m = _BASE_RE.match(line)
    if m:
        if doc.base is not None:
            raise ParseError("base declared twice")
        spec = m.group(1).replace(" ", "")
        if spec.startswith("Fp"):
            doc.base = GF(int(m.group(2)))
        elif spec.startswith("Zmod"):
            doc.base = Zmod(int(m.group(3)))
        elif spec == "Q":
            doc.base = QQ
        else:
            doc.base = ZZ
        return
    if doc.base is None and not line.startswith("base"):
        raise ParseError("the first declaration must be 'base ...'")
    m = _POLY_RE.match(line)
    if m:
        name, vars = m.group(1), _names(m.group(2))
        _declare(doc, name, polynomial_ring(doc.base, vars, name))
        return
    m = _LOC_RE.match(line)
    if m:
        name, A = m.group(1), _base_of(doc, m.group(2))
        if isinstance(A, CoefficientRing):
            raise ParseError("cannot localize the base coefficient ring")
        _declare(doc, name, localization(A, _split_top(m.group(3)), name))
        return
    m = _RING_OVER_RE.match(line)
    if m and m.group(2) != "poly":
        name, A, vars = m.group(1), _base_of(doc, m.group(2)), _names(m.group(3))
        rels = _split_top(m.group(4)) if m.group(4) else []
        _declare(doc, name, over_ring(A, vars, rels, name))
        return
    m = _QUOT_RE.match(line)
    if m:
        name, A = m.group(1), _base_of(doc, m.group(2))
        rels = _split_top(m.group(3))
        if not rels:
            raise ParseError("empty relation list")
        _declare(doc, name, quotient(A, rels, name))
        return
    m = _MOD_RE.match(line)
    if m:
        name, over, gens = m.group(1), _base_of(doc, m.group(2)), int(m.group(3))
        if isinstance(over, CoefficientRing):
            over = polynomial_ring(over, (), m.group(2))
        rows: List[Tuple[MultiPoly, ...]] = []
        if m.group(4):
            body = m.group(4).strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise ParseError("relations must be a bracketed list")
            for row in _split_top(body[1:-1]):
                if not (row.startswith("[") and row.endswith("]")):
                    raise ParseError(f"relation row {row!r} must be bracketed")
                entries = _split_top(row[1:-1])
                rows.append(tuple(parse_poly(e, over.coefficients, over.all_vars) for e in entries))
        if name in doc.modules or name in doc.rings:
            raise ParseError(f"{name} declared twice")
        doc.modules[name] = ModulePresentation(over, gens, tuple(rows), name)
        doc.order.append(name)
        return
    raise ParseError(f"cannot parse declaration {line!r}")


def _declare(doc: Document, name: str, P: FinitePresentation) -> None:
    if name in doc.rings or name in doc.modules:
        raise ParseError(f"{name} declared twice")
    doc.rings[name] = P
    doc.order.append(name)
