"""Truncated cotangent complexes and André-Quillen (co)homology.

The general path takes Kähler differentials of a resolution levelwise, tensors
down to B and normalizes. Only fresh generators survive normalization: degree 0
is free on the presentation variables, degree n >= 1 on the stage-n generators,
and the differential of a stage-n generator is the linear part of its killed
cycle (the Jacobian of the relations in degree 1).

Fast paths cover polynomial algebras, quotients by regular sequences,
localizations and localizations of those, and are cross-checked against the
general path whenever both apply.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import linalg as la
from .chains import (ChainComplex, ExactnessReport, HomologyReport, PresentedModule, check_les, field_report,
                     homology, module_report)
from .coeffs import CoefficientRing, GF
from .errors import BadParameters, NotTorIndependent, TruncationExceeded, UnsupportedBase, VariableMismatch
from .poly import MultiPoly
from .presentation import FinitePresentation, Relative, localization, over_ring, relative
from .qring import FiniteModule, ModulePresentationData, QuotientRing, hom_matrix, subquotient, tensor_matrix
from .regular import constant_prime, is_regular_sequence
from .simplicial_rings import StagedAlgebra, extend, resolve
from .tor import tor

Ring = Union[CoefficientRing, FinitePresentation]
ModuleArg = Union[None, str, FiniteModule]

FAST_PATHS = ("Smooth", "RegularSequence", "Localization", "Composite")


@dataclass
class RawComplex:
    """A complex of free modules with polynomial matrices, not yet reduced into a ring.

    labels[n] names the basis of degree n; bd[n] has rows indexed by degree n-1.
    """

    vars: Tuple[str, ...]
    labels: List[List[str]]
    bd: Dict[int, List[List[MultiPoly]]]

    @property
    def ranks(self) -> List[int]:
        return [len(l) for l in self.labels]

    def over(self, R: QuotientRing, check: bool = True) -> ChainComplex:
        ranks = self.ranks
        bd = {}
        for n, M in self.bd.items():
            bd[n] = [[R(p) for p in row] for row in M]
        return ChainComplex(R, 0, ranks, bd, check=check)

    def to_json(self) -> Dict:
        return {
            "labels": self.labels,
            "boundaries": {str(n): [[p.to_str() for p in row] for row in M] for n, M in sorted(self.bd.items())},
        }


def _jacobian(rels: Sequence[MultiPoly], vars: Sequence[str]) -> List[List[MultiPoly]]:
    return [[f.diff(v) for f in rels] for v in vars]


def omega_complex(P: StagedAlgebra, through: Optional[int] = None, parts: Optional[Sequence[int]] = None) -> RawComplex:
    """Normalized Omega_{P/A} tensor pi_0, degrees 0..through (default: the truncation)."""
    top = P.N if through is None else min(through, P.N)
    keep = (lambda g: True) if parts is None else (lambda g: g.part in parts)
    V = P.coeff_vars
    x = [g for g in P.gens if g.stage == 0 and keep(g)]
    labels = [[g.name for g in x]]
    gens_by_stage = [x]
    bd: Dict[int, List[List[MultiPoly]]] = {}
    for n in range(1, top + 1):
        gs = [g for g in P.stage_generators(n) if keep(g)]
        labels.append([g.name for g in gs])
        below = gens_by_stage[-1]
        if n == 1:
            M = [[g.cycle.embed(V).diff(v.name) if v.name in V else MultiPoly.zero(P.coefficients, V) for g in gs]
                 for v in below]
        else:
            lin = [P.linear_part(g.cycle, n - 1) for g in gs]
            zero = MultiPoly.zero(P.coefficients, V)
            M = [[l.get(v.name, zero).embed(V) for l in lin] for v in below]
        bd[n] = M
        gens_by_stage.append(gs)
    return RawComplex(V, labels, bd)


# ----------------------------------------------------------------------------
# target rings


def target_ring(rel: Relative) -> Optional[QuotientRing]:
    """B as a quotient ring over a field: itself over a field, over F_p when p lies in the ideal over Z."""
    k = rel.coefficients
    V = rel.all_vars
    if k.is_field:
        return QuotientRing(k, V, rel.full_ideal)
    if k.kind == "Z":
        p = constant_prime(rel.full_ideal)
        if p is not None:
            Fp = GF(p)
            return QuotientRing(Fp, V, [g.change_ring(Fp) for g in rel.full_ideal])
    return None


def _resolve_module(R: Optional[QuotientRing], M: ModuleArg) -> Tuple[Optional[QuotientRing], Optional[FiniteModule]]:
    """(ring for the matrices, finite module or None for M = B)."""
    if isinstance(M, FiniteModule):
        return M.ring, M
    if M is None or M == "B":
        return R, None
    if R is None:
        raise UnsupportedBase("module computations need B to be an algebra over a field")
    if M == "k":
        K = FiniteModule.residue_field(R, {})
        if K.dim != 1:
            raise BadParameters("the origin is not a point of Spec B")
        return R, K
    if isinstance(M, str):
        gens = [g.strip() for g in M.split(",") if g.strip()]
        return R, FiniteModule.quotient(R, [R(g) for g in gens], name=f"B/({M})")
    raise BadParameters(f"unknown module {M!r}")


# ----------------------------------------------------------------------------
# cotangent truncations


@dataclass
class CotangentTruncation:
    source: str
    target: str
    raw: RawComplex
    reliable_through: int
    fast_path: Optional[str]
    ring: Optional[QuotientRing]
    coefficients: CoefficientRing
    cross_checked: Optional[bool] = None
    general: Optional[RawComplex] = field(default=None, repr=False)
    certificate: Optional[Dict] = None

    @property
    def complex(self) -> ChainComplex:
        if self.ring is None:
            raise UnsupportedBase("B is not an algebra over a field; use a module over F_p")
        return self.raw.over(self.ring)

    def homology(self, i: int, M: ModuleArg = None) -> HomologyReport:
        return _aq(self, i, M, cohomology=False)

    def cohomology(self, i: int, M: ModuleArg = None) -> HomologyReport:
        return _aq(self, i, M, cohomology=True)

    def to_json(self) -> Dict:
        d = {
            "source": self.source,
            "target": self.target,
            "fast_path": self.fast_path,
            "reliable_through": self.reliable_through,
            "cross_checked": self.cross_checked,
            "complex": self.raw.to_json(),
            "homology": [],
        }
        if self.ring is not None or self._free_over_z():
            d["homology"] = [self.homology(i).to_json() for i in range(self.reliable_through + 1)]
        if self.certificate is not None:
            d["certificate"] = self.certificate
        return d

    def _free_over_z(self) -> bool:
        return self.ring is None and all(r == 0 for r in self.raw.ranks[1:])


def _field_complex(raw: RawComplex, M: FiniteModule, cohomology: bool) -> ChainComplex:
    F = M.ring.field
    R = M.ring
    ranks = raw.ranks
    m = M.dim
    bd = {}
    if not cohomology:
        for n, D in raw.bd.items():
            Dr = [[R(p) for p in row] for row in D]
            bd[n] = tensor_matrix(M, Dr, ranks[n - 1], ranks[n]) if ranks[n - 1] and ranks[n] else \
                la.zeros(F, ranks[n - 1] * m, ranks[n] * m)
        return ChainComplex(F, 0, [r * m for r in ranks], bd, check=False)
    # Hom(L, M) placed in degrees -top..0: degree -n holds Hom(L_n, M)
    top = len(ranks) - 1
    cranks = [ranks[n] * m for n in range(top, -1, -1)]
    for n, D in raw.bd.items():
        Dr = [[R(p) for p in row] for row in D]
        bd[-(n - 1)] = hom_matrix(M, Dr, ranks[n - 1], ranks[n]) if ranks[n - 1] and ranks[n] else \
            la.zeros(F, ranks[n] * m, ranks[n - 1] * m)
    return ChainComplex(F, -top, cranks, bd, check=False)


def _aq(T: CotangentTruncation, i: int, M: ModuleArg, cohomology: bool) -> HomologyReport:
    if i < 0:
        return field_report(i, 0)
    if i > T.reliable_through:
        raise TruncationExceeded(f"degree {i} exceeds the reliable range 0..{T.reliable_through}")
    R, FM = _resolve_module(T.ring, M)
    if R is None:
        # B over Z without a prime: only free complexes concentrated in degree 0
        if T._free_over_z():
            r = T.raw.ranks[0] if i == 0 else 0
            return HomologyReport(i, r, (), None, r == 0)
        raise UnsupportedBase("homology over B needs a field or F_p-algebra")
    if FM is None:
        C = T.raw.over(R, check=False)
        return homology(C.dual(), -i) if cohomology else homology(C, i)
    C = _field_complex(T.raw, FM, cohomology)
    return homology(C, -i if cohomology else i)


def _localized_over(B: FinitePresentation, A: Ring) -> Optional[FinitePresentation]:
    """The algebra B' with B = B' localized, when B is a localization layer."""
    if isinstance(B, FinitePresentation) and B.localized_at and not B.vars and not B.relations:
        return B.base if isinstance(B.base, FinitePresentation) else None
    return None


def _same(a: Ring, b: Ring) -> bool:
    return a is b or (isinstance(a, CoefficientRing) and isinstance(b, CoefficientRing) and a == b)


def _fast_path(B: Ring, A: Ring, rel: Relative) -> Optional[Tuple[str, RawComplex]]:
    V = rel.all_vars
    base = _localized_over(B, A)
    if base is not None and _same(base, A):
        return "Localization", RawComplex(V, [[]], {})
    inner = rel
    tag_prefix = None
    if base is not None:
        inner_rel = relative(base, A)
        inner, tag_prefix = inner_rel, "Composite"
    if inner.localization_layers:
        return None
    if not inner.relations:
        raw = RawComplex(V, [list(inner.new_vars)], {})
        return (tag_prefix or "Smooth"), raw
    reg = is_regular_sequence(inner.coefficients, inner.all_vars, inner.base_ideal, list(inner.relations))
    if reg:
        rels = [f.embed(V) for f in inner.relations]
        raw = RawComplex(V, [list(inner.new_vars), [f"r{j}" for j in range(len(rels))]],
                         {1: _jacobian(rels, inner.new_vars)})
        return (tag_prefix or "RegularSequence"), raw
    return None


def _reports_agree(a: HomologyReport, b: HomologyReport) -> bool:
    return a.invariants() == b.invariants() and (a.presentation == b.presentation or a.zero)


def cotangent(B: Ring, A: Optional[Ring] = None, through: int = 2, seed: Optional[int] = None,
              cross_check: bool = True, use_fast_paths: bool = True) -> CotangentTruncation:
    """L_{B/A} in degrees 0..through+1, reliable through `through` (at most 2)."""
    if through > 2:
        raise TruncationExceeded("cotangent truncations stop at degree 2")
    if A is None:
        A = B.coefficients if isinstance(B, FinitePresentation) else B
    rel = relative(B, A)
    R = target_ring(rel)
    fast = _fast_path(B, A, rel) if use_fast_paths else None
    general = None
    cert = None
    if fast is None or (cross_check and rel.coefficients.is_field):
        P, c = resolve(B, A, through + 1, seed=seed, method="compute" if rel.coefficients.is_field else "auto")
        general = omega_complex(P)
        cert = c.to_json()
    raw = fast[1] if fast is not None else general
    T = CotangentTruncation(_name(A), _name(B), raw, through, fast[0] if fast else None, R, rel.coefficients,
                            None, general, cert)
    if fast is not None and general is not None and R is not None:
        G = CotangentTruncation(T.source, T.target, general, through, None, R, rel.coefficients)
        T.cross_checked = all(_reports_agree(T.homology(i), G.homology(i)) for i in range(through + 1))
    return T


def _name(X: Ring) -> str:
    return getattr(X, "name", "") or str(X)


def aq_homology(B: Ring, A: Optional[Ring] = None, M: ModuleArg = None, i: int = 0) -> HomologyReport:
    """D_i(B/A; M) = H_i(L tensor M)."""
    if i > 2:
        raise TruncationExceeded("André-Quillen groups are computed through degree 2")
    return cotangent(B, A, 2, cross_check=False).homology(i, M)


def aq_cohomology(B: Ring, A: Optional[Ring] = None, M: ModuleArg = None, i: int = 0) -> HomologyReport:
    """D^i(B/A; M) = H^i(Hom(L, M))."""
    if i > 2:
        raise TruncationExceeded("André-Quillen groups are computed through degree 2")
    return cotangent(B, A, 2, cross_check=False).cohomology(i, M)


def jacobian_omega(B: Ring, A: Optional[Ring] = None) -> HomologyReport:
    """Omega_{B/A} as the cokernel of the Jacobian of all relations, over B."""
    rel = relative(B, A)
    R = target_ring(rel)
    if R is None:
        raise UnsupportedBase("Omega presentation needs a field or F_p-algebra")
    V = rel.all_vars
    rels = [f.embed(V) for f in rel.relations]
    raw = RawComplex(V, [list(rel.new_vars), [f"r{j}" for j in range(len(rels))]],
                     {1: _jacobian(rels, rel.new_vars)} if rels and rel.new_vars else {})
    if not rels:
        raw = RawComplex(V, [list(rel.new_vars)], {})
    return homology(raw.over(R, check=False), 0)


# ----------------------------------------------------------------------------
# transitivity


@dataclass
class LESReport:
    kind: str
    labels: List[str]
    dimensions: List[int]
    exactness: ExactnessReport
    groups: Dict[str, List[int]]

    @property
    def exact(self) -> bool:
        return self.exactness.exact

    def to_json(self) -> Dict:
        return {
            "kind": self.kind,
            "terms": [{"group": l, "dimension": d} for l, d in zip(self.labels, self.dimensions)],
            "exactness": self.exactness.to_json(),
            "groups": self.groups,
        }


def _cohomology_space(F: CoefficientRing, C: ChainComplex, n: int):
    """(cycle basis Z as columns of length rank n, PresentedModule of Z/B)."""
    dim = C.rank(n)
    if dim == 0:
        return [], PresentedModule(F, 0)
    d_out = C.d(n)
    Z = la.kernel(F, d_out, dim) if C.rank(n - 1) else [[F.one if a == b else F.zero for a in range(dim)] for b in range(dim)]
    d_in = C.d(n + 1)
    bnd = [[d_in[a][b] for a in range(dim)] for b in range(C.rank(n + 1))]
    rels = []
    if Z:
        Zm = [[Z[c][a] for c in range(len(Z))] for a in range(dim)]
        for v in bnd:
            if any(v):
                x = la.solve(F, Zm, v, len(Z))
                if x is None:
                    raise ArithmeticError("boundary outside the cycles")
                rels.append(x)
    return Z, PresentedModule(F, len(Z), rels)


def _induced(F, f, Zs: List[List], Zt: List[List], dim_t: int) -> List[List]:
    """Matrix (rows: target cycle basis) of a chain-level map f on cycle bases."""
    cols = []
    Zm = [[Zt[c][a] for c in range(len(Zt))] for a in range(dim_t)]
    for z in Zs:
        img = f(z)
        if not Zt:
            cols.append([])
            continue
        x = la.solve(F, Zm, img, len(Zt))
        if x is None:
            raise ArithmeticError("image of a cycle is not a cycle")
        cols.append(x)
    return [[cols[c][r] for c in range(len(Zs))] for r in range(len(Zt))]


def transitivity_les(A: Ring, B: Ring, C: Ring, M: ModuleArg = None, through: int = 2,
                     kind: str = "cohomology") -> LESReport:
    """The long exact sequence of A -> B -> C with coefficients in a finite C-module M, verified.

    One resolution of C over A is built from a resolution of B over A by
    adjoining generators for C, so L_{B/A} tensor C sits inside L_{C/A} with
    quotient L_{C/B} and the sequence comes from a levelwise split exact
    sequence of complexes.
    """
    if through > 2:
        raise TruncationExceeded("transitivity is checked through degree 2")
    rb = relative(B, A)
    rc = relative(C, B)
    rca = relative(C, A)
    N = through + 1
    P = StagedAlgebra(rb.coefficients, rb.base_vars, rb.base_ideal, N)
    mth = "compute" if rb.coefficients.is_field else "auto"
    extend(P, rb.new_vars, list(rb.relations), method=mth, part=0)
    extend(P, rc.new_vars, list(rc.relations), method=mth, part=1)
    raw = omega_complex(P)
    top = len(raw.labels) - 1
    R = target_ring(rca)
    if M is None:
        M = "k"
    Rm, FM = _resolve_module(R, M)
    if FM is None and R is not None and R.dimension is not None:
        FM = FiniteModule.regular(R)
    if FM is None:
        raise BadParameters("transitivity needs a finite-dimensional module")
    F = FM.ring.field
    m = FM.dim
    parts = {n: [P.gens[[g.name for g in P.gens].index(l)].part for l in raw.labels[n]] for n in range(len(raw.labels))}
    cohom = kind == "cohomology"
    full = _field_complex(raw, FM, cohom)

    def sub_raw(keep):
        labels = [[l for l, p in zip(raw.labels[n], parts[n]) if p == keep] for n in range(len(raw.labels))]
        bd = {}
        for n, Mx in raw.bd.items():
            rows = [r for r, p in enumerate(parts[n - 1]) if p == keep]
            cols = [c for c, p in enumerate(parts[n]) if p == keep]
            bd[n] = [[Mx[r][c] for c in cols] for r in rows]
        return RawComplex(raw.vars, labels, bd)

    ba, cb = sub_raw(0), sub_raw(1)
    C_ba = _field_complex(ba, FM, cohom)
    C_cb = _field_complex(cb, FM, cohom)

    def coords(n, keep):
        """Coordinates of the part `keep` inside the full complex at degree n."""
        out = []
        for b, p in enumerate(parts[n]):
            if p == keep:
                out.extend(range(b * m, (b + 1) * m))
        return out

    complexes = {"CB": C_cb, "CA": full, "BA": C_ba}

    def deg(n):
        return -n if cohom else n

    def emb(pos, dim):
        def f(v):
            w = [F.zero] * dim
            for i, p in zip(range(len(v)), pos):
                w[p] = v[i]
            return w
        return f

    def sel(pos):
        return lambda v: [v[p] for p in pos]

    def full_d(n):
        D = full.d(deg(n))
        rows = full.rank(deg(n) - 1)
        return lambda v: [F(sum((D[a][b] * v[b] for b in range(len(v))), F.zero)) for a in range(rows)]

    def chain_map(src, dst):
        (a, n), (b, k) = src, dst
        dim_n = full.rank(deg(n))
        if (a, b) in (("CB", "CA"), ("CA", "CB")):
            return emb(coords(n, 1), dim_n) if a == "CB" else sel(coords(n, 1))
        if (a, b) in (("BA", "CA"), ("CA", "BA")):
            return emb(coords(n, 0), dim_n) if a == "BA" else sel(coords(n, 0))
        # connecting map: lift by zero, apply the full differential, read the other part
        lift = emb(coords(n, 0 if a == "BA" else 1), dim_n)
        d = full_d(n)
        read = sel(coords(k, 1 if b == "CB" else 0))
        return lambda v: read(d(lift(v)))

    spaces = {}
    seq: List[Tuple[str, int]] = []
    if cohom:
        for n in range(0, through + 1):
            seq += [("CB", n), ("CA", n), ("BA", n)]
        if through + 1 <= top:
            seq.append(("CB", through + 1))
    else:
        for n in range(through, -1, -1):
            seq += [("BA", n), ("CA", n), ("CB", n)]
    for key in seq:
        spaces[key] = _cohomology_space(F, complexes[key[0]], deg(key[1]))
    names = {"CB": "C/B", "CA": "C/A", "BA": "B/A"}
    mods: List[PresentedModule] = []
    maps: List[List[List]] = []
    labels: List[str] = []
    if cohom:
        mods.append(PresentedModule(F, 0))
    for idx, key in enumerate(seq):
        Z, pm = spaces[key]
        if mods:
            if idx == 0:
                maps.append([[] for _ in range(pm.ngens)])
            else:
                prev = seq[idx - 1]
                maps.append(_induced(F, chain_map(prev, key), spaces[prev][0], Z,
                                     complexes[key[0]].rank(deg(key[1]))))
        mods.append(pm)
        labels.append(("D^" if cohom else "D_") + f"{key[1]}({names[key[0]]})")
    if not cohom:
        mods.append(PresentedModule(F, 0))
        maps.append([])
    exactness = check_les(mods, maps)
    body = mods[1:] if cohom else mods[:-1]
    dims = [pm.ngens - _rank_of(F, pm) for pm in body]
    groups: Dict[str, Dict[str, int]] = {v: {} for v in names.values()}
    for key, d in zip(seq, dims):
        groups[names[key[0]]][str(key[1])] = d
    return LESReport(kind, labels, dims, exactness, groups)


def _rank_of(F, pm: PresentedModule) -> int:
    if not pm.relations or not pm.ngens:
        return 0
    return la.rank(F, [list(r) for r in pm.relations], pm.ngens)


def conormal_module(B: Ring, A: Optional[Ring] = None) -> HomologyReport:
    """I/I^2 as a B-module, computed directly from the ideal (independent of any resolution)."""
    rel = relative(B, A)
    R = target_ring(rel)
    if R is None or not rel.coefficients.is_field:
        raise UnsupportedBase("the conormal module is computed over a field")
    P = QuotientRing(rel.coefficients, rel.all_vars, list(rel.base_ideal))
    fs = [P.reduce(f) for f in rel.relations]
    squares = [[P.reduce(f * g)] for a, f in enumerate(fs) for g in fs[a:]]
    pres = subquotient(P, [[f] for f in fs], squares, 1)
    return module_report(1, ModulePresentationData(R, pres.ngens, pres.relations, pres.generator_images))


# ----------------------------------------------------------------------------
# base change and quasismoothness


@dataclass
class BaseChangeReport:
    degree: int
    tor_independent: bool
    left: HomologyReport
    right: HomologyReport

    @property
    def equal(self) -> bool:
        return _reports_agree(self.left, self.right)

    def to_json(self) -> Dict:
        return {"degree": self.degree, "tor_independent": self.tor_independent, "equal": self.equal,
                "left": self.left.to_json(), "right": self.right.to_json()}


def tensor_product(B: FinitePresentation, B2: Ring, A: Ring, name: str = "") -> FinitePresentation:
    """B tensor_A B2 presented over B2."""
    rb = relative(B, A)
    if rb.localization_layers:
        raise UnsupportedBase("tensor products of localizations are not presented")
    taken = set(B2.all_vars) if isinstance(B2, FinitePresentation) else set()
    if taken & set(rb.new_vars):
        raise VariableMismatch("B and B2 share variable names")
    if isinstance(B2, FinitePresentation) and B2.depth >= 2:
        # same ring, one layer, so the product stays within the nesting limit
        B2 = over_ring(B2.coefficients, B2.all_vars, [g.to_str() for g in B2.ideal()], _name(B2))
    return over_ring(B2, rb.new_vars, [f.to_str() for f in rb.relations], name or f"{_name(B)}x{_name(B2)}")


def base_change_check(B: FinitePresentation, B2: Ring, A: Optional[Ring] = None, M: ModuleArg = None,
                      i: int = 0) -> BaseChangeReport:
    """Compare D_i(B tensor B2 / B2; M) with H_i(L_{B/A} tensor_B (B tensor B2); M)."""
    if A is None:
        A = B.coefficients
    for j in (1, 2, 3):
        if not tor(B, B2, A, j).zero:
            raise NotTorIndependent(f"Tor_{j} does not vanish")
    C = tensor_product(B, B2, A)
    # the left side is resolved from scratch when the general path is available
    left_T = cotangent(C, C.base, 2, cross_check=False, use_fast_paths=not C.coefficients.is_field)
    LB = cotangent(B, A, 2, cross_check=False)
    # L_{B/A} with entries read in B tensor B2
    right_T = CotangentTruncation(_name(A), _name(C), LB.raw, 2, LB.fast_path, left_T.ring, LB.coefficients)
    return BaseChangeReport(i, True, left_T.homology(i, M), right_T.homology(i, M))


def localization_check(B: FinitePresentation, elements: Sequence[str], A: Optional[Ring] = None,
                       i: int = 0) -> BaseChangeReport:
    """Compare D_i(T^-1 B / A) with H_i(L_{B/A} tensor T^-1 B), both with coefficients in T^-1 B."""
    if A is None:
        A = B.coefficients
    BT = localization(B, elements, f"{_name(B)}_loc")
    left_T = cotangent(BT, A, 2, cross_check=False, use_fast_paths=not BT.coefficients.is_field)
    LB = cotangent(B, A, 2, cross_check=False)
    right_T = CotangentTruncation(_name(A), _name(BT), LB.raw, 2, LB.fast_path, left_T.ring, LB.coefficients)
    return BaseChangeReport(i, True, left_T.homology(i), right_T.homology(i))


def product_check(B: FinitePresentation, B2: FinitePresentation, A: Ring, i: int) -> Tuple[int, int, int]:
    """dim D^i(B tensor B2 / A; k) and the two summands dim D^i(B/A; k), dim D^i(B2/A; k), k at the origin."""
    for j in (1, 2, 3):
        if not tor(B, B2, A, j).zero:
            raise NotTorIndependent(f"Tor_{j} does not vanish")
    C = tensor_product(B, B2, A)
    whole = aq_cohomology(C, A, "k", i).dimension
    return whole, aq_cohomology(B, A, "k", i).dimension, aq_cohomology(B2, A, "k", i).dimension


@dataclass
class QuasismoothReport:
    h2_zero: bool
    h2_residue: Optional[int]
    chi: Optional[int]
    chi_method: str
    verdict: str

    def to_json(self) -> Dict:
        return {"h2_zero": self.h2_zero, "h2_residue_dimension": self.h2_residue, "chi": self.chi,
                "chi_method": self.chi_method, "verdict": self.verdict}


def quasismooth_report(B: Ring, A: Optional[Ring] = None) -> QuasismoothReport:
    """H_2 of L with coefficients in B and in the residue field at the origin, plus chi when it is defined.

    H_2 with coefficients in B can vanish for a non-LCI ring (x^2, xy), so
    the residue field is checked whenever the origin lies on Spec B.
    """
    T = cotangent(B, A, 2, cross_check=False)
    hs = [T.homology(i) for i in range(3)]
    residue = None
    if T.ring is not None and FiniteModule.residue_field(T.ring, {}).dim == 1:
        residue = T.homology(2, "k").dimension
    h2_zero = hs[2].zero and not residue
    chi, how = None, "undetermined"
    if hs[0].free_rank is not None and hs[1].free_rank is not None:
        chi, how = hs[0].free_rank - hs[1].free_rank, "ranks of free homology"
    elif h2_zero and all(r == 0 for r in T.raw.ranks[2:]):
        chi, how = T.raw.ranks[0] - (T.raw.ranks[1] if len(T.raw.ranks) > 1 else 0), "ranks of the perfect complex"
    verdict = "quasismooth through degree 2 only" if h2_zero else "not LCI: D_2(B/k; k) = H_2(L tensor k) is nonzero"
    return QuasismoothReport(h2_zero, residue, chi, how, verdict)
