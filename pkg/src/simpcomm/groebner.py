"""Buchberger's algorithm for ideals and for submodules of free modules.

Vectors are handled internally as dicts {(position, exponent): coefficient}.
Ideals are the rank-one case. Field coefficients only.
"""
from __future__ import annotations

import heapq
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .coeffs import CoefficientRing
from .errors import NonFieldCoefficients, VariableMismatch
from .poly import MultiPoly, order_key

Term = Tuple[int, Tuple[int, ...]]
Vec = Dict[Term, object]


class TermOrder:
    """Monomial order on P^r: 'top' compares monomials first, 'pot' positions first.

    Lower positions count as larger, so e_0 > e_1 > ...
    """

    def __init__(self, mono: str = "grevlex", mode: str = "top"):
        self.mono = mono
        self.mode = mode
        mk = order_key(mono)
        if mode == "top":
            self.key = lambda t: (mk(t[1]), -t[0])
        elif mode == "pot":
            self.key = lambda t: (-t[0], mk(t[1]))
        else:
            raise ValueError(mode)

    def __repr__(self):
        return f"TermOrder({self.mono!r}, {self.mode!r})"


def vec_from_polys(polys: Sequence[MultiPoly]) -> Vec:
    v: Vec = {}
    for i, p in enumerate(polys):
        for e, c in p.terms.items():
            v[(i, e)] = c
    return v


def vec_to_polys(v: Vec, rank: int, ring: CoefficientRing, vars: Sequence[str]) -> List[MultiPoly]:
    buckets: List[dict] = [dict() for _ in range(rank)]
    for (i, e), c in v.items():
        buckets[i][e] = c
    return [MultiPoly(ring, vars, b) for b in buckets]


def _lead(v: Vec, order: TermOrder) -> Term:
    return max(v, key=order.key)


def _divides(a: Term, b: Term) -> bool:
    return a[0] == b[0] and all(x <= y for x, y in zip(a[1], b[1]))


def _add_into(R: CoefficientRing, acc: Vec, v: Vec, shift: Tuple[int, ...], c, pos_override: Optional[int] = None) -> None:
    """acc += c * x^shift * v (in place)."""
    for (i, e), a in v.items():
        t = (i if pos_override is None else pos_override, tuple(x + y for x, y in zip(e, shift)))
        s = R.add(acc.get(t, R.zero), R.mul(a, c))
        if s:
            acc[t] = s
        else:
            acc.pop(t, None)


def _scale(R: CoefficientRing, v: Vec, c) -> Vec:
    out = {}
    for t, a in v.items():
        b = R.mul(a, c)
        if b:
            out[t] = b
    return out


class _Basis:
    """Growing Gröbner basis with optional cofactor tracking."""

    def __init__(self, R: CoefficientRing, order: TermOrder, nvars: int, track: bool):
        self.R = R
        self.order = order
        self.nvars = nvars
        self.track = track
        self.elems: List[Vec] = []
        self.leads: List[Term] = []
        self.cof: List[Vec] = []  # cofactors w.r.t. the original generators

    def reduce(self, v: Vec, cof: Optional[Vec] = None, full: bool = True, quotients: bool = False):
        """Return (remainder, cofactor_of_remainder, quotient_vec).

        quotient_vec collects sum_k q_k e_k with v = sum q_k g_k + remainder.
        """
        R, order = self.R, self.order
        v = dict(v)
        cof = dict(cof) if cof is not None else ({} if self.track else None)
        rem: Vec = {}
        quo: Vec = {} if quotients else None
        zero_e = (0,) * self.nvars
        while v:
            lt = max(v, key=order.key)
            lc = v[lt]
            for k, g_lt in enumerate(self.leads):
                if _divides(g_lt, lt):
                    shift = tuple(a - b for a, b in zip(lt[1], g_lt[1]))
                    c = R.neg(R.div(lc, self.elems[k][g_lt]))
                    _add_into(R, v, self.elems[k], shift, c)
                    if cof is not None:
                        _add_into(R, cof, self.cof[k], shift, c)
                    if quo is not None:
                        t = (k, shift)
                        s = R.sub(quo.get(t, R.zero), c)
                        if s:
                            quo[t] = s
                        else:
                            quo.pop(t, None)
                    break
            else:
                if not full:
                    rem.update(v)
                    break
                rem[lt] = lc
                del v[lt]
        return rem, cof, quo


def _spair(R, order, f: Vec, lf: Term, g: Vec, lg: Term):
    lcm = tuple(max(a, b) for a, b in zip(lf[1], lg[1]))
    sf = tuple(a - b for a, b in zip(lcm, lf[1]))
    sg = tuple(a - b for a, b in zip(lcm, lg[1]))
    cf = R.inv(f[lf])
    cg = R.neg(R.inv(g[lg]))
    return lcm, sf, cf, sg, cg


def _buchberger(R: CoefficientRing, gens: List[Vec], order: TermOrder, nvars: int, track: bool = False,
                record_syz: bool = False):
    """Run Buchberger. Returns (basis object, syzygies of the basis elements if requested)."""
    R.require_field("Groebner basis")
    B = _Basis(R, order, nvars, track)
    syz_records = []  # (i, j, shift_i, c_i, shift_j, c_j, quotients)
    heap: List[Tuple] = []
    pending = set()
    zero_e = (0,) * nvars

    def push(j: int, idx: int):
        lcm = tuple(max(a, b) for a, b in zip(B.leads[j][1], B.leads[idx][1]))
        heapq.heappush(heap, (sum(lcm), order.key((B.leads[idx][0], lcm)), idx, j))
        pending.add((j, idx))

    def add(v: Vec, cof: Optional[Vec]):
        idx = len(B.elems)
        lt = _lead(v, order)
        B.elems.append(v)
        B.leads.append(lt)
        B.cof.append(cof if cof is not None else {})
        for j in range(idx):
            if B.leads[j][0] == lt[0]:
                push(j, idx)

    # reduce inputs one by one; keep the identity of original generators via cofactors
    for i, g in enumerate(gens):
        if not g:
            continue
        cof = {(i, zero_e): R.one} if track else None
        add(dict(g), cof)

    def chain(i: int, j: int, lf: Term, lg: Term) -> bool:
        # some lead divides lcm(lf, lg) and both of its pairs with i, j are already handled;
        # the S-polynomial and its syzygy are then combinations of handled ones
        lcm = (lf[0], tuple(max(a, b) for a, b in zip(lf[1], lg[1])))
        for k, lk in enumerate(B.leads):
            if k == i or k == j or not _divides(lk, lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                return True
        return False

    while heap:
        _, _, j, i = heapq.heappop(heap)
        pending.discard((i, j))
        f, g = B.elems[i], B.elems[j]
        lf, lg = B.leads[i], B.leads[j]
        # product criterion only valid in rank one (genuine ring elements)
        if not record_syz and all(a == 0 or b == 0 for a, b in zip(lf[1], lg[1])) and _rank_one(B):
            continue
        if chain(i, j, lf, lg):
            continue
        lcm, sf, cf, sg, cg = _spair(R, order, f, lf, g, lg)
        s: Vec = {}
        _add_into(R, s, f, sf, cf)
        _add_into(R, s, g, sg, cg)
        scof = None
        if track:
            scof = {}
            _add_into(R, scof, B.cof[i], sf, cf)
            _add_into(R, scof, B.cof[j], sg, cg)
        rem, rcof, quo = B.reduce(s, scof, full=True, quotients=record_syz)
        if rem:
            if record_syz:
                # the new element k satisfies s - sum q g = rem = g_k
                syz_records.append((i, j, sf, cf, sg, cg, quo, len(B.elems)))
            add(rem, rcof)
        elif record_syz:
            syz_records.append((i, j, sf, cf, sg, cg, quo, None))
    return B, syz_records


def _rank_one(B: _Basis) -> bool:
    return all(lt[0] == 0 for lt in B.leads)


def _interreduce(B: _Basis) -> Tuple[List[Vec], List[Vec]]:
    """Minimal then reduced basis, monic, sorted by leading term descending."""
    R, order = B.R, B.order
    idx = list(range(len(B.elems)))
    keep = []
    for k in idx:
        lt = B.leads[k]
        redundant = False
        for j in idx:
            if j == k:
                continue
            if _divides(B.leads[j], lt) and (B.leads[j] != lt or j < k):
                redundant = True
                break
        if not redundant:
            keep.append(k)
    elems = [B.elems[k] for k in keep]
    cofs = [B.cof[k] for k in keep]
    # full interreduction
    out_e, out_c = [], []
    for pos, k in enumerate(keep):
        others = _Basis(R, order, B.nvars, B.track)
        for j in keep:
            if j != k:
                others.elems.append(B.elems[j])
                others.leads.append(B.leads[j])
                others.cof.append(B.cof[j])
        lt = B.leads[k]
        v = B.elems[k]
        lc = v[lt]
        head = {lt: lc}
        tail = {t: c for t, c in v.items() if t != lt}
        rem, rcof, _ = others.reduce(tail, {} if B.track else None, full=True)
        newv = dict(rem)
        newv[lt] = lc
        inv = R.inv(lc)
        newv = _scale(R, newv, inv)
        newc = None
        if B.track:
            # v = head + tail ; tail = sum(...) + rem ; new = head + rem = v - (tail - rem)
            newc = dict(B.cof[k])
            # rcof holds the cofactor change applied to tail: rem = tail + rcof-combination
            for t, c in (rcof or {}).items():
                s = R.add(newc.get(t, R.zero), c)
                if s:
                    newc[t] = s
                else:
                    newc.pop(t, None)
            newc = _scale(R, newc, inv)
        out_e.append(newv)
        out_c.append(newc)
    order_idx = sorted(range(len(out_e)), key=lambda i: order.key(_lead(out_e[i], order)), reverse=True)
    return [out_e[i] for i in order_idx], [out_c[i] for i in order_idx]


# ----------------------------------------------------------------------------
# module-level API


class SubmoduleGB:
    """Reduced Gröbner basis of a submodule of P^rank, with cofactors to the generators."""

    def __init__(self, ring: CoefficientRing, vars: Sequence[str], rank: int, gens: Sequence[Sequence[MultiPoly]],
                 order: Optional[TermOrder] = None, track: bool = False):
        ring.require_field("Groebner basis")
        self.ring = ring
        self.vars = tuple(vars)
        self.rank = rank
        self.order = order or TermOrder("grevlex", "top")
        self.track = track
        for g in gens:
            if len(g) != rank:
                raise VariableMismatch(f"vector of length {len(g)} in rank {rank}")
            for p in g:
                if p.vars != self.vars or p.ring != ring:
                    raise VariableMismatch(f"{p!r} not in {ring}{list(self.vars)}")
        self.gens = [vec_from_polys(g) for g in gens]
        B, _ = _buchberger(ring, self.gens, self.order, len(self.vars), track=track)
        elems, cofs = _interreduce(B)
        self.basis_vecs = elems
        self.cofactors = cofs
        self._basis = _Basis(ring, self.order, len(self.vars), track)
        for v, c in zip(elems, cofs):
            self._basis.elems.append(v)
            self._basis.leads.append(_lead(v, self.order))
            self._basis.cof.append(c if c is not None else {})

    @property
    def basis(self) -> List[List[MultiPoly]]:
        return [vec_to_polys(v, self.rank, self.ring, self.vars) for v in self.basis_vecs]

    @property
    def leads(self) -> List[Term]:
        return list(self._basis.leads)

    def is_unit_module(self) -> bool:
        """True when the submodule is all of P^rank."""
        zero = (0,) * len(self.vars)
        return {lt[0] for lt in self._basis.leads if lt[1] == zero} == set(range(self.rank))

    def reduce_vec(self, v: Vec) -> Vec:
        rem, _, _ = self._basis.reduce(v, None, full=True)
        return rem

    def normal_form(self, vec: Sequence[MultiPoly]) -> List[MultiPoly]:
        return vec_to_polys(self.reduce_vec(vec_from_polys(vec)), self.rank, self.ring, self.vars)

    def contains(self, vec: Sequence[MultiPoly]) -> bool:
        return not self.reduce_vec(vec_from_polys(vec))

    def contains_module(self, other: "SubmoduleGB") -> bool:
        return all(not self.reduce_vec(v) for v in other.basis_vecs)

    def lift(self, vec: Sequence[MultiPoly]) -> Optional[List[MultiPoly]]:
        """Coefficients c with vec = sum c_i gens_i, or None if vec is not in the module."""
        if not self.track:
            raise ValueError("lift needs track=True")
        rem, _, quo = self._basis.reduce(vec_from_polys(vec), None, full=True, quotients=True)
        if rem:
            return None
        total: Vec = {}
        for (k, shift), q in quo.items():
            _add_into(self.ring, total, self._basis.cof[k], shift, q)
        return vec_to_polys(total, len(self.gens), self.ring, self.vars)

    def standard_monomial_count(self, cap: int = 100000) -> Optional[int]:
        """k-dimension of P^rank / M if finite, else None."""
        return standard_monomial_count(self._basis.leads, self.rank, len(self.vars), cap)

    def standard_monomials(self, cap: int = 100000) -> Optional[List[Term]]:
        return standard_monomials(self._basis.leads, self.rank, len(self.vars), cap)

    def __eq__(self, other):
        return isinstance(other, SubmoduleGB) and self.basis_vecs == other.basis_vecs and self.rank == other.rank


def standard_monomials(leads: Sequence[Term], rank: int, nvars: int, cap: int = 100000) -> Optional[List[Term]]:
    """Enumerate terms not divisible by any leading term; None if infinitely many."""
    out: List[Term] = []
    for pos in range(rank):
        lts = [lt[1] for lt in leads if lt[0] == pos]
        if any(not any(e) for e in lts):
            continue
        # finite iff each variable has a pure power among the leading monomials
        for v in range(nvars):
            if not any(e[v] > 0 and sum(e) == e[v] for e in lts):
                return None
        if nvars == 0:
            if not lts:
                out.append((pos, ()))
            continue
        bounds = []
        for v in range(nvars):
            bounds.append(min(e[v] for e in lts if e[v] > 0 and sum(e) == e[v]))
        # depth-first enumeration inside the box
        stack = [()]
        while stack:
            prefix = stack.pop()
            if len(prefix) == nvars:
                if not any(all(a >= b for a, b in zip(prefix, e)) for e in lts):
                    out.append((pos, prefix))
                    if len(out) > cap:
                        raise OverflowError("too many standard monomials")
                continue
            for k in range(bounds[len(prefix)] - 1, -1, -1):
                stack.append(prefix + (k,))
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def standard_monomial_count(leads: Sequence[Term], rank: int, nvars: int, cap: int = 100000) -> Optional[int]:
    sm = standard_monomials(leads, rank, nvars, cap)
    return None if sm is None else len(sm)


# ----------------------------------------------------------------------------
# ideal-level API


def _check_polys(gens: Sequence[MultiPoly]) -> Tuple[CoefficientRing, Tuple[str, ...]]:
    if not gens:
        raise ValueError("need at least one polynomial")
    ring, vars = gens[0].ring, gens[0].vars
    for g in gens:
        if g.vars != vars or g.ring != ring:
            raise VariableMismatch(f"{g!r} does not match {ring}{list(vars)}")
    return ring, vars


def groebner_basis(gens: Sequence[MultiPoly], order: str = "grevlex") -> List[MultiPoly]:
    """Reduced Gröbner basis (monic, sorted by leading monomial, largest first)."""
    ring, vars = _check_polys(gens)
    if not ring.is_field:
        raise NonFieldCoefficients(f"Groebner bases need field coefficients, got {ring}")
    gb = SubmoduleGB(ring.as_field(), vars, 1, [[g.change_ring(ring.as_field())] for g in gens],
                     TermOrder(order, "top"))
    return [b[0].change_ring(ring) for b in gb.basis]


def normal_form(p: MultiPoly, basis: Sequence[MultiPoly], order: str = "grevlex") -> MultiPoly:
    """Remainder of p on division by a Gröbner basis."""
    for b in basis:
        if b.vars != p.vars or b.ring != p.ring:
            raise VariableMismatch(f"{b!r} does not match {p.ring}{list(p.vars)}")
    p.ring.require_field("normal form")
    if not basis or p.is_zero():
        return p
    order_t = TermOrder(order, "top")
    B = _Basis(p.ring, order_t, len(p.vars), False)
    for b in basis:
        if b:
            v = vec_from_polys([b])
            B.elems.append(v)
            B.leads.append(_lead(v, order_t))
            B.cof.append({})
    rem, _, _ = B.reduce(vec_from_polys([p]))
    return vec_to_polys(rem, 1, p.ring, p.vars)[0]


def ideal_contains(gens: Sequence[MultiPoly], p: MultiPoly) -> bool:
    gb = groebner_basis(gens)
    return normal_form(p, gb).is_zero()


# ----------------------------------------------------------------------------
# syzygies


def module_syzygies(ring: CoefficientRing, vars: Sequence[str], rank: int, gens: Sequence[Sequence[MultiPoly]],
                    minimize: bool = True) -> List[List[MultiPoly]]:
    """Generators of ker(P^s -> P^rank), columns mapping to gens.

    Uses Schreyer's construction from a tracked Gröbner computation, then returns
    the reduced position-over-term basis of the syzygy module, with redundant
    members removed greedily (last first).
    """
    ring.require_field("syzygies")
    vars = tuple(vars)
    nv = len(vars)
    s = len(gens)
    zero_e = (0,) * nv
    vecs = [vec_from_polys(g) for g in gens]
    order = TermOrder("grevlex", "top")
    B, records = _buchberger(ring, vecs, order, nv, track=True, record_syz=True)
    R = ring
    # cofactor matrix: basis element k = sum_i T[k][i] gens_i  (B.cof[k] as vec with positions i)
    syz_out: List[Vec] = []

    def basis_syz_to_gens(coeffs: Vec) -> Vec:
        """coeffs: vector over basis indices -> vector over generator indices."""
        out: Vec = {}
        for (k, e), c in coeffs.items():
            _add_into(R, out, B.cof[k], e, c)
        return out

    for (i, j, sf, cf, sg, cg, quo, newk) in records:
        coeffs: Vec = {}
        coeffs[(i, sf)] = cf
        t = (j, sg)
        coeffs[t] = R.add(coeffs.get(t, R.zero), cg)
        for (k, shift), q in quo.items():
            t = (k, shift)
            v = R.sub(coeffs.get(t, R.zero), q)
            if v:
                coeffs[t] = v
            else:
                coeffs.pop(t, None)
        if newk is not None:
            t = (newk, zero_e)
            v = R.sub(coeffs.get(t, R.zero), R.one)
            if v:
                coeffs[t] = v
            else:
                coeffs.pop(t, None)
        w = basis_syz_to_gens(coeffs)
        if w:
            syz_out.append(w)
    # pairs skipped by the product criterion never occur (record_syz disables it).
    # Relations expressing each generator through the basis: e_i - T U e_i
    for i, g in enumerate(vecs):
        if not g:
            syz_out.append({(i, zero_e): R.one})
            continue
        rem, _, quo = B.reduce(g, None, full=True, quotients=True)
        assert not rem
        w = basis_syz_to_gens(quo)
        t = (i, zero_e)
        v = R.sub(w.get(t, R.zero), R.one)
        if v:
            w[t] = v
        else:
            w.pop(t, None)
        if w:
            syz_out.append(w)
    if not syz_out:
        return []
    cols = [vec_to_polys(w, s, ring, vars) for w in syz_out]
    gb = SubmoduleGB(ring, vars, s, cols, TermOrder("grevlex", "pot"))
    result = gb.basis
    if minimize:
        result = prune_generators(ring, vars, s, result)
    return result


def prune_generators(ring, vars, rank, gens: List[List[MultiPoly]]) -> List[List[MultiPoly]]:
    """Drop generators lying in the span of the others (greedy, from the end)."""
    cur = list(gens)
    k = len(cur) - 1
    while k >= 0 and len(cur) > 1:
        others = cur[:k] + cur[k + 1:]
        gb = SubmoduleGB(ring, vars, rank, others, TermOrder("grevlex", "pot"))
        if gb.contains(cur[k]):
            cur = others
        k -= 1
    return cur


def syzygies(gens: Sequence[MultiPoly]) -> List[List[MultiPoly]]:
    """Columns generating the syzygy module of gens (each column has len(gens) entries)."""
    ring, vars = _check_polys(gens)
    if not ring.is_field:
        raise NonFieldCoefficients(f"syzygies need field coefficients, got {ring}")
    F = ring.as_field()
    cols = module_syzygies(F, vars, 1, [[g.change_ring(F)] for g in gens])
    return [[c.change_ring(ring) for c in col] for col in cols]


def koszul_syzygies(gens: Sequence[MultiPoly]) -> List[List[MultiPoly]]:
    """The trivial syzygies f_j e_i - f_i e_j."""
    ring, vars = _check_polys(gens)
    m = len(gens)
    out = []
    zero = MultiPoly.zero(ring, vars)
    for i in range(m):
        for j in range(i + 1, m):
            col = [zero] * m
            col[i] = gens[j]
            col[j] = -gens[i]
            out.append(col)
    return out
