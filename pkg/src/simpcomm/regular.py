"""Regular-sequence detection by comparing syzygies with Koszul syzygies."""
from __future__ import annotations

from typing import List, Optional, Sequence

from .coeffs import GF, CoefficientRing, is_prime
from .groebner import SubmoduleGB, TermOrder, koszul_syzygies
from .poly import MultiPoly
from .qring import QuotientRing, kernel_generators


def koszul_regular(R: QuotientRing, seq: Sequence[MultiPoly]) -> bool:
    """True when H_1 of the Koszul complex of seq over R vanishes (Syz = Kos).

    For graded or local data this is equivalent to seq being regular.
    """
    seq = [R(f) for f in seq]
    m = len(seq)
    if m == 0:
        return True
    if any(f.is_zero() for f in seq):
        return False
    syz = kernel_generators(R, [seq], 1, m)
    if not syz:
        return True
    kos = koszul_syzygies(seq) if m > 1 else []
    gens = list(kos) + R.ideal_vectors(m)
    if not gens:
        return False
    gb = SubmoduleGB(R.field, R.vars, m, gens, TermOrder("grevlex", "pot"))
    return all(gb.contains(s) for s in syz)


def constant_prime(ideal: Sequence[MultiPoly]) -> Optional[int]:
    """A prime p occurring as a constant generator of an ideal over Z, if any."""
    for g in ideal:
        if g.is_constant() and not g.is_zero():
            c = abs(int(g.constant_term()))
            if is_prime(c):
                return c
    return None


def is_regular_sequence(coeffs: CoefficientRing, vars: Sequence[str], base_ideal: Sequence[MultiPoly],
                        seq: Sequence[MultiPoly]) -> Optional[bool]:
    """Decide Koszul-regularity of seq on k[vars]/base_ideal. None means undecided.

    Over Z only polynomial rings are handled: a single nonzero element is regular
    (domain), and (p, g_2, ...) with p prime is regular iff (g_2, ...) is regular
    mod p.
    """
    seq = [f for f in seq]
    if coeffs.is_field:
        return koszul_regular(QuotientRing(coeffs, vars, base_ideal), seq)
    if coeffs.kind != "Z" or any(not g.is_zero() for g in base_ideal):
        return None
    nonzero = [f for f in seq if not f.is_zero()]
    if len(nonzero) < len(seq):
        return False
    if len(seq) <= 1:
        return True
    p = constant_prime(seq)
    if p is None:
        return None
    rest = [f for f in seq if not (f.is_constant() and abs(int(f.constant_term())) == p)]
    if len(rest) != len(seq) - 1:
        return None
    Fp = GF(p)
    rest_p = [f.change_ring(Fp) for f in rest]
    if any(f.is_zero() for f in rest_p):
        return False
    return koszul_regular(QuotientRing(Fp, vars, ()), rest_p)
