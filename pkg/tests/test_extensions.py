import json
import random

import pytest

from simpcomm.coeffs import GF, QQ, ZZ, Zmod
from simpcomm.cotangent import aq_cohomology
from simpcomm.errors import BadParameters, InfiniteClassGroup, NotSquareZero, ScaleCap, UnsupportedBase
from simpcomm.extensions import (SquareZeroExtension, baer_sum, classify_extensions, cocycle_space,
                                 deformation_obstruction, extension_class, extension_generators, map_obstruction,
                                 realize_extension, witt_vectors)
from simpcomm.finite_rings import FiniteRing, find_isomorphism
from simpcomm.presentation import over_ring, polynomial_ring, quotient


def fp_over_z(p):
    return quotient(ZZ, [str(p)], "F")


# --- finite rings --------------------------------------------------------

def test_finite_ring_axioms_and_characteristic():
    R = FiniteRing.monic_extension(4, [1, 1, 1])
    assert R.order == 16 and R.characteristic == 4
    assert R.check_axioms()
    assert FiniteRing.monic_extension(2, [1, 1, 1]).is_field()
    assert not FiniteRing.monic_extension(2, [1, 0, 1]).is_field()


def test_isomorphism_search_rejects_non_isomorphic():
    assert find_isomorphism(FiniteRing.integers_mod(4), FiniteRing.monic_extension(2, [0, 0, 1]), []) is None
    assert find_isomorphism(FiniteRing.monic_extension(3, [1, 0, 1]), FiniteRing.monic_extension(3, [2, 1, 1]),
                            [(0, 1)]) is not None


# --- classification over Z -----------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5])
def test_fp_by_fp_has_p_classes(p):
    classes = classify_extensions(fp_over_z(p), None, "k")
    assert len(classes) == p
    assert sum(c.is_split for c in classes) == 1
    assert classes[0].is_split
    assert aq_cohomology(fp_over_z(p), None, "k", 1).dimension == 1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_nonzero_classes_are_z_mod_p_squared(p):
    Zp2 = FiniteRing.integers_mod(p * p)
    for c in classify_extensions(fp_over_z(p)):
        E = c.representative
        assert E.order == p * p
        assert all(E.checks().values())
        if c.is_split:
            assert E.characteristic == p
            # the split algebra F_p[e]/(e^2)
            assert find_isomorphism(E.ring, FiniteRing.monic_extension(p, [0, 0, 1]), [E.inclusion((1,))])
        else:
            assert E.characteristic == p * p
            assert find_isomorphism(E.ring, Zp2, []) is not None


@pytest.mark.parametrize("p", [2, 3, 5])
def test_roundtrip(p):
    for c in classify_extensions(fp_over_z(p)):
        assert extension_class(realize_extension(c)) == c


def test_class_of_z_mod_p_squared_with_twisted_inclusion():
    # inclusion m -> p*u*m makes p = iota(u^-1), so the class has coordinate u^-1
    p = 5
    S = cocycle_space(fp_over_z(p))
    Z = FiniteRing.integers_mod(p * p)
    for u in range(1, p):
        E = SquareZeroExtension(S, Z, lambda e: (e[0] % p,), lambda m, u=u: ((p * u * m[0]) % (p * p),))
        assert extension_class(E).coordinates == (pow(u, -1, p),)


def test_baer_sum_matches_class_sum():
    p = 3
    classes = classify_extensions(fp_over_z(p))
    for a in classes:
        for b in classes:
            s = baer_sum(a.representative, b.representative)
            assert s.order == p * p
            assert extension_class(s) == a + b


# --- classification over fields ------------------------------------------

def test_smooth_has_only_split_class():
    classes = classify_extensions(polynomial_ring(GF(3), ["x", "y"], "A"), None, "k")
    assert len(classes) == 1 and classes[0].is_split
    E = classes[0].representative
    assert E.ring is None  # infinite, presentation only
    assert all(E.checks().values())


def test_dual_numbers_by_residue_field():
    B = over_ring(GF(3), ["x"], ["x^2"], "B")
    classes = classify_extensions(B, None, "k")
    assert len(classes) == 3
    for c in classes:
        E = c.representative
        assert all(E.checks().values())
        assert extension_class(E) == c
    # k[x]/(x^3) with M = (x^2) is a non-split class
    T = FiniteRing.monic_extension(3, [0, 0, 0, 1])
    hits = []
    for c in classes:
        E = c.representative
        x = next(e for e in E.ring.elements if E.projection(e) == (0, 1))
        hits.append(find_isomorphism(E.ring, T, [x]) is not None)
    assert hits[0] is False and all(hits[1:])


def test_roundtrip_with_random_lifts():
    B = over_ring(GF(2), ["x", "y"], ["x^2", "x*y", "y^2"], "B")
    rng = random.Random(4)
    classes = classify_extensions(B, None, "k")
    assert len(classes) == 2 ** aq_cohomology(B, None, "k", 1).dimension
    for c in classes[:8]:
        E = c.representative
        assert extension_class(E, lambda cands: rng.choice(cands)) == c


def test_non_lci_class_count_matches_cohomology():
    B = over_ring(GF(2), ["x", "y"], ["x^2", "x*y"], "B")
    assert len(classify_extensions(B)) == 2 ** aq_cohomology(B, None, "k", 1).dimension


def test_infinite_field_returns_generators():
    B = over_ring(QQ, ["x"], ["x^2"], "B")
    with pytest.raises(InfiniteClassGroup) as err:
        classify_extensions(B)
    assert err.value.presentation["dimension"] == 1
    assert len(extension_generators(B)) == 1


def test_json():
    c = classify_extensions(fp_over_z(3))[1]
    data = json.loads(json.dumps(c.to_json()))
    assert data["coordinates"] == ["1"] and data["split"] is False


# --- lifting maps --------------------------------------------------------

def test_fp_does_not_map_to_z_mod_p_squared():
    p = 3
    F = fp_over_z(p)
    for c in classify_extensions(F):
        r = map_obstruction(F, c.representative, {})
        assert r.zero == c.is_split


def test_hensel_lift_of_square_root_of_minus_one():
    p = 5
    A = over_ring(ZZ, ["y"], ["y^2 + 1"], "A")
    for c in classify_extensions(fp_over_z(p)):
        E = c.representative
        r = map_obstruction(A, E, {"y": (2,)})
        assert r.zero
        assert E.ring.evaluate(A.ideal()[0], r.lift) == E.ring.zero


def test_map_obstruction_against_search():
    # oracle: brute force over all lifts
    B = over_ring(GF(2), ["x"], ["x^2"], "B")
    A = over_ring(GF(2), ["y"], ["y^2"], "A")
    for c in classify_extensions(B):
        E = c.representative
        r = map_obstruction(A, E, {"y": (0, 1)})
        f = A.ideal()[0]
        found = any(E.ring.evaluate(f, {"y": e}) == E.ring.zero for e in E.ring.elements
                    if E.projection(e) == (0, 1))
        assert r.zero == found


# --- deformations --------------------------------------------------------

def test_fp_deforms_to_z_mod_p_squared():
    r = deformation_obstruction(Zmod(25), ["5"])
    assert r.obstruction_zero and r.unique
    assert r.deformation == Zmod(25)
    assert all(g.zero for g in r.groups.values())


def test_smooth_deformation_is_unique():
    At = over_ring(GF(3), ["t"], ["t^2"], "At")
    r = deformation_obstruction(At, ["t"], ["x", "y"], [])
    assert r.obstruction_zero
    assert r.groups[1].zero and r.groups[2].zero


def test_obstruction_cocycle_reduced_to_zero():
    # lifts (x^2 + t y, x y) give the cocycle t y^2, a coboundary
    At = over_ring(GF(3), ["t"], ["t^2"], "At")
    r = deformation_obstruction(At, ["t"], ["x", "y"], ["x^2 + t*y", "x*y"])
    assert r.obstruction == [["t*y^2"]]
    assert r.obstruction_zero
    assert r.lifted_relations == ["x^2", "x*y"]


def test_hypersurface_deformation_is_flat():
    At = over_ring(GF(3), ["t"], ["t^2"], "At")
    r = deformation_obstruction(At, ["t"], ["x"], ["x^2 - t"])
    assert r.obstruction_zero and r.flat_verified
    assert r.groups[1].dimension == 1  # first-order deformations of x^2 form a line


def test_finite_non_lci_deformation_flatness_by_dimension():
    At = over_ring(GF(2), ["t"], ["t^2"], "At")
    r = deformation_obstruction(At, ["t"], ["x", "y"], ["x^2", "x*y", "y^2"])
    assert r.obstruction_zero and r.flat_verified


def test_not_square_zero():
    with pytest.raises(NotSquareZero):
        deformation_obstruction(Zmod(8), ["2"])
    At = over_ring(GF(3), ["t"], ["t^3"], "At")
    with pytest.raises(NotSquareZero):
        deformation_obstruction(At, ["t"], ["x"], ["x"])


def test_mod_prime_power_limits():
    with pytest.raises(UnsupportedBase):
        deformation_obstruction(Zmod(16), ["4"])
    with pytest.raises(UnsupportedBase):
        deformation_obstruction(Zmod(9), ["3"], ["x", "y"], ["x*y"])


# --- Witt vectors --------------------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_witt_of_prime_field(p, n):
    W = witt_vectors(p, n)
    assert find_isomorphism(W.ring(), FiniteRing.integers_mod(p ** n), []) is not None
    assert W.unobstructed and W.unique and len(W.steps) == n - 1


def _galois_ring_oracle(m, g, p, e):
    # flat over Z/m: the order is m^e; reduction mod p is a field of order p^e
    R = FiniteRing.monic_extension(m, g)
    assert R.order == m ** e and R.check_axioms()
    red = FiniteRing.monic_extension(p, g)
    assert red.is_field() and red.order == p ** e
    return R


def test_witt_f4():
    W = witt_vectors(4, 2)
    oracle = _galois_ring_oracle(4, [1, 1, 1], 2, 2)
    assert find_isomorphism(W.ring(), oracle, [(0, 1)]) is not None
    assert W.flat and W.reduces_to_field and W.unobstructed and W.unique


def test_witt_f9_independent_of_modulus():
    W = witt_vectors(9, 2)
    oracle = _galois_ring_oracle(9, [2, 1, 1], 3, 2)
    assert W.modulus == [1, 0, 1]
    assert find_isomorphism(W.ring(), oracle, [(0, 1)]) is not None


def test_witt_length_one_is_the_field():
    W = witt_vectors(8, 1)
    assert W.ring().is_field() and W.ring().order == 8 and not W.steps


def test_witt_caps():
    with pytest.raises(ScaleCap):
        witt_vectors(128, 2)
    with pytest.raises(ScaleCap):
        witt_vectors(4, 5)
    with pytest.raises(BadParameters):
        witt_vectors(6, 2)
