import json
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from simpcomm.coeffs import GF, ZZ
from simpcomm.errors import (CombinatorialBlowup, InfiniteUnderlyingSet, NonComputableBase, TruncationExceeded,
                             TruncationTooDeep, UnsupportedProduct)
from simpcomm.presentation import over_ring, polynomial_ring, quotient
from simpcomm.simplicial_rings import (bar_resolution_oracle, check_pi0, derived_tensor, homotopy_ring,
                                       koszul_stage, resolve)

from oracles import graded_syzygy_space

k5 = GF(5)


def plane(rels, name="B"):
    return over_ring(k5, ["x", "y"], rels, name)


# --- resolve -------------------------------------------------------------

def test_resolve_field_over_itself_is_empty():
    P, cert = resolve(k5, k5)
    assert all(P.generators(n) == [] for n in range(P.N + 1))
    assert all(not z for _, z in cert.stages[1:])


def test_resolve_cusp_one_relation_generator():
    B = plane(["x^2 - y^3"])
    P, cert = resolve(B, method="compute")
    assert [g.name for g in P.stage_generators(1)] == ["a1_0"]
    assert P.face(1, 0, P.var(1, "a1_0@01")) == P.stage_generators(1)[0].cycle.embed(P.level_vars(0))
    assert P.face(1, 1, P.var(1, "a1_0@01")).is_zero()
    # nothing to kill, certificate reaches degree 2
    assert all(z == [] for _, z in cert.stages[1:])
    assert cert.verified_through == 2
    assert check_pi0(P, B)


def test_resolve_cusp_auto_uses_regular_sequence():
    _, cert = resolve(plane(["x^2 - y^3"]))
    assert cert.method == "regular-sequence"


def test_resolve_non_lci_needs_degree_two_generators():
    P, cert = resolve(plane(["x^2", "x*y"]))
    assert len(P.stage_generators(1)) == 2
    assert len(P.stage_generators(2)) >= 1
    killed = dict(cert.stages)
    assert killed[1]
    P.check_identities()
    assert check_pi0(P, plane(["x^2", "x*y"]))


def test_level_sizes_follow_surjection_count():
    # generators of stage s appear once per surjection [n] -> [s]
    P, _ = resolve(plane(["x^2", "x*y"]))
    for n in range(P.N + 1):
        expect = sum(len(P.stage_generators(s)) * comb(n, s) for s in range(n + 1))
        assert len(P.generators(n)) == expect


def test_non_lci_cycle_is_the_missing_syzygy():
    # the stage-1 syzygy module of (x^2, xy) has a degree-3 generator (y, -x); Koszul syzygies start in degree 4
    gens = [{(2, 0): 1}, {(1, 1): 1}]
    assert len(graded_syzygy_space(gens, [2, 2], 2, 3, 5)[0]) == 1
    P, cert = resolve(plane(["x^2", "x*y"]))
    z = dict(cert.stages)[1][0]
    assert "x" in z and "y" in z


def test_truncation_limit():
    with pytest.raises(TruncationTooDeep):
        resolve(plane(["x^2"]), N=4)


def test_non_field_non_regular_rejected():
    B = over_ring(ZZ, ["x"], ["2*x", "x^2"])
    with pytest.raises(NonComputableBase):
        resolve(B)


def test_resolution_over_integers_regular():
    Fp = quotient(ZZ, ["3"])
    P, cert = resolve(Fp)
    assert cert.method == "regular-sequence"
    assert check_pi0(P, Fp)


def test_certificate_json():
    _, cert = resolve(plane(["x^2", "x*y"]))
    data = json.loads(json.dumps(cert.to_json()))
    assert data["verified_through"] == 2
    assert data["stages"][1]["degree"] == 1
    assert all(isinstance(z, str) for z in data["stages"][1]["killed"])


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_seeded_resolutions_satisfy_identities(seed):
    B = plane(["x^2", "x*y"])
    P, cert = resolve(B, seed=seed)
    P.check_identities()
    assert check_pi0(P, B)
    assert cert.pi0_matches


# --- homotopy rings ------------------------------------------------------

def test_constant_algebra():
    P, _ = resolve(k5, k5)
    H = homotopy_ring(P, 2)
    assert H.groups[0].dimension == 1
    assert all(g.zero for g in H.groups[1:])


def test_stage_one_principal_nonzerodivisor():
    B = over_ring(k5, ["x"], ["x^2"])
    H = homotopy_ring(koszul_stage(B), 1)
    assert H.groups[0].dimension == 2 and H.groups[1].zero


def test_stage_one_non_lci_has_pi1():
    H = homotopy_ring(koszul_stage(plane(["x^2", "x*y"])), 1)
    assert not H.groups[1].zero


def test_stage_one_regular_pair():
    H = homotopy_ring(koszul_stage(plane(["x*y", "x^2 - y^2"])), 1)
    assert H.groups[0].dimension == 4 and H.groups[1].zero


def test_homotopy_of_resolution_vanishes():
    P, _ = resolve(plane(["x^2", "x*y"]))
    H = homotopy_ring(P, 2)
    assert all(g.zero for g in H.groups[1:])


def test_homotopy_ring_limits():
    P, _ = resolve(plane(["x^2"]), N=2)
    with pytest.raises(TruncationExceeded):
        homotopy_ring(P, 2)
    H = homotopy_ring(koszul_stage(plane(["x^2", "x*y"])), 1)
    assert H.product(0, 1) == "pi_0-module action"
    with pytest.raises(UnsupportedProduct):
        H.product(1, 1)


# --- derived tensor products -------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5])
def test_fp_tensor_fp_over_z(p):
    Fp = quotient(ZZ, [str(p)])
    T = derived_tensor(Fp, Fp)
    assert [g.dimension for g in T.groups] == [1, 1, 0, 0]
    assert not T.classical
    assert T.exterior_generators == 1


def test_flat_factor_is_classical():
    A = polynomial_ring(k5, ["x"], "A")
    B = quotient(A, ["x^3"], "B")
    Ay = over_ring(A, ["y"], [], "Ay")
    T = derived_tensor(B, Ay, A)
    assert T.classical and not T.groups[0].zero


@pytest.mark.parametrize("r", [1, 2, 3])
def test_self_intersection_of_origin(r):
    vs = [f"x{i}" for i in range(r)]
    A = polynomial_ring(GF(3), vs, "A")
    K = quotient(A, vs, "K")
    T = derived_tensor(K, K, A)
    assert [g.dimension for g in T.groups] == [comb(r, i) for i in range(4)]
    assert T.exterior_generators == r


def test_exterior_product_signs():
    A = polynomial_ring(k5, ["x", "y"], "A")
    K = quotient(A, ["x", "y"], "K")
    T = derived_tensor(K, K, A)
    assert T.product((0,), (1,)) == (1, (0, 1))
    assert T.product((1,), (0,)) == (-1, (0, 1))
    assert T.product((0,), (0,))[0] == 0


def test_no_ring_structure_outside_koszul():
    A = polynomial_ring(k5, ["x", "y"], "A")
    B = quotient(A, ["x^2", "x*y"], "B")
    C = quotient(A, ["y"], "C")
    T = derived_tensor(B, C, A)
    with pytest.raises(UnsupportedProduct):
        T.product((0,), (0,))


@pytest.mark.parametrize("r1,r2", [("x^2", "x"), ("x^2, x*y", "y"), ("x*y", "x + y")])
def test_derived_tensor_symmetric(r1, r2):
    A = polynomial_ring(k5, ["x", "y"], "A")
    B, C = quotient(A, r1.split(", "), "B"), quotient(A, r2.split(", "), "C")
    a, b = derived_tensor(B, C, A, 2), derived_tensor(C, B, A, 2)
    assert [g.invariants() for g in a.groups] == [g.invariants() for g in b.groups]


# --- bar construction oracle ---------------------------------------------

def test_bar_f2_over_z():
    X = bar_resolution_oracle(quotient(ZZ, ["2"]))
    assert len(X.generators(0)) == 2
    assert X.augmentation_surjective()
    assert X.pi0_order() == 2
    X.check_identities()


def test_bar_f3():
    X = bar_resolution_oracle(GF(3))
    assert X.pi0_invariants() == [3]
    X.check_identities()


def test_bar_dual_numbers():
    X = bar_resolution_oracle(over_ring(GF(2), ["x"], ["x^2"]))
    assert X.pi0_order() == 4 and X.augmentation_surjective()


def test_bar_of_base_itself():
    X = bar_resolution_oracle(GF(2), GF(2))
    assert X.pi0_order() == 2 and X.augmentation_surjective()


def test_bar_agrees_with_resolve_on_pi0():
    B = quotient(ZZ, ["3"])
    P, _ = resolve(B)
    X = bar_resolution_oracle(B)
    assert check_pi0(P, B) and X.pi0_order() == 3


def test_bar_rejects_infinite_and_large():
    with pytest.raises(InfiniteUnderlyingSet):
        bar_resolution_oracle(polynomial_ring(GF(2), ["x"]))
    with pytest.raises(CombinatorialBlowup):
        bar_resolution_oracle(over_ring(GF(5), ["x"], ["x^3"]))
    with pytest.raises(TruncationTooDeep):
        bar_resolution_oracle(GF(2), levels=3)
