import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from simpcomm.errors import BadCharacteristic, BadParameters, ScaleCap, UnsupportedProduct
from simpcomm.groups import FiniteGroup, group_cohomology
from simpcomm.hecke import (DerivedHeckeModel, GModule, PGL2Model, dha_action, is_weyl_invariant, satake_restrict,
                            torus_dha, weyl_invariants)

from oracles import classical_hecke_action, classical_satake


# --- torus derived Hecke algebra ----------------------------------------

def test_torus_dimensions_when_q_is_one_mod_ell():
    A = torus_dha(1, 5, 2, 1, 3)
    assert [A.H.dimension(k) for k in range(4)] == [1, 1, 1, 1]
    for d in range(4):
        # one basis element per (cocharacter, class)
        assert len(A.basis(d, radius=2)) == 5


def test_torus_higher_part_vanishes_otherwise():
    A = torus_dha(1, 5, 3, 1, 3)
    assert [A.H.dimension(k) for k in range(4)] == [1, 0, 0, 0]
    assert all(not A.basis(d, radius=2) for d in range(1, 4))


def test_torus_rejects_ell_dividing_q():
    with pytest.raises(BadParameters):
        torus_dha(1, 9, 3)


def test_group_algebra_law_and_unit():
    A = torus_dha(1, 7, 3, 1, 2)
    assert A.e((1,)) * A.e((2,)) == A.e((3,))
    assert A.e((-1,)) * A.e((1,)) == A.unit
    x = A.e((2,), A.H.basis(1)[0])
    assert A.unit * x == x == x * A.unit


def _laurent_mul(a, b, N):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = (out.get(i + j, 0) + x * y) % N
    return {k: v for k, v in out.items() if v}


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.integers(-3, 3), st.integers(0, 8), max_size=4),
       st.dictionaries(st.integers(-3, 3), st.integers(0, 8), max_size=4))
def test_degree_zero_is_the_laurent_polynomial_ring(a, b):
    A = torus_dha(1, 7, 3, 2, 1)
    lift = lambda d: sum((A.e((k,)) * v for k, v in d.items()), A.zero)
    prod = lift(a) * lift(b)
    expect = _laurent_mul(a, b, 9)
    assert prod == lift(expect)


def _random_torus_element(A, rng, radius=2):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        lam = tuple(rng.randint(-radius, radius) for _ in range(A.r))
        d = rng.randint(0, A.D)
        if A.H.dimension(d):
            terms[(lam, d)] = [rng.randrange(o) for o in A.H.orders(d)]
    return A.element(terms)


@pytest.mark.parametrize("r,q,ell,n,D", [(1, 7, 3, 1, 4), (1, 5, 2, 2, 3), (2, 3, 2, 1, 3), (2, 7, 3, 1, 2)])
def test_torus_dha_graded_commutative_and_associative(r, q, ell, n, D):
    A = torus_dha(r, q, ell, n, D)
    rng = random.Random(1)
    for _ in range(15):
        x, y, z = (_random_torus_element(A, rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)
    for d1 in range(D + 1):
        for d2 in range(D + 1 - d1):
            for a in A.H.basis(d1):
                for b in A.H.basis(d2):
                    x, y = A.e((1,) * r, a), A.e((-2,) + (0,) * (r - 1), b)
                    assert x * y == (y * x) * (-1) ** (d1 * d2)


def test_inversion_signs_on_cyclic_cohomology():
    # inversion acts on H^{2k-1} and H^{2k} of a cyclic group by (-1)^k
    A = torus_dha(1, 7, 3, 1, 4)
    s = A.weyl_group[1]
    for k in range(1, 5):
        c = A.H.basis(k)[0]
        assert A.act(s, A.e((0,), c)) == A.e((0,), c) * (-1) ** ((k + 1) // 2)


def test_weyl_invariance_membership():
    A = torus_dha(1, 7, 3, 1, 2)
    assert is_weyl_invariant(A.e((2,)) + A.e((-2,)))
    assert not is_weyl_invariant(A.e((2,)))
    c = A.H.basis(1)[0]
    sym = A.e((1,), c) + A.act(A.weyl_group[1], A.e((1,), c))
    assert sym == A.e((1,), c) - A.e((-1,), c)
    assert is_weyl_invariant(sym)
    assert not is_weyl_invariant(A.e((1,), c) + A.e((-1,), c))


def test_weyl_invariant_basis():
    A = torus_dha(1, 7, 3, 1, 3)
    counts = [len(weyl_invariants(A, d, radius=2)) for d in range(4)]
    assert counts == [3, 2, 2, 3]
    for d in range(4):
        assert all(is_weyl_invariant(x) for x in weyl_invariants(A, d, radius=2))


def test_weyl_invariants_rank_two_permutations():
    A = torus_dha(2, 3, 2, 1, 1)
    assert len(A.weyl_group) == 2
    inv0 = weyl_invariants(A, 0, radius=1)
    # orbits of S_2 on {-1,0,1}^2
    assert len(inv0) == 6
    assert is_weyl_invariant(A.e((1, 0)) + A.e((0, 1)))


def test_torus_json_deterministic():
    A = torus_dha(1, 7, 3, 1, 2)
    x = A.e((1,), A.H.basis(2)[0]) + A.e((-1,))
    a = json.dumps(x.to_json(), sort_keys=True)
    assert a == json.dumps((A.e((1,), A.H.basis(2)[0]) + A.e((-1,))).to_json(), sort_keys=True)
    assert json.loads(a)["terms"]


# --- rank one: PGL_2 model ----------------------------------------------

@pytest.fixture(scope="module")
def pgl2():
    return PGL2Model(7, 3, 1, 2)


def test_pgl2_model_characteristic_checks():
    with pytest.raises(BadCharacteristic):
        PGL2Model(5, 3, 1, 2)
    with pytest.raises(BadCharacteristic):
        PGL2Model(7, 2, 1, 2)
    with pytest.raises(BadCharacteristic):
        PGL2Model(7, 3, 2, 2)


def test_pgl2_stabilizer_cohomology(pgl2):
    assert [pgl2.HG.dimension(k) for k in range(3)] == [1, 0, 0]
    assert [pgl2.HB.dimension(k) for k in range(3)] == [1, 1, 1]
    assert pgl2.B.order == 42 and pgl2.G.order == 336


def test_satake_unit(pgl2):
    assert satake_restrict(pgl2.unit) == pgl2.torus.unit


@pytest.mark.parametrize("a", [0, 1, 2])
def test_degree_zero_satake_matches_coset_counting(pgl2, a):
    S = satake_restrict(pgl2.basic(a))
    for mu in range(-3, 4):
        assert S.coefficient((mu,), 0) == (classical_satake(a, mu, 7, 3),)
        assert S.coefficient((mu,), 0) == S.coefficient((-mu,), 0)


def test_satake_is_linear_and_lands_in_invariants(pgl2):
    rng = random.Random(0)
    for _ in range(20):
        h1, h2 = pgl2.random_element(rng), pgl2.random_element(rng)
        c = rng.randrange(3)
        assert satake_restrict(h1 + h2 * c) == satake_restrict(h1) + satake_restrict(h2) * c
        S = satake_restrict(h1)
        assert S.checks["weyl_invariant"] and is_weyl_invariant(S)


def test_satake_higher_degree_is_nonzero(pgl2):
    c = pgl2.HB.basis(1)[0]
    S = satake_restrict(pgl2.element({(1, 1): c}))
    assert not S.is_zero and is_weyl_invariant(S)


def test_convolution_and_multiplicativity(pgl2):
    rng = random.Random(3)
    report = pgl2.multiplicativity(rng, 20)
    assert report == {"pairs": 20, "multiplicative": 20}
    with pytest.raises(UnsupportedProduct):
        pgl2.basic(1) * pgl2.basic(2)
    assert pgl2.unit * pgl2.basic(2) == pgl2.basic(2) == pgl2.basic(2) * pgl2.unit


# --- DHA action in a finite model ----------------------------------------

def _s3():
    G = FiniteGroup.symmetric(3)
    t = G.labels.index((1, 0, 2))
    return G, G.generated_by([t])


@pytest.fixture(scope="module")
def s3_f3():
    G, K = _s3()
    return DerivedHeckeModel(G, K, 3, 1, None, 3)


@pytest.fixture(scope="module")
def s3_f2():
    G, K = _s3()
    return DerivedHeckeModel(G, K, 2, 1, None, 3)


def test_mackey_dimensions(s3_f3, s3_f2):
    assert [s3_f3.hecke.dimension(k) for k in range(4)] == [2, 0, 0, 0]
    assert [s3_f2.hecke.dimension(k) for k in range(4)] == [2, 1, 1, 1]
    assert [s3_f2.invariants.dimension(k) for k in range(4)] == [1, 1, 1, 1]


def test_frobenius_reciprocity_against_bar_cochains(s3_f2):
    assert s3_f2.frobenius_check()


@pytest.mark.parametrize("which", ["s3_f3", "s3_f2"])
def test_action_axioms(which, request):
    model = request.getfixturevalue(which)
    rng = random.Random(5)
    for _ in range(50):
        m = model.random_invariant(rng)
        h1, h2 = model.random_hecke(rng), model.random_hecke(rng)
        assert dha_action(model.hecke.unit, m) == m
        assert dha_action(h2, dha_action(h1, m)) == dha_action(h1 * h2, m)
    for _ in range(10):
        h1, h2, h3 = (model.random_hecke(rng) for _ in range(3))
        assert (h1 * h2) * h3 == h1 * (h2 * h3)


def _natural_module(G, ell):
    mats = []
    for p in G.labels:
        M = [[0] * 3 for _ in range(3)]
        for i in range(3):
            M[p[i]][i] = 1
        mats.append(M)
    return GModule(G, ell, 1, mats)


@pytest.mark.parametrize("coeffs", ["trivial", "natural"])
def test_degree_zero_action_is_classical_hecke_operator(coeffs):
    G, K = _s3()
    M = None if coeffs == "trivial" else _natural_module(G, 3)
    model = DerivedHeckeModel(G, K, 3, 1, M, 1)
    rho = model.module.matrices
    for g in range(G.order):
        h = model.double_coset_class(g)
        for m in model.invariants.basis(0):
            vec = model.invariants.cocycle(m)
            got = model.invariants.cocycle(dha_action(h, m))
            assert got == classical_hecke_action(G.table, K, rho, g, vec, 3)


def test_gmodule_validation():
    G, _ = _s3()
    with pytest.raises(BadParameters):
        GModule(G, 3, 1, [[[1]] for _ in range(5)])
    bad = [[[1, 0], [0, 1]] for _ in range(6)]
    bad[1] = [[0, 1], [0, 0]]
    with pytest.raises(BadParameters):
        GModule(G, 3, 1, bad)


def test_action_scale_caps():
    G, K = _s3()
    with pytest.raises(ScaleCap):
        DerivedHeckeModel(G, K, 3, 1, None, 7)
    with pytest.raises(BadParameters):
        DerivedHeckeModel(G, [0, 1, 2], 3, 1, None, 2)


def test_action_axioms_on_every_degree_triple(s3_f2):
    model = s3_f2
    D = model.D
    for j in range(D + 1):
        for i1 in range(D + 1 - j):
            for i2 in range(D + 1 - j - i1):
                for m in model.invariants.basis(j):
                    for h1 in model.hecke.basis(i1):
                        for h2 in model.hecke.basis(i2):
                            assert dha_action(h2, dha_action(h1, m)) == dha_action(h1 * h2, m)
    for k in range(D + 1):
        for h in model.hecke.basis(k):
            assert model.hecke.unit * h == h == h * model.hecke.unit
