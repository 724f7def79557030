import json
from math import comb, gcd

import pytest

from simpcomm.errors import BadParameters, ScaleCap
from simpcomm.groups import FiniteGroup, GroupHom, group_cohomology, kunneth

from oracles import bar_cohomology_dims, hom_count_cyclic


def dims(R):
    return [R.dimension(k) for k in range(R.D + 1)]


# --- groups --------------------------------------------------------------

def test_group_constructions():
    assert FiniteGroup.cyclic(6).order == 6
    assert FiniteGroup.symmetric(3).order == 6 and not FiniteGroup.symmetric(3).is_abelian
    assert FiniteGroup.abelian([2, 4]).order == 8
    assert FiniteGroup.pgl2(7).order == 336
    assert FiniteGroup.pgl2(5).order == 120


def test_table_validation():
    bad = [[0, 1, 2], [1, 0, 2], [2, 2, 0]]
    with pytest.raises(BadParameters):
        FiniteGroup.from_table(bad)
    S3 = FiniteGroup.symmetric(3)
    with pytest.raises(BadParameters):
        S3.subgroup([S3.identity, 1, 2])
    K, inc = S3.subgroup(S3.generated_by([1]))
    assert K.order in (2, 3, 6) and inc.is_homomorphism()


def test_homomorphism_check():
    C4, C2 = FiniteGroup.cyclic(4), FiniteGroup.cyclic(2)
    assert GroupHom(C4, C2, [0, 1, 0, 1]).is_homomorphism()
    with pytest.raises(BadParameters):
        GroupHom(C4, C2, [0, 1, 1, 0])


# --- additive structure --------------------------------------------------

@pytest.mark.parametrize("ell", [2, 3, 5])
def test_cyclic_prime_order_is_one_in_every_degree(ell):
    assert dims(group_cohomology(FiniteGroup.cyclic(ell), ell, 1, 6)) == [1] * 7


def test_klein_four_dimensions():
    assert dims(group_cohomology(FiniteGroup.abelian([2, 2]), 2, 1, 6)) == [i + 1 for i in range(7)]


def test_coprime_order_vanishes():
    assert dims(group_cohomology(FiniteGroup.cyclic(4), 3, 1, 6)) == [1, 0, 0, 0, 0, 0, 0]


@pytest.mark.parametrize("q", [3, 5, 7, 9])
@pytest.mark.parametrize("ell", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2])
def test_torus_of_rank_one_grid(q, ell, n):
    R = group_cohomology(FiniteGroup.cyclic(q - 1), ell, n, 4)
    N = ell ** n
    assert R.higher_nonzero == ((q - 1) % ell == 0)
    # H^1 = Hom(Z/(q-1), Z/N), counted directly
    assert R.order(1) == hom_count_cyclic(q - 1, N)
    for k in range(1, 5):
        assert R.order(k) == gcd(q - 1, N)


@pytest.mark.parametrize("m,ell,n", [(6, 3, 1), (4, 2, 2), (8, 2, 1), (6, 2, 2)])
def test_periodic_and_general_resolutions_agree(m, ell, n):
    fast = group_cohomology(FiniteGroup.cyclic(m), ell, n, 4)
    slow = group_cohomology(FiniteGroup.cyclic(m), ell, n, 4, method="general")
    assert [fast.orders(k) for k in range(5)] == [slow.orders(k) for k in range(5)]


@pytest.mark.parametrize("G,p,top", [
    (FiniteGroup.cyclic(4), 2, 3),
    (FiniteGroup.abelian([2, 2]), 2, 3),
    (FiniteGroup.symmetric(3), 3, 2),
    (FiniteGroup.symmetric(3), 2, 2),
])
def test_against_bar_cochains(G, p, top):
    expect = bar_cohomology_dims(G.table, p, top)
    assert dims(group_cohomology(G, p, 1, top)) == expect
    assert dims(group_cohomology(G, p, 1, top, method="general")) == expect


def test_symmetric_group_mod_three():
    # stable elements of H^*(Z/3; F_3) under inversion
    assert dims(group_cohomology(FiniteGroup.symmetric(3), 3, 1, 6)) == [1, 0, 0, 1, 1, 0, 0]


def test_large_abelian_uses_small_cochains():
    R = group_cohomology([6, 6, 6, 6], 3, 1, 4)
    assert dims(R) == [comb(k + 3, 3) for k in range(5)]


def test_scale_caps():
    with pytest.raises(ScaleCap):
        group_cohomology(FiniteGroup.symmetric(6), 2, 1, 2)
    with pytest.raises(ScaleCap):
        group_cohomology(FiniteGroup.cyclic(3), 3, 1, 7)
    with pytest.raises(ScaleCap):
        group_cohomology([2, 2, 2, 2, 2], 2, 1, 2)
    with pytest.raises(BadParameters):
        group_cohomology(FiniteGroup.cyclic(3), 4, 1, 2)


# --- products ------------------------------------------------------------

def test_cyclic_ring_structure():
    R = group_cohomology(FiniteGroup.cyclic(3), 3, 1, 6)
    x, y = R.basis(1)[0], R.basis(2)[0]
    assert (x * x).is_zero
    assert not (y * y).is_zero and not (x * y).is_zero
    assert not (y * y * y).is_zero
    R2 = group_cohomology(FiniteGroup.cyclic(2), 2, 1, 4)
    a = R2.basis(1)[0]
    assert not (a * a * a * a).is_zero
    R4 = group_cohomology(FiniteGroup.cyclic(4), 2, 1, 4)
    b = R4.basis(1)[0]
    assert (b * b).is_zero


@pytest.mark.parametrize("G,ell,n,D", [
    (FiniteGroup.cyclic(3), 3, 1, 5),
    (FiniteGroup.cyclic(4), 2, 2, 4),
    (FiniteGroup.abelian([2, 2]), 2, 1, 4),
    (FiniteGroup.abelian([3, 3]), 3, 1, 4),
    (FiniteGroup.symmetric(3), 3, 1, 6),
    (FiniteGroup.symmetric(3), 2, 1, 4),
])
def test_graded_commutative_and_associative(G, ell, n, D):
    R = group_cohomology(G, ell, n, D)
    for i in range(D + 1):
        for j in range(D + 1 - i):
            for x in R.basis(i):
                for y in R.basis(j):
                    assert x * y == (-1) ** (i * j) * (y * x)
                    for k in range(D + 1 - i - j):
                        for z in R.basis(k):
                            assert (x * y) * z == x * (y * z)
    for k in range(D + 1):
        for x in R.basis(k):
            assert R.unit * x == x == x * R.unit


def test_restriction_to_sylow_is_injective():
    S3 = FiniteGroup.symmetric(3)
    P, inc = S3.subgroup(S3.generated_by([S3.element_of_order(3)]))
    RG, RP = group_cohomology(S3, 3, 1, 6), group_cohomology(P, 3, 1, 6)
    res = RG.restriction(inc, RP)
    for k in range(7):
        images = [res(x) for x in RG.basis(k)]
        assert all(not im.is_zero for im in images)
    assert res(RG.unit) == RP.unit


def test_kunneth_matches_direct_computation():
    G = FiniteGroup.abelian([3, 3])
    direct = group_cohomology(G, 3, 1, 4)
    c = group_cohomology(FiniteGroup.cyclic(3), 3, 1, 4)
    K = kunneth(c, c)
    assert dims(K) == dims(direct)
    # the cross product a x b = p1^*(a) p2^*(b); it must be multiplicative and bijective
    infl = [c.pullback(G.projection(i), direct) for i in range(2)]

    def cross(key):
        (i, a), (j, b) = key
        return infl[0](c.basis(i)[a]) * infl[1](c.basis(j)[b])

    for k in range(5):
        imgs = [cross(key) for key in K.labels(k)]
        assert direct.span_rank(imgs) == direct.dimension(k)
    for x in range(len(K.labels(1))):
        for y in range(len(K.labels(2))):
            prod = K.basis(1)[x] * K.basis(2)[y]
            lhs = sum((cross(K.labels(3)[t]) * int(cf) for t, cf in enumerate(prod.coords)), direct.zero(3))
            assert lhs == cross(K.labels(1)[x]) * cross(K.labels(2)[y])


def test_large_abelian_products_by_kunneth():
    R = group_cohomology([6, 6, 6, 6], 3, 1, 4)
    x = R.basis(1)
    assert len(x) == 4
    assert (x[0] * x[1]) == -(x[1] * x[0])
    big = group_cohomology([6, 6, 6, 6], 3, 2, 2)
    with pytest.raises(ScaleCap):
        big.basis(1)[0] * big.basis(1)[0]


def test_json_deterministic():
    a = json.dumps(group_cohomology(FiniteGroup.symmetric(3), 3, 1, 4).to_json(products=True), sort_keys=True)
    b = json.dumps(group_cohomology(FiniteGroup.symmetric(3), 3, 1, 4).to_json(products=True), sort_keys=True)
    assert a == b
    data = json.loads(a)
    assert data["coefficients"] == "Z/3" and [d["rank"] for d in data["degrees"]] == [1, 0, 0, 1, 1]


def test_trivial_group():
    assert dims(group_cohomology(FiniteGroup.cyclic(1), 3, 1, 3)) == [1, 0, 0, 0]
    assert dims(group_cohomology(FiniteGroup.cyclic(1), 3, 1, 3, method="general")) == [1, 0, 0, 0]
