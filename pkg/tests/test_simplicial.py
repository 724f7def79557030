import json
import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from simpcomm.chains import ChainComplex, homology
from simpcomm.coeffs import GF, ZZ
from simpcomm.errors import NegativeDegrees, SimplicialIdentityError
from simpcomm.qring import QuotientRing
from simpcomm.simplicial import (SimplexMap, TruncatedSimplicialModule, chain_complexes_equal, compose_word,
                                 constant, degenerate_rank, dold_kan_realize, elementary_word, factorize,
                                 homotopy_groups, moore_complex, normalized_complex, random_chain_complex,
                                 random_simplicial_module, surjections, zero_module)


# --- simplex category ----------------------------------------------------

def test_factorize_identity():
    e, m = factorize(SimplexMap.identity(3))
    assert e.is_identity and m.is_identity


def test_factorize_codegeneracy():
    s0 = SimplexMap.codegeneracy(0, 0)
    e, m = factorize(s0)
    assert e == s0 and m.is_identity


def test_factorize_example():
    e, m = factorize(SimplexMap(2, 2, (0, 0, 2)))
    assert e == SimplexMap.codegeneracy(1, 0)
    assert m == SimplexMap.coface(2, 1)


simplex_maps = st.integers(0, 4).flatmap(
    lambda n: st.integers(0, 4).flatmap(
        lambda m: st.lists(st.integers(0, m), min_size=n + 1, max_size=n + 1).map(
            lambda vs: SimplexMap(n, m, tuple(sorted(vs))))))


@settings(max_examples=200, deadline=None)
@given(simplex_maps)
def test_factorization_properties(f):
    e, m = factorize(f)
    assert e.is_surjective and m.is_injective
    assert m.compose(e) == f
    assert factorize(m.compose(e)) == (e, m)
    assert compose_word(elementary_word(f), f.source) == f


def test_order_preserving_enforced():
    with pytest.raises(ValueError):
        SimplexMap(1, 1, (1, 0))


def test_surjection_counts_and_order():
    # surjections [n] -> [k] number C(n, k)
    for n in range(5):
        for k in range(n + 1):
            assert len(surjections(n, k)) == comb(n, k)
    vals = [t.values for t in surjections(3)]
    assert vals == sorted(vals)


# --- simplicial modules --------------------------------------------------

def test_constant_module_moore_complex():
    R = GF(5)
    X = constant(R, 1, 4)
    M = moore_complex(X)
    assert [M.d(n)[0][0] for n in range(1, 5)] == [0, 1, 0, 1]
    assert [h.dimension for h in homotopy_groups(X)[:4]] == [1, 0, 0, 0]


def test_constant_module_normalized():
    N = normalized_complex(constant(GF(3), 2, 3))
    assert N.ranks == [2, 0, 0, 0]


def test_zero_module():
    X = zero_module(GF(5), 3)
    assert all(r == 0 for r in moore_complex(X).ranks)


def test_identities_are_verified():
    R = GF(5)
    X = constant(R, 1, 2)
    faces = dict(X.faces)
    faces[(2, 0)] = [[2]]
    with pytest.raises(SimplicialIdentityError):
        TruncatedSimplicialModule(R, 2, [1, 1, 1], faces, dict(X.degens))


def test_gamma_of_degree_one():
    R = GF(5)
    C = ChainComplex(R, 0, [0, 1], {})
    X = dold_kan_realize(C, 4)
    assert X.ranks == [0, 1, 2, 3, 4]
    M = moore_complex(X)
    assert homology(M, 1).dimension == 1 and homology(M, 0).dimension == 0
    assert all(homology(M, i).dimension == 0 for i in (2, 3))


def test_gamma_of_degree_zero_is_constant():
    R = GF(7)
    X = dold_kan_realize(ChainComplex(R, 0, [1], {}), 3)
    Y = constant(R, 1, 3)
    assert X.faces == Y.faces and X.degens == Y.degens


def test_negative_degrees_rejected():
    C = ChainComplex(GF(5), -1, [1, 1], {0: [[1]]})
    with pytest.raises(NegativeDegrees):
        dold_kan_realize(C, 2)


def test_koszul_roundtrip_over_polynomial_ring():
    R = QuotientRing(GF(5), ["x"])
    C = ChainComplex(R, 0, [1, 1], {1: [[R("x")]]})
    X = dold_kan_realize(C, 3)
    assert chain_complexes_equal(normalized_complex(X), C)


def test_roundtrip_over_integers():
    C = ChainComplex(ZZ, 0, [1, 2, 1], {1: [[2, 0]], 2: [[0], [3]]})
    X = dold_kan_realize(C, 3)
    assert chain_complexes_equal(normalized_complex(X), C)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 5]))
def test_dold_kan_roundtrip(seed, p):
    rng = random.Random(seed)
    C = random_chain_complex(rng, GF(p), 4, 3)
    assert chain_complexes_equal(normalized_complex(dold_kan_realize(C, 4)), C)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_normalized_plus_degenerate_is_everything(seed):
    X = random_simplicial_module(random.Random(seed), GF(5), 3, 2)
    N = normalized_complex(X)
    for n in range(X.N + 1):
        assert N.rank(n) + degenerate_rank(X, n) == X.ranks[n]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_moore_and_normalized_homology_agree(seed):
    X = random_simplicial_module(random.Random(seed), GF(5), 4, 3)
    M, N = moore_complex(X), normalized_complex(X)
    for i in range(4):
        assert homology(M, i).dimension == homology(N, i).dimension


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_gamma_n_weakly_equivalent(seed):
    rng = random.Random(seed)
    X = random_simplicial_module(rng, GF(2), 4, 2)
    Y = dold_kan_realize(normalized_complex(X), 4)
    for a, b in zip(homotopy_groups(X)[:4], homotopy_groups(Y)[:4]):
        assert a.dimension == b.dimension


def test_top_degree_flagged():
    hs = homotopy_groups(constant(GF(5), 1, 3))
    assert [h.reliable for h in hs] == [True, True, True, False]


def test_json_roundtrip():
    X = random_simplicial_module(random.Random(3), GF(5), 3, 2)
    data = json.loads(json.dumps(X.to_json()))
    assert set(data) >= {"N", "ranks", "d", "s"}
    Y = TruncatedSimplicialModule.from_json(data, GF(5))
    assert Y.faces == X.faces and Y.degens == X.degens
