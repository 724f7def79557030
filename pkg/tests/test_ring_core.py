from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from simpcomm.coeffs import GF, QQ, ZZ, Zmod, CoefficientRing, is_prime
from simpcomm.errors import BadParameters, NonFieldCoefficients, VariableMismatch
from simpcomm.groebner import groebner_basis, normal_form, syzygies, koszul_syzygies
from simpcomm.poly import MultiPoly, parse_poly
from simpcomm.snf import smith_normal_form, matmul, diagonal, determinant

from oracles import invariant_factors_oracle, in_ideal_truncated, det_cofactor

V = ("x", "y")


def P(s, R=GF(5), vars=V):
    return parse_poly(s, R, vars)


# --- coefficient rings ---------------------------------------------------

def test_prime_field_checks_primality():
    assert GF(7).is_field
    with pytest.raises(BadParameters):
        GF(9)
    with pytest.raises(BadParameters):
        Zmod(1)


def test_zmod_arithmetic_is_exact():
    R = Zmod(9)
    assert R.mul(4, 7) == 1
    assert R.inv(2) == 5
    assert not R.is_field
    assert Zmod(7).is_field


def test_rationals_exact():
    assert QQ.div(1, 3) == Fraction(1, 3)


# --- polynomials ---------------------------------------------------------

def test_parse_and_print():
    f = P("x^2 - y^3", QQ)
    assert f.to_str() == "-y^3 + x^2"
    assert P("(x+1)^2", QQ) == P("x^2 + 2*x + 1", QQ)


def test_no_stored_zero_coefficients():
    f = P("5*x + y")
    assert all(c != 0 for c in f.terms.values())
    assert f == P("y")


small_polys = st.lists(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-4, 4)), min_size=0, max_size=5
).map(lambda ts: MultiPoly(GF(5), V, {(a, b): c for a, b, c in ts}))


@settings(max_examples=60, deadline=None)
@given(small_polys, small_polys, small_polys)
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@settings(max_examples=40, deadline=None)
@given(small_polys, small_polys)
def test_normal_form_of_multiple_of_basis_element_is_zero(f, b):
    if b.is_zero():
        return
    gb = groebner_basis([b, P("x*y - 1")])
    for g in gb:
        assert normal_form(f * g, gb).is_zero()


# --- Gröbner bases -------------------------------------------------------

def test_gb_single_generator_is_itself():
    f = P("x^2 - y^3")
    gb = groebner_basis([f])
    assert len(gb) == 1 and gb[0] == f.monic(lambda e: (sum(e), tuple(-x for x in reversed(e))))


def test_gb_unit_ideal():
    assert groebner_basis([P("x"), P("x - 1")]) == [P("1")]


def test_gb_lex_monomial_ideal():
    assert groebner_basis([P("x^2"), P("x*y")], "lex") == [P("x^2"), P("x*y")]


def test_gb_needs_field():
    with pytest.raises(NonFieldCoefficients):
        groebner_basis([P("x", ZZ)])
    with pytest.raises(NonFieldCoefficients):
        groebner_basis([P("x", Zmod(9))])


def test_gb_members_lie_in_ideal_by_macaulay_oracle():
    gens = [P("x^2*y - 1"), P("x*y^2 - x")]
    gb = groebner_basis(gens)
    for g in gb:
        assert in_ideal_truncated(dict(g.terms), [dict(h.terms) for h in gens], 2, 4, 5)
    for h in gens:
        assert normal_form(h, gb).is_zero()


def test_normal_form_examples():
    # one division step by x^2 - y^3 (x^2 leads in lex)
    assert normal_form(P("x^3"), [P("x^2 - y^3")], order="lex") == P("x*y^3")
    assert normal_form(P("0"), [P("x^2 - y^3")]).is_zero()
    assert normal_form(P("y"), [P("x^2"), P("x*y")]) == P("y")


def test_normal_form_variable_mismatch():
    with pytest.raises(VariableMismatch):
        normal_form(P("x"), [parse_poly("z", GF(5), ("z",))])


# --- syzygies ------------------------------------------------------------

def _check_syz(gens, cols):
    for col in cols:
        total = MultiPoly.zero(gens[0].ring, gens[0].vars)
        for a, f in zip(col, gens):
            total = total + a * f
        assert total.is_zero()


def test_syzygies_regular_pair():
    gens = [P("x"), P("y")]
    cols = syzygies(gens)
    assert cols == [[P("y"), P("-x")]]


def test_syzygies_principal_is_empty():
    assert syzygies([P("x^2 - y^3")]) == []


def test_syzygies_schreyer():
    gens = [P("x^2"), P("x*y")]
    assert syzygies(gens) == [[P("y"), P("-x")]]


@settings(max_examples=25, deadline=None)
@given(st.lists(small_polys, min_size=1, max_size=3))
def test_syzygies_multiply_to_zero(gens):
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    _check_syz(gens, syzygies(gens))
    _check_syz(gens, koszul_syzygies(gens))


# --- Smith normal form ---------------------------------------------------

def test_snf_examples():
    D, Pm, Q = smith_normal_form([[2, 0], [0, 3]])
    assert diagonal(D) == [1, 6]
    D, _, _ = smith_normal_form([[1, 0], [0, 1]])
    assert D == [[1, 0], [0, 1]]
    D, _, _ = smith_normal_form([[7]])
    assert D == [[7]]
    D, Pm, Q = smith_normal_form([])
    assert D == []


int_mats = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=80, deadline=None)
@given(int_mats)
def test_snf_properties(M):
    D, Pm, Q = smith_normal_form(M)
    assert matmul(matmul(Pm, M), Q) == D
    assert abs(determinant(Pm)) == 1 and abs(determinant(Q)) == 1
    diag = [d for d in diagonal(D) if d]
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    assert diag == invariant_factors_oracle(M)
    if len(M) == len(M[0]):
        assert abs(det_cofactor(M)) == abs(det_cofactor(D))


@settings(max_examples=40, deadline=None)
@given(int_mats, st.sampled_from([4, 6, 8, 9, 12]))
def test_snf_mod_m(M, m):
    D, Pm, Q = smith_normal_form(M, m)
    prod = [[x % m for x in row] for row in matmul(matmul(Pm, M), Q)]
    assert prod == D
    diag = [d for d in diagonal(D) if d]
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
