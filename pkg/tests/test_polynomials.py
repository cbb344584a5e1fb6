import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from monogenic.algebra import SHIPPED_ALGEBRAS, AlgebraError, build_algebra, random_element
from monogenic.polynomials import (
    AlgebraPolynomial,
    all_multi_indices,
    apply_operator,
    ck_extension,
    dbar_left,
    dbar_right,
    dconj_left,
    distinct_permutations,
    evaluate,
    fueter_expansion,
    fueter_polynomial,
    fueter_variable,
    laplacian,
    multi_factorial,
    multi_indices,
    nested_product,
    partial_derivative,
    x_power,
)
from oracles import fueter_oracle

H = build_algebra("quaternion")
O = build_algebra("octonion")
O3 = build_algebra("octonion", 3)
ALGEBRAS = sorted(SHIPPED_ALGEBRAS)


def X(spec, s):
    return AlgebraPolynomial.coordinate(spec, s)


def random_poly(spec, rng, degree=3, terms=4, in_M=False):
    p = AlgebraPolynomial.zero(spec)
    for _ in range(terms):
        exps = [0] * spec.dim_hyper
        for _ in range(rng.randint(0, degree)):
            exps[rng.randrange(spec.dim_hyper)] += 1
        p = p + AlgebraPolynomial.monomial(spec, exps, random_element(spec, rng, in_M=in_M))
    return p


# -- basic arithmetic ---------------------------------------------------------


def test_zero_coefficients_are_pruned():
    p = X(O, 1) - X(O, 1)
    assert p.is_zero()
    assert p.terms == {}


def test_graded_lex_ordering_and_degree():
    p = X(H, 0) * X(H, 0) + X(H, 1) + AlgebraPolynomial.constant(H.one())
    exps = p.sorted_exponents()
    assert [sum(e) for e in exps] == sorted(sum(e) for e in exps)
    assert p.degree() == 2
    assert not p.is_homogeneous()


def test_spec_mismatch_is_an_error():
    with pytest.raises(AlgebraError):
        X(H, 1) + X(O, 1)


def test_json_round_trip_is_exact():
    rng = random.Random(1)
    p = random_poly(O, rng) / 3
    doc = p.to_json()
    again = AlgebraPolynomial.from_json(O, json.loads(json.dumps(doc)))
    assert again == p
    assert doc == again.to_json()


def test_numeric_matches_exact():
    rng = random.Random(4)
    p = random_poly(O3, rng)
    pts = np.array([[0.1, -0.2, 0.3, 0.4], [1.0, 0.5, -0.5, 2.0]])
    got = p.numeric()(pts)
    for row, x in zip(got, pts):
        want = p.evaluate(tuple(Fraction(c) for c in x)).to_array()
        assert np.allclose(row, want)


def test_translate():
    p = X(H, 1) * X(H, 1)
    q = p.translate((0, 1, 0, 0))
    assert q.evaluate((0, 0, 0, 0)) == H.scalar(1)


# -- Fueter variables ---------------------------------------------------------


def test_fueter_variable_form():
    z1 = fueter_variable(H, 1)
    assert z1 == X(H, 1) - X(H, 0) * H.basis(1)
    assert apply_operator("dbar_left", z1).is_zero()
    assert z1.evaluate(H.basis(1)) == H.one()
    assert z1.evaluate((1, 2, 0, 0)) == H.scalar(2) - H.basis(1)


@pytest.mark.parametrize("ell", [0, 4])
def test_fueter_variable_range(ell):
    with pytest.raises(AlgebraError):
        fueter_variable(H, ell)


# -- Fueter polynomials -------------------------------------------------------


def test_fueter_p11():
    z1, z2 = fueter_variable(O, 1), fueter_variable(O, 2)
    k = (1, 1) + (0,) * 5
    assert fueter_polynomial(O, k) == (z1 * z2 + z2 * z1) / 2


def test_fueter_p2_normalization():
    z1 = fueter_variable(O, 1)
    assert fueter_polynomial(O, (2,) + (0,) * 6) == z1 * z1 / 2


def test_fueter_zero_index_is_one():
    assert fueter_polynomial(O, (0,) * 7) == AlgebraPolynomial.constant(O.one())


def test_fueter_wrong_length():
    with pytest.raises(AlgebraError):
        fueter_polynomial(O, (1, 1))


@pytest.mark.parametrize("k", [(1, 1, 1), (2, 1, 0), (1, 0, 2), (0, 3, 0), (2, 1, 1)])
def test_fueter_matches_oracle(k):
    z = {ell: fueter_variable(O3, ell + 1) for ell in range(3)}
    assert fueter_polynomial(O3, k) == fueter_oracle(z, k)


@pytest.mark.parametrize("k", [(1, 1, 1), (2, 1, 0), (0, 1, 2)])
def test_random_bracketings_agree(k):
    rng = random.Random(sum(k))
    a = random_element(O3, rng)
    reference = fueter_polynomial(O3, k, right_factor=a)
    for tree in [((0, 1), (2, 3)), (((0, 1), 2), 3), (0, ((1, 2), 3))]:
        assert fueter_polynomial(O3, k, tree, right_factor=a) == reference
    assert fueter_polynomial(O3, k, "left_to_right", right_factor=a) == reference


def test_nested_product_brackets():
    e = [O.basis(s) for s in (1, 2, 4)]
    assert nested_product(e, "left_to_right") == (e[0] * e[1]) * e[2]
    assert nested_product(e, "right_to_left") == e[0] * (e[1] * e[2])
    assert nested_product(e, ((0, 1), 2)) == (e[0] * e[1]) * e[2]


@pytest.mark.parametrize("name", ALGEBRAS)
def test_fueter_polynomials_are_two_sided_monogenic(name):
    spec = SHIPPED_ALGEBRAS[name]()
    for k in all_multi_indices(spec.m, 3):
        p = fueter_polynomial(spec, k)
        assert dbar_left(p).is_zero(), k
        assert dbar_right(p).is_zero(), k
        assert p.is_M_valued(), k


def test_order_independence_octonion():
    for k in all_multi_indices(O.m, 3):
        assert fueter_polynomial(O, k, "left_to_right") == fueter_polynomial(O, k, "right_to_left")


@pytest.mark.parametrize("name", ALGEBRAS)
def test_right_multiples_stay_monogenic(name):
    spec = SHIPPED_ALGEBRAS[name]()
    rng = random.Random(9)
    for k in all_multi_indices(spec.m, 3):
        a = random_element(spec, rng)
        assert dbar_left(fueter_polynomial(spec, k) * a).is_zero(), k


# -- CK extension -------------------------------------------------------------


def test_ck_examples():
    assert ck_extension(O, X(O, 1)) == fueter_variable(O, 1)
    one = AlgebraPolynomial.constant(O.one())
    assert ck_extension(O, one) == one
    ck = ck_extension(O, X(O, 1) * X(O, 1))
    # hand expansion: x1^2 - 2 x0 x1 v1 - x0^2
    want = X(O, 1) * X(O, 1) - X(O, 0) * X(O, 1) * O.basis(1) * 2 - X(O, 0) * X(O, 0)
    assert ck == want
    assert ck.evaluate((1,) + (0,) * 7) == O.scalar(-1)


def test_ck_rejects_x0_dependence():
    with pytest.raises(AlgebraError):
        ck_extension(O, X(O, 0))


@pytest.mark.parametrize("name", ALGEBRAS)
def test_ck_identity(name):
    spec = SHIPPED_ALGEBRAS[name]()
    for k in all_multi_indices(spec.m, 3):
        assert ck_extension(spec, x_power(spec, k)) == fueter_polynomial(spec, k) * multi_factorial(k), k


@pytest.mark.parametrize("side,op", [("left", dbar_left), ("right", dbar_right)])
def test_ck_extension_is_monogenic_and_restricts(side, op):
    rng = random.Random(12)
    for _ in range(5):
        f0 = random_poly(O3, rng)
        f0 = AlgebraPolynomial(O3, {(0,) + e[1:]: c for e, c in f0.terms.items()})
        f0 = AlgebraPolynomial.from_json(O3, f0.to_json())
        ext = ck_extension(O3, f0, side)
        assert op(ext).is_zero()
        restricted = AlgebraPolynomial(O3, {e: c for e, c in ext.terms.items() if e[0] == 0})
        assert restricted == f0


# -- operators ----------------------------------------------------------------


def test_operator_examples():
    assert dbar_left(X(O, 0)) == AlgebraPolynomial.constant(O.one())
    p11 = fueter_polynomial(O, (1, 1) + (0,) * 5)
    assert apply_operator("dbar_left", p11).is_zero()
    with pytest.raises(AlgebraError):
        apply_operator("curl", p11)


def test_partial_derivative_examples():
    p11 = fueter_polynomial(O, (1, 1) + (0,) * 5)
    assert partial_derivative(p11, (0, 1, 1) + (0,) * 5) == AlgebraPolynomial.constant(O.one())
    z1 = fueter_variable(O, 1)
    assert partial_derivative(z1, (1,) + (0,) * 7) == AlgebraPolynomial.constant(-O.basis(1))
    assert partial_derivative(p11, (0, 3) + (0,) * 6).is_zero()


def test_evaluate_examples():
    p11 = fueter_polynomial(O, (1, 1) + (0,) * 5)
    assert evaluate(p11, O.basis(1)).is_zero()


@pytest.mark.parametrize("name", ALGEBRAS)
def test_conjugate_operator_factors_laplacian(name):
    spec = SHIPPED_ALGEBRAS[name]()
    rng = random.Random(21)
    for _ in range(5):
        p = random_poly(spec, rng, in_M=True)
        assert dconj_left(dbar_left(p)) == laplacian(p)


def test_derivative_commutes_with_dbar():
    rng = random.Random(8)
    p = random_poly(O3, rng)
    for k in [(1, 0, 0, 0), (0, 1, 1, 0), (0, 0, 0, 2)]:
        assert dbar_left(partial_derivative(p, k)) == partial_derivative(dbar_left(p), k)


def test_translation_preserves_monogenicity():
    p = fueter_polynomial(O3, (1, 1, 1))
    assert dbar_left(p.translate((Fraction(1, 2), -1, 2, 0))).is_zero()


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_homogeneous_reproduction(degree):
    rng = random.Random(degree)
    p = AlgebraPolynomial.zero(O3)
    for k in multi_indices(3, degree):
        p = p + fueter_polynomial(O3, k) * random_element(O3, rng)
    assert dbar_left(p).is_zero()
    assert fueter_expansion(p) == p


# -- properties ---------------------------------------------------------------


@given(st.lists(st.integers(0, 3), min_size=0, max_size=6))
def test_distinct_permutations_match_set(seq):
    from itertools import permutations

    got = list(distinct_permutations(seq))
    assert got == sorted(set(permutations(seq)))


@given(st.integers(1, 4), st.integers(0, 5))
def test_multi_index_count(m, degree):
    from math import comb

    ks = multi_indices(m, degree)
    assert len(ks) == comb(degree + m - 1, m - 1)
    assert all(sum(k) == degree for k in ks)


@given(st.integers(0, 10_000))
def test_polynomial_ring_laws(seed):
    rng = random.Random(seed)
    p, q = random_poly(H, rng, 2, 3), random_poly(H, rng, 2, 3)
    r = random_poly(H, rng, 2, 3)
    assert (p + q) * r == p * r + q * r
    assert p - p == AlgebraPolynomial.zero(H)
    x = tuple(Fraction(rng.randint(-3, 3), 2) for _ in range(4))
    assert (p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x)
