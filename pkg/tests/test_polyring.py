import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentcone import (
    Polynomial,
    axis_scale,
    homogeneous_part,
    iter_simplex,
    poly_add,
    poly_eval,
    poly_from_dict,
    poly_mul,
    poly_sub,
    poly_to_dict,
    series_sqrt,
    simplex_size,
)
from conftest import (
    assert_poly_close,
    coefficient_gap,
    dense_convolution,
    dense_from_poly,
    horner_eval,
    random_sparse_poly,
)

X = Polynomial.variable(1, 0)
X1 = Polynomial.variable(2, 0)
X2 = Polynomial.variable(2, 1)


def exponents_strategy(n):
    return st.tuples(*([st.integers(0, 3)] * n))


def poly_strategy(n):
    coef = st.floats(min_value=-10, max_value=10, allow_nan=False, width=64)
    return st.dictionaries(exponents_strategy(n), coef, min_size=0, max_size=6).map(
        lambda terms: Polynomial(n, terms)
    )


class TestSimplexOrder:
    def test_graded_lex_two_vars(self):
        assert list(iter_simplex(2, 2)) == [
            (0, 0),
            (0, 1),
            (1, 0),
            (0, 2),
            (1, 1),
            (2, 0),
        ]

    def test_size_formula(self):
        for n in (1, 2, 3):
            for d in range(5):
                assert len(list(iter_simplex(n, d))) == simplex_size(n, d)


class TestAdd:
    def test_additive_inverse(self):
        assert_poly_close(poly_add(X, -X), Polynomial.zero(1))

    def test_like_term_merge(self):
        f = Polynomial(1, {(0,): 1.0, (2,): 1.0})
        g = Polynomial(1, {(2,): 1.0})
        assert_poly_close(poly_add(f, g), Polynomial(1, {(0,): 1.0, (2,): 2.0}))

    def test_termwise_oracle(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 4))
            f = random_sparse_poly(rng, n, 5)
            g = random_sparse_poly(rng, n, 5)
            h = poly_add(f, g)
            for alpha in set(f.terms) | set(g.terms):
                assert h.coefficient(alpha) == pytest.approx(
                    f.coefficient(alpha) + g.coefficient(alpha), abs=1e-14
                )

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            poly_add(X, X1)


class TestMul:
    def test_difference_of_squares(self):
        f = Polynomial(1, {(1,): 1.0, (0,): -1.0})
        g = Polynomial(1, {(1,): 1.0, (0,): 1.0})
        assert_poly_close(poly_mul(f, g), Polynomial(1, {(2,): 1.0, (0,): -1.0}))

    def test_absorbing_zero(self, rng):
        f = random_sparse_poly(rng, 2, 4)
        assert poly_mul(f, Polynomial.zero(2)).terms == {}

    def test_degree_additivity(self, rng):
        for _ in range(20):
            f = random_sparse_poly(rng, 2, 4)
            g = random_sparse_poly(rng, 2, 4)
            product = poly_mul(f, g)
            if product.terms:  # cancellation of the top terms is possible but rare
                assert product.degree <= f.degree + g.degree

    def test_dense_convolution_oracle(self, rng):
        for _ in range(30):
            f = random_sparse_poly(rng, 2, 4)
            g = random_sparse_poly(rng, 2, 4)
            expected = dense_convolution(dense_from_poly(f), dense_from_poly(g))
            got = poly_mul(f, g)
            for idx in np.ndindex(expected.shape):
                assert got.coefficient(idx) == pytest.approx(expected[idx], abs=1e-10)


class TestEval:
    def test_constant_term_at_origin(self):
        f = Polynomial(2, {(0, 0): 1.0, (1, 0): 1.0, (0, 1): 1.0})
        assert poly_eval(f, (0.0, 0.0)) == 1.0

    def test_single_monomial(self):
        f = Polynomial.monomial((2, 1))
        assert poly_eval(f, (2.0, 3.0)) == 12.0

    def test_horner_oracle(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 4))
            f = random_sparse_poly(rng, n, 6)
            x = rng.uniform(-2, 2, size=n)
            expected = horner_eval(dense_from_poly(f), x)
            assert poly_eval(f, x) == pytest.approx(expected, rel=1e-12, abs=1e-12)


class TestAxisScale:
    def test_single_term(self):
        assert_poly_close(
            axis_scale(Polynomial.monomial((2,)), (4.0,)),
            Polynomial(1, {(2,): 16.0}),
        )

    def test_inverse_round_trip(self, rng):
        for _ in range(20):
            f = random_sparse_poly(rng, 2, 5)
            c = tuple(rng.uniform(0.3, 3.0, size=2))
            back = axis_scale(axis_scale(f, c), tuple(1.0 / v for v in c))
            assert coefficient_gap(back, f) <= 1e-10

    def test_evaluation_oracle(self, rng):
        for _ in range(30):
            f = random_sparse_poly(rng, 2, 5)
            c = rng.uniform(0.3, 3.0, size=2)
            x = rng.uniform(-1.5, 1.5, size=2)
            lhs = poly_eval(axis_scale(f, tuple(c)), x)
            rhs = poly_eval(f, tuple(ci * xi for ci, xi in zip(c, x)))
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(ValueError):
            axis_scale(X, (0.0,))
        with pytest.raises(ValueError):
            axis_scale(X, (-1.0,))


class TestSeriesSqrt:
    def test_binomial_series_oracle(self):
        # sqrt(1 + u) coefficients: c_0 = 1, c_k = c_{k-1} * (1/2 - k + 1) / k
        coeffs = [1.0]
        for k in range(1, 6):
            coeffs.append(coeffs[-1] * (0.5 - k + 1) / k)
        f = Polynomial(1, {(0,): 1.0, (1,): 1.0})
        g = series_sqrt(f, 5)
        for k in range(6):
            assert g.coefficient((k,)) == pytest.approx(coeffs[k], abs=1e-14)
        assert g.coefficient((2,)) == pytest.approx(-0.125)

    def test_constant_case(self):
        g = series_sqrt(Polynomial.constant(2, 9.0), 4)
        assert_poly_close(g, Polynomial.constant(2, 3.0))

    def test_rejects_nonpositive_constant_term(self):
        with pytest.raises(ValueError):
            series_sqrt(X, 3)
        with pytest.raises(ValueError):
            series_sqrt(Polynomial.constant(1, -2.0), 3)

    def test_square_consistency(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 4))
            f = random_sparse_poly(rng, n, 3, coef_range=1.0)
            f = poly_add(f, Polynomial.constant(n, float(rng.uniform(0.5, 2.0)) - f.constant_term))
            depth = int(rng.integers(1, 6))
            g = series_sqrt(f, depth)
            gap = poly_sub(poly_mul(g, g), f)
            for alpha in iter_simplex(n, depth):
                assert abs(gap.coefficient(alpha)) <= 1e-10


class TestHomogeneousPart:
    def test_degree_filter(self):
        f = Polynomial(2, {(0, 0): 1.0, (1, 0): 1.0, (1, 1): 1.0})
        assert_poly_close(homogeneous_part(f, 2), Polynomial(2, {(1, 1): 1.0}))

    def test_decomposition(self, rng):
        f = random_sparse_poly(rng, 2, 5)
        total = Polynomial.zero(2)
        for d in range(f.degree + 1):
            total = poly_add(total, homogeneous_part(f, d))
        assert_poly_close(total, f)

    def test_beyond_degree_is_zero(self):
        f = Polynomial(1, {(2,): 3.0})
        assert homogeneous_part(f, 5).terms == {}


class TestRingAxioms:
    @settings(max_examples=60, deadline=None)
    @given(poly_strategy(2), poly_strategy(2), poly_strategy(2))
    def test_mul_associative_and_distributive(self, f, g, h):
        left = poly_mul(poly_mul(f, g), h)
        right = poly_mul(f, poly_mul(g, h))
        scale = max(
            (abs(c) for c in list(left.terms.values()) + list(right.terms.values())),
            default=1.0,
        )
        assert coefficient_gap(left, right) <= 1e-12 * max(scale, 1.0)

        dist_left = poly_mul(f, poly_add(g, h))
        dist_right = poly_add(poly_mul(f, g), poly_mul(f, h))
        scale2 = max((abs(c) for c in dist_right.terms.values()), default=1.0)
        assert coefficient_gap(dist_left, dist_right) <= 1e-12 * max(scale2, 1.0)

    @settings(max_examples=60, deadline=None)
    @given(poly_strategy(2), poly_strategy(2))
    def test_commutativity(self, f, g):
        assert coefficient_gap(poly_mul(f, g), poly_mul(g, f)) <= 1e-12
        assert coefficient_gap(poly_add(f, g), poly_add(g, f)) == 0.0

    @settings(max_examples=40, deadline=None)
    @given(poly_strategy(2), poly_strategy(2))
    def test_axis_scale_is_ring_homomorphism(self, f, g):
        c = (1.7, 0.6)
        lhs = axis_scale(poly_mul(f, g), c)
        rhs = poly_mul(axis_scale(f, c), axis_scale(g, c))
        scale = max((abs(v) for v in lhs.terms.values()), default=1.0)
        assert coefficient_gap(lhs, rhs) <= 1e-12 * max(scale, 1.0)


class TestCanonicalForm:
    def test_no_stored_zeros(self):
        f = Polynomial(1, {(0,): 0.0, (1,): 2.0})
        assert (0,) not in f.terms

    def test_tiny_coefficients_survive_large_ones(self):
        f = Polynomial(1, {(0,): 1e-20, (1,): 1e20})
        assert f.coefficient((0,)) == 1e-20

    def test_zero_degree_convention(self):
        assert Polynomial.zero(3).degree == -1


class TestJsonFormat:
    def test_round_trip(self, rng):
        f = random_sparse_poly(rng, 2, 4)
        assert poly_from_dict(poly_to_dict(f)) == f

    def test_duplicate_exponent_rejected(self):
        data = {"n": 1, "terms": [{"exp": [1], "coef": 1.0}, {"exp": [1], "coef": 2.0}]}
        with pytest.raises(ValueError):
            poly_from_dict(data)

    def test_terms_serialized_in_graded_lex_order(self):
        f = Polynomial(2, {(2, 0): 1.0, (0, 0): 1.0, (0, 1): 1.0})
        exps = [tuple(t["exp"]) for t in poly_to_dict(f)["terms"]]
        assert exps == [(0, 0), (0, 1), (2, 0)]
