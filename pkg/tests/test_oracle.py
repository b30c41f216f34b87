"""Wick-rule oracle: monomial moments, linear extension, quadrature check."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from complexchaos import ChaosPolynomial, Kernel, expand
from complexchaos.oracle import (
    MomentQuery,
    expectation,
    monomial_expectation,
    pair_expectation,
    quadrature_monomial_expectation,
)


class TestMonomialRule:
    def test_unit_covariance(self):
        assert monomial_expectation(MomentQuery((1,), (1,))) == 1

    def test_exponential_second_moment(self):
        assert monomial_expectation(MomentQuery((2,), (2,))) == 2

    def test_cross_terms_vanish(self):
        assert monomial_expectation(MomentQuery((1, 0), (0, 1))) == 0

    def test_factorial_growth(self):
        assert monomial_expectation(MomentQuery((4, 2), (4, 2))) == 24 * 2

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            MomentQuery((1,), (1, 0))


class TestExpectation:
    def test_centered_chaos(self):
        p = expand(Kernel.basis(1, 1, (0, 0), 1))  # z zbar - 1
        assert expectation(p) == 0

    def test_isometry_value(self):
        p = expand(Kernel.basis(1, 1, (0, 0), 1))
        assert expectation(p * p.conjugate()) == pytest.approx(1.0)

    def test_constant(self):
        assert expectation(ChaosPolynomial.constant(3 - 4j, 2)) == 3 - 4j

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_conjugation_commutes(self, seed):
        rng = np.random.default_rng(seed)
        from complexchaos import random_kernel

        p = expand(random_kernel(2, 1, 2, rng))
        assert expectation(p.conjugate()) == pytest.approx(
            expectation(p).conjugate(), abs=1e-12
        )

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_positivity(self, seed):
        rng = np.random.default_rng(seed)
        from complexchaos import random_kernel

        p = expand(random_kernel(1, 2, 3, rng))
        value = expectation(p * p.conjugate())
        assert value.real >= -1e-12
        assert abs(value.imag) < 1e-12


class TestPairExpectation:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_agrees_with_materialized_product(self, seed):
        rng = np.random.default_rng(seed)
        from complexchaos import random_kernel

        p = expand(random_kernel(1, 1, 2, rng))
        q = expand(random_kernel(2, 0, 2, rng))
        direct = expectation(p * q)
        assert pair_expectation(p, q) == pytest.approx(direct, abs=1e-12)

    def test_variable_count_guard(self):
        with pytest.raises(ValueError):
            pair_expectation(ChaosPolynomial.constant(1, 1), ChaosPolynomial.constant(1, 2))


class TestQuadratureCrossCheck:
    def test_low_degree_agreement(self):
        for a in range(5):
            for b in range(5):
                exact = monomial_expectation(MomentQuery((a,), (b,)))
                approx = quadrature_monomial_expectation(a, b)
                assert abs(approx - exact) <= 1e-8 * max(1.0, abs(exact))
