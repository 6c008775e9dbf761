"""Truncated expansions of the normalizing constant and covariance.

Oracles:

* Sigma = theta * e1 e1' makes the series collapse to partial sums of a
  confluent hypergeometric series (independent implementation in
  ``binghamx.oracle``), term for term;
* Sigma = theta * I_d has the closed limit exp(theta);
* gradients are compared with symmetric-matrix finite differences of the
  truncated value itself (same truncation, so agreement is to quadrature
  error only);
* the second-order covariance expansion has a hand-expanded closed form.
"""

import math

import numpy as np
import pytest
from conftest import random_symmetric, random_trace_zero

from binghamx import (
    GrowthRegime,
    OrderRangeError,
    alpha_descriptor,
    alpha_exponent,
    covariance_derived_bound,
    covariance_expansion,
    covariance_second_order,
    covariance_with_descriptor,
    fd_gradient,
    gradient_with_bound,
    inverse_norm_const_truncated,
    kummer_partial_sum,
    materialize,
    norm_const_gradient_truncated,
    norm_const_truncated,
    norm_const_with_bound,
    power_sums,
)
from binghamx.series import pochhammer_ratio


class TestPochhammerRatio:
    def test_values(self):
        # (1/2)_k / (d/2)_k
        assert pochhammer_ratio(0, 5) == 1.0
        assert pochhammer_ratio(1, 5) == pytest.approx(0.5 / 2.5, rel=1e-15)
        assert pochhammer_ratio(2, 4) == pytest.approx((0.5 * 1.5) / (2.0 * 3.0), rel=1e-15)

    def test_recurrence(self):
        for d in (3, 10, 101):
            for k in range(1, 20):
                lhs = pochhammer_ratio(k, d)
                rhs = pochhammer_ratio(k - 1, d) * (0.5 + k - 1) / (d / 2.0 + k - 1)
                assert lhs == pytest.approx(rhs, rel=1e-14)


class TestNormConstTruncated:
    def test_rank_one_equals_kummer_partial_sum(self):
        # m counts series terms, matching the partial-sum term count.
        # Bit-for-bit match is not required, but the two should agree to
        # a few ulps since both sum the same rational-coefficient terms.
        for theta in (0.3, -0.8, 2.0):
            for d in (3, 10, 50):
                s = np.zeros((d, d))
                s[0, 0] = theta
                ps = power_sums(s, 12)
                for m in (1, 3, 6, 12):
                    got = norm_const_truncated(ps, m, d)
                    want = kummer_partial_sum(d / 2.0, theta, m)
                    assert got == pytest.approx(want, rel=1e-13), (theta, d, m)

    def test_scaled_identity_approaches_exp(self):
        # Psi(theta * I) = exp(theta) exactly in the limit; with m = 25
        # the truncation error is far below double precision for small
        # theta.
        for theta in (0.5, -0.5, 1.0):
            for d in (3, 8):
                ps = power_sums(theta * np.eye(d), 25)
                got = norm_const_truncated(ps, 25, d)
                assert got == pytest.approx(math.exp(theta), rel=1e-13)

    def test_single_term_is_one(self):
        ps = power_sums(np.diag([1.0, -2.0, 0.5]), 1)
        assert norm_const_truncated(ps, 1, 3) == 1.0

    def test_two_terms_closed_form(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            d = int(rng.integers(2, 10))
            s = random_symmetric(rng, d)
            ps = power_sums(s, 1)
            assert norm_const_truncated(ps, 2, d) == pytest.approx(
                1.0 + ps.p[1] / d, rel=1e-14
            )

    def test_three_terms_closed_form(self):
        # term_2 = (1/2)_2/(d/2)_2 * C_2 / 2! with (1/2)_2 = 3/4,
        # (d/2)_2 = d(d+2)/4, C_2 = (t1^2 + 2 t2)/3.
        rng = np.random.default_rng(6)
        for _ in range(20):
            d = int(rng.integers(2, 10))
            s = random_symmetric(rng, d)
            ps = power_sums(s, 2)
            t1, t2 = ps.p[1], ps.p[2]
            expected = 1.0 + t1 / d + (t1**2 + 2.0 * t2) / (2.0 * d * (d + 2.0))
            assert norm_const_truncated(ps, 3, d) == pytest.approx(expected, rel=1e-13)

    def test_monotone_in_m_for_positive_matrix(self):
        # All series terms are positive when Sigma is PSD with nonzero
        # trace, so partial sums increase (strictly until the added term
        # falls below one ulp of the running sum).
        s = np.diag([0.5, 0.25, 0.1, 0.0])
        ps = power_sums(s, 15)
        vals = [norm_const_truncated(ps, m, 4) for m in range(1, 16)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert all(b > a for a, b in zip(vals[:8], vals[1:8]))

    def test_order_validation(self):
        ps = power_sums(np.eye(3), 2)
        with pytest.raises(OrderRangeError):
            norm_const_truncated(ps, 0, 3)
        with pytest.raises(OrderRangeError):
            norm_const_truncated(ps, 41, 3)


class TestGradient:
    def test_m3_closed_coefficients(self):
        # T_3 = 1 + t1/d + (t1^2 + 2 t2)/(2 d (d+2)) has gradient
        # [1/d + t1/(d(d+2))] I + [2/(d(d+2))] Sigma.
        rng = np.random.default_rng(8)
        for _ in range(20):
            d = int(rng.integers(2, 10))
            s = random_symmetric(rng, d)
            ps = power_sums(s, 2)
            g = norm_const_gradient_truncated(ps, 3, d)
            t1 = ps.p[1]
            c0 = 1.0 / d + t1 / (d * (d + 2.0))
            c1 = 2.0 / (d * (d + 2.0))
            assert g.coeffs == pytest.approx([c0, c1], rel=1e-13)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(10)
        for d in (3, 5):
            s = random_symmetric(rng, d)
            for m in (2, 3, 4, 7):
                ps = power_sums(s, m - 1)
                grad = materialize(norm_const_gradient_truncated(ps, m, d), s)

                def f(mat, m=m, d=d):
                    return norm_const_truncated(power_sums(mat, m - 1), m, d)

                fd = fd_gradient(f, s, 1e-6)
                assert np.allclose(grad, fd, rtol=5e-6, atol=5e-8), (d, m)

    def test_m2_gradient_constant(self):
        # T_2 = 1 + t1 / d, gradient = I / d for any Sigma.
        s = np.diag([3.0, -1.0])
        ps = power_sums(s, 1)
        g = norm_const_gradient_truncated(ps, 2, 2)
        assert g.coeffs == pytest.approx([0.5])

    def test_order_validation(self):
        ps = power_sums(np.eye(3), 2)
        with pytest.raises(OrderRangeError):
            norm_const_gradient_truncated(ps, 1, 3)


class TestInverse:
    def test_is_one_minus_partial_sum(self):
        # The inverse expansion drops quadratic-and-higher powers of the
        # first-order remainder: 1/(1 + x) ~ 1 - x with x the sum of
        # series terms 1..l-1.  Equivalently it equals 2 - T_l exactly.
        rng = np.random.default_rng(12)
        for _ in range(10):
            d = int(rng.integers(4, 12))
            s = random_symmetric(rng, d, norm=0.6)
            ps = power_sums(s, 8)
            for l in (2, 3, 5, 8):
                inv = inverse_norm_const_truncated(ps, l, d)
                assert inv == pytest.approx(2.0 - norm_const_truncated(ps, l, d), rel=1e-14)

    def test_close_to_true_reciprocal_when_terms_small(self):
        # For small ||Sigma|| relative to sqrt(d) the dropped quadratic
        # part is tiny, so 1 - x tracks 1/(1 + x).
        rng = np.random.default_rng(13)
        d = 100
        s = random_symmetric(rng, d, norm=0.5)
        ps = power_sums(s, 6)
        inv = inverse_norm_const_truncated(ps, 6, d)
        x = norm_const_truncated(ps, 6, d) - 1.0
        assert abs(inv - 1.0 / (1.0 + x)) <= 1.1 * x**2

    def test_order_validation(self):
        ps = power_sums(np.eye(3), 2)
        with pytest.raises(OrderRangeError):
            inverse_norm_const_truncated(ps, 1, 3)

    def test_positive_for_admissible_inputs(self):
        rng = np.random.default_rng(14)
        for _ in range(50):
            d = int(rng.integers(12, 40))
            s = random_symmetric(rng, d, norm=0.9)
            ps = power_sums(s, 3)
            assert inverse_norm_const_truncated(ps, 3, d) > 0.0


class TestCovariance:
    def test_second_order_closed_form_general(self):
        rng = np.random.default_rng(16)
        for _ in range(25):
            d = int(rng.integers(3, 12))
            s = random_symmetric(rng, d, norm=0.7)
            got = covariance_second_order(s, d)
            t1 = float(np.trace(s))
            expected = (1.0 - t1 / d) * (
                np.eye(d) / d + (t1 * np.eye(d) + 2.0 * s) / (d * (d + 2.0))
            )
            assert np.allclose(got, expected, rtol=1e-13, atol=1e-15)

    def test_second_order_equals_expansion_2_3(self):
        rng = np.random.default_rng(18)
        for _ in range(10):
            d = int(rng.integers(3, 10))
            s = random_symmetric(rng, d, norm=0.5)
            a = covariance_second_order(s, d)
            b = covariance_expansion(power_sums(s, 3), s, 2, 3, d)
            assert np.allclose(a, b, rtol=1e-13, atol=1e-16)

    def test_trace_zero_simplification(self):
        # tr Sigma = 0 collapses the closed form to I/d + 2 Sigma/(d(d+2)),
        # whose trace is exactly 1.
        rng = np.random.default_rng(20)
        for _ in range(20):
            d = int(rng.integers(3, 15))
            s = random_trace_zero(rng, d, norm=0.8)
            got = covariance_second_order(s, d)
            expected = np.eye(d) / d + 2.0 * s / (d * (d + 2.0))
            assert np.allclose(got, expected, rtol=1e-12, atol=1e-15)
            assert float(np.trace(got)) == pytest.approx(1.0, abs=1e-12)

    def test_expansion_converges_toward_high_order_reference(self):
        # Increasing both orders must reduce the residual against a very
        # high order evaluation of the same product.
        rng = np.random.default_rng(22)
        d = 20
        s = random_trace_zero(rng, d, norm=0.8)
        ps = power_sums(s, 16)
        ref = covariance_expansion(ps, s, 15, 16, d)
        errs = []
        for l, m in ((2, 3), (3, 4), (4, 6), (8, 12)):
            got = covariance_expansion(ps, s, l, m, d)
            errs.append(float(np.max(np.abs(got - ref))))
        assert errs == sorted(errs, reverse=True)
        assert errs[-1] < 1e-10

    def test_derived_bound_positive_and_shrinks(self):
        regime = GrowthRegime(scale=0.9, exponent=0.0)
        d = 12
        rng = np.random.default_rng(24)
        s = random_trace_zero(rng, d, norm=0.8)
        ps = power_sums(s, 12)
        b_small = covariance_derived_bound(ps, s, 3, 4, d, regime)
        b_big = covariance_derived_bound(ps, s, 6, 12, d, regime)
        assert b_small > b_big > 0.0


class TestAlphaExponent:
    def test_values(self):
        r_half = GrowthRegime(scale=1.0, exponent=0.5)
        assert alpha_exponent(2, r_half) == pytest.approx((2.0 - 0.5) / 2.0)
        assert alpha_exponent(3, r_half) == pytest.approx((3.0 - 2.0 * 0.5) / 2.0)
        assert alpha_exponent(7, r_half) == pytest.approx((3.0 - 2.0 * 0.5) / 2.0)
        r0 = GrowthRegime(scale=1.0, exponent=0.0)
        assert alpha_exponent(2, r0) == pytest.approx(1.0)
        assert alpha_exponent(3, r0) == pytest.approx(1.5)

    def test_descriptor_strings(self):
        r0 = GrowthRegime(scale=1.0, exponent=0.0)
        assert "O(d^-1)" in alpha_descriptor(2, r0)
        assert "O(d^-1.5)" in alpha_descriptor(3, r0)
        assert "(2 - r)/2" in alpha_descriptor(2, None)
        assert "(3 - 2r)/2" in alpha_descriptor(5, None)

    def test_order_validation(self):
        with pytest.raises(OrderRangeError):
            alpha_exponent(1, GrowthRegime(1.0, 0.0))


class TestBoundedWrappers:
    def test_norm_const_with_bound(self):
        regime = GrowthRegime(scale=1.0, exponent=0.5)
        d = 20
        ps = power_sums(0.04 * np.eye(d), 3)
        out = norm_const_with_bound(ps, 3, d, regime)
        assert out.value == pytest.approx(norm_const_truncated(ps, 3, d), rel=1e-15)
        assert out.bound == pytest.approx(0.18781560289809351, rel=1e-12)
        assert out.m == 3 and out.d == 20

    def test_gradient_with_bound(self):
        regime = GrowthRegime(scale=1.0, exponent=0.5)
        d = 20
        ps = power_sums(0.04 * np.eye(d), 3)
        out = gradient_with_bound(ps, 3, d, regime)
        assert out.bound == pytest.approx(0.15382778874430997, rel=1e-12)

    def test_covariance_with_descriptor(self):
        regime = GrowthRegime(scale=0.9, exponent=0.0)
        d = 12
        rng = np.random.default_rng(26)
        s = random_trace_zero(rng, d, norm=0.8)
        ps = power_sums(s, 4)
        out = covariance_with_descriptor(ps, s, 3, 4, d, regime)
        assert out.l == 3 and out.m == 4
        assert isinstance(out.bound, str) and "O(d^-" in out.bound
        assert np.allclose(out.value, covariance_expansion(ps, s, 3, 4, d))
        # Without a regime the descriptor stays symbolic in r.
        sym = covariance_with_descriptor(ps, s, 3, 4, d)
        assert "(3 - 2r)/2" in sym.bound
