import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy import integrate

from conftest import erfc_half, ml_oracle
from wrightfde.errors import ConvergenceError, DegenerateOrderError, DensityCancellationError, DomainError, PoleError
from wrightfde.specfun import (
    FracOrder, MlParams, TaylorSeries, g_density, gamma, inverse_time_moment, loggamma, mittag_leffler,
    ml_partial_r, rgamma, support_bound, tail_bound, transform_series, wright,
)


class TestTypes:
    @pytest.mark.parametrize("b", [0.0, -0.1, 1.0000001, float("nan"), 2.0])
    def test_frac_order_rejects(self, b):
        with pytest.raises(DomainError):
            FracOrder(b)

    def test_frac_order_degenerate_flag(self):
        assert FracOrder(1.0).degenerate
        assert not FracOrder(0.999).degenerate

    @pytest.mark.parametrize("b,a", [(0, 1), (1, 0), (-1, 1)])
    def test_ml_params_positive(self, b, a):
        with pytest.raises(DomainError):
            MlParams(b, a)

    def test_taylor_series(self):
        s = TaylorSeries.from_taylor_coefficients([1.0, 1.0, 0.5])
        assert s.coeffs == (1.0, 1.0, 1.0)
        assert s.truncation_order == 2
        with pytest.raises(DomainError):
            TaylorSeries(())
        with pytest.raises(DomainError):
            TaylorSeries((1.0, float("inf")))


class TestGamma:
    def test_values(self):
        assert gamma(1.0) == pytest.approx(1.0, rel=1e-15)
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
        assert gamma(4.5) == pytest.approx(11.6317283966, rel=1e-10)

    def test_recurrence_oracle(self):
        # down from Gamma(1/2) by x Gamma(x) = Gamma(x + 1)
        ref = math.sqrt(math.pi) * 0.5 * 1.5 * 2.5 * 3.5
        assert gamma(4.5) == pytest.approx(ref, rel=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
    def test_poles(self, x):
        with pytest.raises(PoleError):
            gamma(x)
        assert rgamma(x) == 0.0

    @given(st.floats(0.1, 50.0))
    def test_relative_accuracy(self, x):
        ref = float(mpmath.gamma(x))
        assert abs(gamma(x) / ref - 1) <= 1e-13

    @given(st.floats(-20.0, -0.01).filter(lambda v: abs(v - round(v)) > 1e-6))
    def test_reflection(self, x):
        ref = float(mpmath.gamma(x))
        assert abs(gamma(x) / ref - 1) <= 1e-11

    def test_loggamma_large(self):
        assert loggamma(200.5) == pytest.approx(float(mpmath.loggamma(200.5)), rel=1e-14)

    def test_array(self):
        x = np.array([0.5, 1.0, 5.0])
        np.testing.assert_allclose(gamma(x), [math.sqrt(math.pi), 1.0, 24.0], rtol=1e-14)


class TestMittagLeffler:
    def test_exp(self):
        assert mittag_leffler(1.0, 1.0) == pytest.approx(math.e, rel=1e-12)

    def test_cos(self):
        assert mittag_leffler(-1.0, 2.0) == pytest.approx(math.cos(1.0), rel=1e-12)

    def test_half_negative_matches_erfc_identity(self):
        assert mittag_leffler(-1.0, 0.5) == pytest.approx(0.4275835762, abs=1e-10)
        assert mittag_leffler(-1.0, 0.5) == pytest.approx(erfc_half(-1.0), rel=1e-10)

    def test_half_positive_matches_erfc_identity(self):
        # exp(1) erfc(-1) = 5.00898..., the value of E_{1/2}(1)
        assert mittag_leffler(1.0, 0.5) == pytest.approx(erfc_half(1.0), rel=1e-10)
        assert mittag_leffler(1.0, 0.5) == pytest.approx(5.0089800808, rel=1e-10)

    @given(st.floats(-20, 20))
    def test_exp_agreement(self, z):
        assert mittag_leffler(z, 1.0) == pytest.approx(math.exp(z), rel=1e-10)

    @given(st.floats(0.3, 1.0), st.floats(0.2, 2.5), st.floats(-50, 50))
    def test_against_oracle(self, beta, alpha, z):
        assume(z <= 0 or z ** (1 / beta) < 700)  # larger positive values overflow
        ref = ml_oracle(z, beta, alpha)
        got = mittag_leffler(z, beta, alpha)
        assert abs(got - ref) <= 1e-8 * abs(ref) + 1e-11

    @given(st.floats(-2.5, 2.5), st.floats(-2.5, 2.5))
    def test_complex_argument(self, x, y):
        z = complex(x, y)
        ref = ml_oracle(z, 0.6, 1.0)
        assert abs(mittag_leffler(z, 0.6) - ref) <= 1e-8 * abs(ref) + 1e-11

    def test_complex_far_out_refused(self):
        # only the series handles complex z; heavy cancellation is an error, not a wrong value
        with pytest.raises(ConvergenceError):
            mittag_leffler(5j, 0.6)

    def test_conjugate_symmetry(self):
        z = complex(-2.0, 1.5)
        assert mittag_leffler(z.conjugate(), 0.7) == pytest.approx(mittag_leffler(z, 0.7).conjugate(), rel=1e-13)

    def test_array_shape(self):
        z = np.linspace(-3, 3, 6).reshape(2, 3)
        out = mittag_leffler(z, 0.8)
        assert out.shape == (2, 3)
        assert out[0, 0] == pytest.approx(mittag_leffler(z[0, 0], 0.8))

    def test_overflow_reported(self):
        with pytest.raises(OverflowError):
            mittag_leffler(50.0, 0.3)

    def test_invalid_params(self):
        with pytest.raises(DomainError):
            mittag_leffler(1.0, 0.0)


class TestMlPartial:
    def test_r_zero(self):
        for b in (0.3, 0.5, 0.9):
            assert ml_partial_r(0.0, 2.0 ** b, b) == pytest.approx(2.0 ** b / math.gamma(b + 1), rel=1e-12)

    def test_exponential_case(self):
        assert ml_partial_r(1.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-12)

    def test_series_oracle(self):
        with mpmath.workdps(40):
            ref = float(mpmath.fsum(n * (-1) ** (n - 1) * mpmath.rgamma(0.5 * n + 1) for n in range(1, 201)))
        assert ml_partial_r(-1.0, 1.0, 0.5) == pytest.approx(ref, rel=1e-10)
        assert ref == pytest.approx(0.27321201478389856, rel=1e-12)

    @given(st.floats(-3, 3), st.floats(0.1, 3), st.floats(0.3, 1))
    def test_matches_difference_quotient(self, r, t, b):
        h = 1e-5
        x = t ** b
        fd = (mittag_leffler((r + h) * x, b) - mittag_leffler((r - h) * x, b)) / (2 * h)
        assert ml_partial_r(r, x, b) == pytest.approx(fd, rel=1e-5, abs=1e-7)


class TestWright:
    def test_zero_argument(self):
        assert wright(0.7, 1.0, 0.0) == 1.0

    def test_lambda_zero(self):
        assert wright(0.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-13)

    def test_half_gaussian(self):
        # g_{1/2}(1; 1) = W_{-1/2,1/2}(-1) = exp(-1/4)/sqrt(pi)
        ref = math.exp(-0.25) / math.sqrt(math.pi)
        assert wright(-0.5, 0.5, -1.0) == pytest.approx(ref, rel=1e-12)
        assert ref == pytest.approx(0.4393912895, rel=1e-9)

    def test_pole_terms_vanish(self):
        # mu = 0: the k = 0 term has 1/Gamma(0) = 0, so W(0) = 0 exactly
        assert wright(0.5, 0.0, 0.0) == 0.0
        # lam = -1/2, mu = 1/2: odd k hit poles; the even terms sum to exp(-1)/sqrt(pi)
        with mpmath.workdps(30):
            ref = float(mpmath.fsum(2 ** k / (mpmath.factorial(k) * mpmath.gamma(0.5 - 0.5 * k)) for k in range(0, 120, 2)))
        assert ref == pytest.approx(math.exp(-1) / math.sqrt(math.pi), rel=1e-14)
        assert wright(-0.5, 0.5, 2.0) == pytest.approx(ref, rel=1e-10)

    @given(st.floats(0.05, 2.0), st.floats(0.1, 3.0), st.floats(-5, 5))
    def test_series_oracle(self, lam, mu, z):
        with mpmath.workdps(30):
            ref = float(mpmath.nsum(lambda k: z ** k * mpmath.rgamma(k + 1) * mpmath.rgamma(lam * k + mu), [0, mpmath.inf]))
        assert wright(lam, mu, z) == pytest.approx(ref, rel=1e-9, abs=1e-12)

    def test_lambda_domain(self):
        with pytest.raises(DomainError):
            wright(-1.0, 1.0, 0.5)


class TestDensity:
    def test_half_gaussian_values(self):
        assert g_density(0.5, 1.0, 1.0) == pytest.approx(0.4393912894, rel=1e-9)
        assert g_density(0.5, 0.0, 1.0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-12)

    @given(st.floats(0.0, 8.0), st.floats(0.2, 3.0))
    def test_half_gaussian_identity(self, x, t):
        assume(x / math.sqrt(t) <= 7.0)
        ref = math.exp(-x * x / (4 * t)) / math.sqrt(math.pi * t)
        # accuracy is relative to the density scale t**-beta
        assert abs(g_density(0.5, x, t) - ref) <= 1e-6 / math.sqrt(t)

    def test_errors(self):
        with pytest.raises(DegenerateOrderError):
            g_density(1.0, 0.5, 1.0)
        with pytest.raises(DomainError):
            g_density(0.5, 1.0, 0.0)
        with pytest.raises(DomainError):
            g_density(0.5, -1.0, 1.0)

    def test_cancellation_refused(self):
        with pytest.raises(DensityCancellationError):
            g_density(0.9, 60.0, 1.0)
        with pytest.raises(DensityCancellationError):
            g_density(0.9, 12.0, 1.0)

    def test_non_negative(self):
        x = np.linspace(0, support_bound(0.7, 1.0), 50)
        assert np.all(g_density(0.7, x, 1.0) >= 0)

    @pytest.mark.parametrize("beta", [0.3, 0.5, 0.7])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_normalization(self, beta, t):
        X = support_bound(beta, t)
        assert tail_bound(beta, t, X) <= 1e-7
        val, _ = integrate.quad(lambda x: g_density(beta, x, t), 0, X, limit=200)
        assert abs(val - 1) <= 1e-5

    @pytest.mark.parametrize("beta", [0.4, 0.6])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
    def test_laplace_identity(self, beta, t, s):
        X = support_bound(beta, t)
        val, _ = integrate.quad(lambda x: math.exp(-s * x) * g_density(beta, x, t), 0, X, limit=200)
        assert abs(val - mittag_leffler(-s * t ** beta, beta)) <= 1e-5

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_moments_by_quadrature(self, k):
        X = support_bound(0.5, 1.0)
        val, _ = integrate.quad(lambda x: x ** k * g_density(0.5, x, 1.0), 0, X, limit=200)
        assert val == pytest.approx(inverse_time_moment(0.5, 1.0, k), rel=1e-5)


class TestTransformSeries:
    def test_t(self):
        for b in (0.3, 0.5, 1.0):
            assert transform_series([0.0, 1.0], b, 1.0) == pytest.approx(1 / math.gamma(b + 1), rel=1e-14)

    def test_t_squared(self):
        assert transform_series([0.0, 0.0, 2.0], 0.5, 1.0) == pytest.approx(2.0, rel=1e-14)

    def test_identity_at_one(self):
        c = [1.0] * 30
        assert transform_series(c, 1.0, 0.7) == pytest.approx(math.fsum(0.7 ** n / math.factorial(n) for n in range(30)))

    @given(st.floats(0.3, 1.0), st.floats(0.0, 1.5))
    def test_cos_row(self, b, t):
        n = 120
        c = [(1, 0, -1, 0)[k % 4] for k in range(n)]
        assert transform_series(c, b, t) == pytest.approx(mittag_leffler(-t ** (2 * b), 2 * b), rel=1e-9, abs=1e-12)

    def test_zero_time(self):
        assert transform_series([3.0, 1.0, 1.0], 0.5, 0.0) == 3.0

    def test_negative_time(self):
        with pytest.raises(DomainError):
            transform_series([1.0], 0.5, -1.0)
