"""Tests for AR modelling of core series."""

import numpy as np
import pytest

from topa.schemas import ARParams, ARSpec
from topa.services.regression import (
    SeriesTooShortError,
    ar_filter,
    difference,
    fit_ar,
    forecast,
    regression_loss,
    yule_walker_stats,
)


def _ar_series(rng, alpha, n, shape=(3, 2), complex_field=False):
    """Series following G_t = sum alpha_i G_{t-i} + innovation."""
    p = len(alpha)
    out = []
    for k in range(n):
        g = rng.standard_normal(shape)
        if complex_field:
            g = g + 1j * rng.standard_normal(shape)
        for i in range(1, min(p, k) + 1):
            g = g + alpha[i - 1] * out[k - i]
        out.append(g)
    return out


class TestDifference:
    """Tests for difference."""

    def test_first_difference(self):
        """d=1 gives successive differences."""
        series = [np.array([1.0]), np.array([4.0]), np.array([9.0])]
        assert np.array_equal(difference(series, 1)[:, 0], [3.0, 5.0])

    def test_zero_order_is_stack(self):
        """d=0 stacks the series unchanged."""
        series = [np.ones(2), 2 * np.ones(2)]
        assert difference(series, 0).shape == (2, 2)

    def test_too_short(self):
        """A series no longer than d cannot be differenced."""
        with pytest.raises(SeriesTooShortError):
            difference([np.ones(2)], 1)


class TestYuleWalkerStats:
    """Tests for yule_walker_stats."""

    def test_matches_direct_sums(self, rng):
        """Entries equal the lagged inner-product sums."""
        series = [rng.standard_normal((2, 2)) for _ in range(6)]
        p = 2
        rm, rv = yule_walker_stats(series, p)
        for i in range(1, p + 1):
            expected = sum(np.vdot(series[t], series[t - i]) for t in range(p, 6))
            assert rv[i - 1] == pytest.approx(expected)
            for j in range(1, p + 1):
                expected = sum(np.vdot(series[t - j], series[t - i]) for t in range(p, 6))
                assert rm[i - 1, j - 1] == pytest.approx(expected)

    def test_constant_series(self):
        """G_t = C with p=1, T=3 sums <C, C> over two steps."""
        c = np.array([[1.0, -2.0], [0.5, 3.0]])
        rm, rv = yule_walker_stats([c, c, c], 1)
        cc = np.vdot(c, c).real
        assert rm.shape == (1, 1)
        assert rm[0, 0] == pytest.approx(2 * cc)
        assert rv[0] == pytest.approx(2 * cc)

    def test_zero_series(self):
        """An all-zero series has zero statistics."""
        rm, rv = yule_walker_stats([np.zeros((2, 3))] * 5, 2)
        assert np.array_equal(rm, np.zeros((2, 2)))
        assert np.array_equal(rv, np.zeros(2))


class TestFitAR:
    """Tests for fit_ar."""

    def test_recovers_planted_coefficients_noiselessly(self, rng):
        """lam=0 on an innovation-free AR(2) series recovers alpha to 1e-6."""
        alpha = [0.5, -0.3]
        series = [rng.standard_normal((3, 3)) for _ in range(2)]
        for _ in range(20):
            series.append(alpha[0] * series[-1] + alpha[1] * series[-2])
        params = fit_ar(series, ARSpec(p=2, d=0), 0.0, ARParams.zeros(2))
        assert np.allclose(params.alpha, alpha, atol=1e-6)

    def test_recovers_with_differencing(self, rng):
        """Integrated AR(1) cores give back alpha on the differenced series."""
        diffs = [rng.standard_normal((2, 2))]
        for _ in range(15):
            diffs.append(0.7 * diffs[-1])
        series = list(np.cumsum(np.stack(diffs), axis=0))
        params = fit_ar(series, ARSpec(p=1, d=1), 0.0, ARParams.zeros(1))
        assert params.alpha[0] == pytest.approx(0.7, abs=1e-8)

    def test_complex_coefficients(self, rng):
        """Complex AR coefficients are recovered on complex series."""
        alpha = [0.6 + 0.3j]
        series = [rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))]
        for _ in range(10):
            series.append(alpha[0] * series[-1])
        params = fit_ar(series, ARSpec(p=1, d=0), 0.0, ARParams.zeros(1, complex_field=True))
        assert params.alpha[0] == pytest.approx(alpha[0], abs=1e-8)

    def test_noisy_estimate_close(self, rng):
        """A long noisy AR(1) series estimates alpha within 0.05."""
        series = _ar_series(rng, [0.8], 2000, shape=(2,))
        params = fit_ar(series, ARSpec(p=1, d=0), 0.0, ARParams.zeros(1))
        assert params.alpha[0] == pytest.approx(0.8, abs=0.05)

    def test_proximal_term_pulls_toward_previous(self, rng):
        """A huge lam keeps alpha at its previous value."""
        series = _ar_series(rng, [0.5], 30)
        prev = ARParams(alpha=[0.1])
        params = fit_ar(series, ARSpec(p=1, d=0), 1e12, prev)
        assert params.alpha[0] == pytest.approx(0.1, abs=1e-6)

    def test_real_series_gives_real_alpha(self, rng):
        """Coefficients stay real on real data."""
        params = fit_ar(_ar_series(rng, [0.3], 20), ARSpec(p=1, d=0), 1.0, ARParams.zeros(1))
        assert params.alpha.dtype == np.float64

    def test_constant_series_differenced_away(self):
        """Constant series with d=1, lam=1: zero differences leave alpha at its previous value."""
        series = [np.full((2, 2), 3.0)] * 6
        params = fit_ar(series, ARSpec(p=1, d=1), 1.0, ARParams(alpha=[0.4]))
        assert params.alpha[0] == pytest.approx(0.4)

    def test_too_short(self):
        """Differenced length must exceed p."""
        with pytest.raises(SeriesTooShortError):
            fit_ar([np.ones(2)] * 3, ARSpec(p=2, d=1), 1.0, ARParams.zeros(2))


class TestForecast:
    """Tests for forecast and the residual filter."""

    def test_ar1_no_differencing(self):
        """alpha=[1], d=0 repeats the last core."""
        series = [np.array([1.0, 2.0]), np.array([3.0, 5.0])]
        out = forecast(ARParams(alpha=[1.0]), ARSpec(p=1, d=0), series)
        assert np.array_equal(out, [3.0, 5.0])

    def test_with_differencing(self):
        """d=1: G_T + alpha (G_T - G_{T-1})."""
        series = [np.array([1.0]), np.array([2.0]), np.array([4.0])]
        out = forecast(ARParams(alpha=[0.5]), ARSpec(p=1, d=1), series)
        assert out[0] == pytest.approx(4.0 + 0.5 * 2.0)

    def test_second_order_differencing(self):
        """A quadratic sequence with alpha=[1], d=2 continues the next curvature step."""
        series = [np.array([float(k * k)]) for k in range(5)]
        out = forecast(ARParams(alpha=[1.0]), ARSpec(p=1, d=2), series)
        assert out[0] == pytest.approx(25.0)

    def test_filter_consistent_with_forecast(self, rng):
        """Residual filter applied to the forecast extension is zero."""
        params = ARParams(alpha=[0.4, -0.2])
        spec = ARSpec(p=2, d=1)
        series = [rng.standard_normal(3) for _ in range(5)]
        nxt = forecast(params, spec, series)
        taps = ar_filter(params, spec)
        extended = [*series, nxt]
        residual = sum(taps[j] * extended[-1 - j] for j in range(len(taps)))
        assert np.allclose(residual, 0.0, atol=1e-12)

    @pytest.mark.parametrize("spec", [ARSpec(p=2, d=0), ARSpec(p=1, d=1), ARSpec(p=2, d=2)])
    def test_linear_in_series(self, rng, spec):
        """Scaling the series scales the forecast."""
        params = ARParams(alpha=[0.6, -0.25][: spec.p])
        series = [rng.standard_normal((2, 3)) for _ in range(6)]
        base = forecast(params, spec, series)
        for c in (-1.5, 0.0, 4.0):
            scaled = forecast(params, spec, [c * g for g in series])
            assert np.allclose(scaled, c * base, atol=1e-12)

    def test_needs_lag_entries(self):
        """At least p + d entries are required."""
        with pytest.raises(SeriesTooShortError):
            forecast(ARParams(alpha=[0.5, 0.1]), ARSpec(p=2, d=1), [np.ones(2)] * 2)


class TestRegressionLoss:
    """Tests for regression_loss."""

    def test_exact_series_has_zero_loss(self, rng):
        """Innovation-free series has zero loss."""
        series = [rng.standard_normal(4)]
        for _ in range(6):
            series.append(0.9 * series[-1])
        assert regression_loss(ARParams(alpha=[0.9]), ARSpec(p=1, d=0), series) == pytest.approx(0.0, abs=1e-20)

    def test_matches_hand_sum(self, rng):
        """Loss equals the summed squared residuals from t = p."""
        series = [rng.standard_normal(3) for _ in range(5)]
        alpha = 0.3
        expected = sum(np.sum((series[t] - alpha * series[t - 1]) ** 2) for t in range(1, 5))
        loss = regression_loss(ARParams(alpha=[alpha]), ARSpec(p=1, d=0), series)
        assert loss == pytest.approx(expected)
