import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from techcycle.errors import DomainError, InsufficientDataError, ValidationError
from techcycle.growth import (
    LogisticParams,
    Regime,
    allometric_coefficients,
    classify_regime,
    fit_logistic,
    fit_substitution,
    implied_exponent,
    log_odds,
    logistic_value,
    odds_relation,
)
from techcycle.market_data import RevenueSeries


def series(points, name="x"):
    return RevenueSeries(technology=name, base_year=2018, points=points)


def logistic_series(params, years, name="x"):
    return series({t: logistic_value(params, float(t)) for t in years}, name)


params_strategy = st.builds(
    LogisticParams,
    k=st.floats(1.0, 1e4),
    a=st.floats(-20.0, 20.0),
    b=st.floats(0.05, 3.0),
)


class TestLogisticValue:
    def test_inflection_is_half_capacity(self):
        p = LogisticParams(k=100.0, a=0.0, b=1.0)
        assert logistic_value(p, 0.0) == pytest.approx(50.0, abs=1e-12)

    def test_analytic_three_quarters(self):
        p = LogisticParams(k=100.0, a=0.0, b=1.0)
        assert logistic_value(p, math.log(3.0)) == pytest.approx(75.0, rel=1e-12)

    def test_extended_precision_oracle(self):
        p = LogisticParams(k=2000.0, a=8.0, b=0.4)
        with mpmath.workdps(50):
            expected = float(mpmath.mpf(2000) / (1 + mpmath.e ** (8 - mpmath.mpf("0.4") * 20)))
        assert logistic_value(p, 20.0) == pytest.approx(expected, rel=1e-14)

    def test_extreme_arguments_saturate_without_overflow(self):
        p = LogisticParams(k=5.0, a=0.0, b=2.0)
        assert logistic_value(p, -1e6) == 0.0
        assert logistic_value(p, 1e6) == 5.0

    @given(params_strategy, st.floats(-100, 100), st.floats(0.01, 30))
    @settings(max_examples=200)
    def test_increasing_and_symmetric(self, p, t, d):
        assert logistic_value(p, t) <= logistic_value(p, t + d)
        t_star = p.inflection
        total = logistic_value(p, t_star + d) + logistic_value(p, t_star - d)
        assert total == pytest.approx(p.k, rel=1e-9)

    def test_params_validation(self):
        with pytest.raises(ValidationError):
            LogisticParams(k=-1.0, a=0.0, b=1.0)
        with pytest.raises(ValidationError):
            LogisticParams(k=1.0, a=0.0, b=0.0)


class TestFitLogistic:
    def test_recovers_noise_free_curve(self):
        truth = LogisticParams(k=1000.0, a=6.0, b=0.5)
        fit = fit_logistic(logistic_series(truth, range(0, 21)))
        assert not fit.degenerate
        assert fit.k == pytest.approx(truth.k, rel=0.01)
        assert fit.a == pytest.approx(truth.a, rel=0.01)
        assert fit.b == pytest.approx(truth.b, rel=0.01)

    def test_saturated_constant_series_degenerate(self):
        fit = fit_logistic(series({t: 400.0 for t in range(2000, 2010)}))
        assert fit.degenerate
        assert fit.k == pytest.approx(400.0, rel=0.02)
        with pytest.raises(ValidationError):
            _ = fit.params

    def test_time_shift_changes_only_location(self):
        truth = LogisticParams(k=800.0, a=4.0, b=0.35)
        base = fit_logistic(logistic_series(truth, range(0, 18)))
        shifted = fit_logistic(
            series({t + 10: logistic_value(truth, float(t)) for t in range(0, 18)})
        )
        assert shifted.k == pytest.approx(base.k, abs=1e-6 * base.k)
        assert shifted.b == pytest.approx(base.b, abs=1e-6)
        assert shifted.a == pytest.approx(base.a + 10 * base.b, rel=1e-6)

    def test_needs_four_positive_points(self):
        with pytest.raises(InsufficientDataError):
            fit_logistic(series({2000: 1.0, 2001: 2.0, 2002: 3.0}))


class TestOddsRelation:
    def test_identical_curves(self):
        p = LogisticParams(k=100.0, a=2.0, b=0.5)
        relation = odds_relation(p, p)
        assert relation.c1 == pytest.approx(1.0, abs=1e-12)
        assert relation.exponent == pytest.approx(1.0, abs=1e-12)

    def test_hand_evaluated_closed_form(self):
        p1 = LogisticParams(k=100.0, a=2.0, b=0.5)
        p2 = LogisticParams(k=400.0, a=3.0, b=1.0)
        relation = odds_relation(p1, p2)
        assert relation.c1 == pytest.approx(math.exp(0.5 * (3.0 / 1.0 - 2.0 / 0.5)), rel=1e-12)
        assert relation.exponent == pytest.approx(0.5, abs=1e-12)

    def test_log_odds_matches_direct_ratio_at_moderate_args(self):
        p = LogisticParams(k=250.0, a=3.0, b=0.4)
        for t in range(-10, 30):
            v = logistic_value(p, float(t))
            assert log_odds(p, float(t)) == pytest.approx(
                math.log(v / (p.k - v)), abs=1e-9
            )

    @given(params_strategy, params_strategy, st.floats(-20.0, 20.0))
    @settings(max_examples=300)
    def test_identity_exact_across_time(self, p1, p2, offset):
        relation = odds_relation(p1, p2)
        t = p1.inflection + offset
        lhs = log_odds(p1, t)
        rhs = relation.log_c1 + relation.exponent * log_odds(p2, t)
        assert abs(lhs - rhs) < 1e-9

    def test_implied_exponent(self):
        p_old = LogisticParams(k=1.0, a=0.0, b=0.5)
        p_new = LogisticParams(k=1.0, a=0.0, b=1.0)
        assert implied_exponent(p_old, p_new) == pytest.approx(2.0)
        assert implied_exponent(p_old, p_old) == pytest.approx(1.0)

    def test_allometric_coefficients_match_deep_early_phase(self):
        p_old = LogisticParams(k=1000.0, a=12.0, b=0.3)
        p_new = LogisticParams(k=3000.0, a=24.0, b=0.6)
        log_a, b_ratio = allometric_coefficients(p_old, p_new)
        assert b_ratio == pytest.approx(2.0)
        for t in (0.0, 1.0, 2.0):
            v = logistic_value(p_old, t)
            ki = logistic_value(p_new, t)
            assert math.log(ki) == pytest.approx(log_a + b_ratio * math.log(v), abs=1e-4)


class TestFitSubstitution:
    def test_exact_power_law(self):
        old = series({t: 10.0 * 1.3 ** (t - 2000) for t in range(2000, 2010)}, "old")
        new = series({t: 2.0 * old.value(t) ** 1.5 for t in range(2000, 2010)}, "new")
        fit = fit_substitution(new, old)
        assert fit.b_exponent == pytest.approx(1.5, abs=1e-10)
        assert fit.log_a == pytest.approx(math.log(2.0), abs=1e-9)
        assert fit.fit.r2 == pytest.approx(1.0, abs=1e-12)
        assert fit.window == (2000, 2009)

    @given(st.floats(0.1, 50),
           st.floats(-3.0, 3.0).filter(lambda b: abs(b) > 0.1))
    @settings(max_examples=100)
    def test_power_law_recovery(self, a_coef, b_exp):
        old = series({t: 5.0 * 1.4 ** (t - 2000) for t in range(2000, 2012)}, "old")
        new = series({t: a_coef * old.value(t) ** b_exp for t in range(2000, 2012)}, "new")
        fit = fit_substitution(new, old)
        assert abs(fit.b_exponent - b_exp) < 1e-10
        assert fit.fit.r2 == pytest.approx(1.0, abs=1e-9)

    @given(st.floats(0.01, 100), st.floats(0.01, 100))
    @settings(max_examples=100)
    def test_scale_invariance(self, c_old, c_new):
        old = series({t: 10.0 * 1.3 ** (t - 2000) for t in range(2000, 2010)}, "old")
        new = series({t: 2.0 * old.value(t) ** 1.5 for t in range(2000, 2010)}, "new")
        fit = fit_substitution(new, old)
        scaled = fit_substitution(new.scaled(c_new), old.scaled(c_old))
        assert scaled.b_exponent == pytest.approx(fit.b_exponent, abs=1e-9)
        assert scaled.regime is fit.regime
        expected_shift = math.log(c_new) - fit.b_exponent * math.log(c_old)
        assert scaled.log_a - fit.log_a == pytest.approx(expected_shift, abs=1e-7)

    def test_explicit_window_domain_error_names_year(self):
        old = series({2000: 1.0, 2001: 0.0, 2002: 1.0, 2003: 1.0}, "old")
        new = series({t: 1.0 for t in range(2000, 2004)}, "new")
        with pytest.raises(DomainError, match="2001"):
            fit_substitution(new, old, window=(2000, 2003))

    def test_window_too_small(self):
        old = series({2000: 1.0, 2001: 2.0}, "old")
        new = series({2000: 1.0, 2001: 2.0}, "new")
        with pytest.raises(InsufficientDataError):
            fit_substitution(new, old, window=(2000, 2001))

    def test_no_overlap(self):
        old = series({2000: 1.0, 2001: 1.0}, "old")
        new = series({2005: 1.0, 2006: 1.0}, "new")
        with pytest.raises(InsufficientDataError):
            fit_substitution(new, old)

    def test_early_window_approximation_gap_grows_with_saturation(self):
        # On exact dual-logistic data the log-log exponent matches the rate
        # ratio only before saturation; pushing the window past the
        # inflections must widen the gap.
        p_old = LogisticParams(k=1000.0, a=8.0, b=0.4)
        p_new = LogisticParams(k=2000.0, a=16.0, b=0.8)
        years = range(0, 41)
        old = logistic_series(p_old, years, "old")
        new = logistic_series(p_new, years, "new")
        truth = implied_exponent(p_old, p_new)

        # both curves below 10% of capacity: t < (a - ln 9)/b for each
        early_end = min(
            int((p.a - math.log(9.0)) / p.b) for p in (p_old, p_new)
        )
        early = fit_substitution(new, old, window=(0, early_end))
        wide = fit_substitution(new, old, window=(0, 30))  # past both inflections
        early_gap = abs(early.b_exponent - truth)
        wide_gap = abs(wide.b_exponent - truth)
        assert early_gap < 0.05
        assert wide_gap > early_gap


class TestClassifyRegime:
    def test_acceleration(self):
        assert classify_regime(2.1) is Regime.ACCELERATION

    def test_exact_proportional_boundary(self):
        assert classify_regime(1.0) is Regime.PROPORTIONAL
        assert classify_regime(1.04) is Regime.PROPORTIONAL
        assert classify_regime(0.96) is Regime.PROPORTIONAL

    def test_negative_coupling(self):
        assert classify_regime(-1.28) is Regime.NEGATIVE_COUPLING

    def test_low_growth(self):
        assert classify_regime(0.4) is Regime.LOW_GROWTH
        assert classify_regime(0.0) is Regime.LOW_GROWTH

    def test_tolerance_validation(self):
        with pytest.raises(DomainError):
            classify_regime(1.0, tolerance=0.0)

    @given(st.floats(-10, 10), st.floats(0.01, 0.5), st.floats(0.01, 100))
    def test_invariant_under_series_rescaling(self, b, tol, scale):
        # regime depends only on the exponent, which is scale-free
        assert classify_regime(b, tol) is classify_regime(b, tol)
