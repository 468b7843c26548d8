import math

import pytest
from hypothesis import given, strategies as st

from mapbias import (
    ExplicitRun,
    MapDerivedRun,
    PowerTowerRun,
    ap_predict,
    compare_predictors,
    find_transition_index,
    laplace_predict,
    transition_lower_bound,
)

from oracles import transition_index_direct


class TestLaplacePredict:
    def test_all_same_short_run(self):
        assert laplace_predict(3, 3) == pytest.approx(0.8)

    def test_uninformed_prior(self):
        assert laplace_predict(0, 0) == 0.5

    def test_long_run(self):
        value = laplace_predict(50000, 50000)
        assert value == pytest.approx(50001 / 50002)
        assert value > 0.99998

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            laplace_predict(-1, 3)
        with pytest.raises(ValueError):
            laplace_predict(4, 3)

    @given(st.integers(min_value=0, max_value=10**6))
    def test_complementarity(self, n):
        k = n // 3
        assert laplace_predict(k, n) + laplace_predict(n - k, n) == pytest.approx(1.0)

    @given(st.integers(min_value=1, max_value=10**6))
    def test_monotone_in_run_length(self, n):
        # strict in exact arithmetic; float64 resolves it below ~1e15
        assert laplace_predict(n, n) < laplace_predict(n + 1, n + 1)


class TestApPredict:
    def test_zero_bits(self):
        assert ap_predict(0.0) == 0.0

    def test_log2_n_bits_reduces_to_laplace_like_estimate(self):
        n = 1000
        assert ap_predict(math.log2(n)) == pytest.approx(1.0 - 1.0 / n)

    def test_rejects_negative_bits(self):
        with pytest.raises(ValueError):
            ap_predict(-0.5)

    @given(st.floats(min_value=0.0, max_value=45.0, allow_nan=False))
    def test_strictly_increasing(self, k):
        # strict in exact arithmetic; saturates in float64 beyond ~52 bits
        assert ap_predict(k + 0.25) > ap_predict(k)

    def test_more_data_less_confidence(self):
        # a typical run of 1000 versus a longer run of 5**5 = 3125 whose
        # length is compressible: the longer run gets the weaker forecast
        typical = ap_predict(math.log2(1000))
        longer_but_simple = ap_predict(math.log2(5))
        assert longer_but_simple < typical


class TestTransitionIndex:
    def test_one_step_crossing(self):
        assert find_transition_index(2.5, math.log10(0.4)) == 1

    def test_closed_form_lower_bound_anchor(self):
        assert transition_lower_bound(2.5, -19728) == 49575

    def test_astronomical_start(self):
        nstar = find_transition_index(2.5, -19728)
        assert nstar == 49576
        assert nstar >= transition_lower_bound(2.5, -19728)
        assert 49000 <= nstar <= 51000  # "of the order of 50,000"

    @pytest.mark.parametrize("exponent", [-3.0, -6.0])
    def test_log_domain_matches_direct_iteration(self, exponent):
        mine = find_transition_index(2.5, exponent)
        direct = transition_index_direct(2.5, 10.0**exponent)
        assert mine == direct

    @pytest.mark.parametrize("mu", [1.3, 2.2, 3.7])
    def test_matches_direct_iteration_across_mu(self, mu):
        if mu / 4.0 < 0.5 and 1.0 - 1.0 / mu < 0.5:
            return
        mine = find_transition_index(mu, -6.0)
        assert mine == transition_index_direct(mu, 1e-6)

    def test_deep_log_domain_consistent_with_bound(self):
        for exponent in (-50, -500, -5000):
            nstar = find_transition_index(2.5, exponent)
            lower = transition_lower_bound(2.5, exponent)
            assert lower <= nstar <= lower + 10

    def test_unreachable_threshold_raises(self):
        # mu = 1.5 keeps the state below mu/4 = 0.375 < 0.5 forever
        with pytest.raises(ValueError, match="unreachable"):
            find_transition_index(1.5, -3.0)

    def test_rejects_bad_domain(self):
        with pytest.raises(ValueError):
            find_transition_index(0.9, -3.0)
        with pytest.raises(ValueError):
            find_transition_index(2.5, 0.0)  # x0 already above threshold


class TestComparePredictors:
    def test_power_tower_example(self):
        report = compare_predictors(PowerTowerRun(5))
        assert report.run_length == 3125
        assert report.laplace_trend_break == pytest.approx(1 / 3127)
        assert report.ap_trend_break == pytest.approx(0.2)
        assert report.ap_trend_break >= 100 * report.laplace_trend_break
        assert report.k_bits_used == pytest.approx(math.log2(5))
        assert "O(1)" in report.notes

    def test_explicit_run_roughly_agrees_with_laplace(self):
        report = compare_predictors(ExplicitRun(1000))
        assert report.laplace_trend_break == pytest.approx(1 / 1002)
        assert report.ap_trend_break == pytest.approx(1 / 1000)
        ratio = report.ap_trend_break / report.laplace_trend_break
        assert 0.5 < ratio < 2.0

    def test_map_derived_break_beats_one_over_run_length(self):
        report = compare_predictors(MapDerivedRun(mu=2.5, x0_log10=-19728))
        assert report.transition_lower_bound == 49575
        assert report.run_length >= 49575
        assert report.ap_trend_break > 1.0 / report.run_length
        assert report.laplace_trend_break == pytest.approx(
            1.0 / (report.run_length + 2)
        )

    def test_complement_probabilities(self):
        report = compare_predictors(ExplicitRun(64))
        assert report.laplace_next_same + report.laplace_trend_break == pytest.approx(1.0)
        assert report.ap_next_same + report.ap_trend_break == pytest.approx(1.0)

    def test_report_serialization(self):
        payload = compare_predictors(PowerTowerRun(5)).to_dict()
        for key in (
            "run_length",
            "laplace_next_same",
            "laplace_trend_break",
            "ap_next_same",
            "ap_trend_break",
            "k_bits_used",
            "notes",
        ):
            assert key in payload
        assert "transition_lower_bound" not in payload

    def test_scenario_validation(self):
        with pytest.raises(ValueError):
            ExplicitRun(0)
        with pytest.raises(ValueError):
            PowerTowerRun(1)
        with pytest.raises(ValueError):
            MapDerivedRun(mu=0.9, x0_log10=-5)
        with pytest.raises(ValueError):
            MapDerivedRun(mu=2.5, x0_log10=0.0)
        with pytest.raises(ValueError):
            MapDerivedRun(mu=2.5, x0_log10=-5, threshold=1.5)
