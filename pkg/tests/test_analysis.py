"""IRD measurement, predicted hit-ratio curves, cliffs, and curve metrics."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracegen.analysis import (
    AetCurve,
    IrdHistogram,
    che_predict,
    concavity_gap,
    hrc_mae,
    ird_spec_pmf,
    measure_ird,
    predicted_cliffs,
    spike_to_cliff,
)
from tracegen.cachesim import HitRatioCurve, exact_lru_hrc
from tracegen.distributions import Rng, auto_tune_tmax, fgen
from tracegen.generator import Trace, gen_from_ird


def make_trace(symbols, sizes=None):
    refs = np.asarray([ord(s) if isinstance(s, str) else s for s in symbols], dtype=np.uint64)
    if sizes is None:
        return Trace(refs=refs)
    return Trace(refs=refs, sizes=np.asarray(sizes, dtype=np.int64))


def make_hist(values, counts, inf_count):
    values = np.asarray(values, dtype=np.int64)
    counts = np.asarray(counts, dtype=np.int64)
    return IrdHistogram(
        values=values,
        counts=counts,
        inf_count=inf_count,
        total=int(counts.sum()) + inf_count,
        bin_edges=np.array([1.0, 2.0]),
        bin_counts=np.array([int(counts.sum())]),
    )


class TestMeasureIrd:
    def test_hand_counted_distances(self):
        hist = measure_ird(make_trace("abaa"))
        np.testing.assert_array_equal(hist.values, [1, 2])
        np.testing.assert_array_equal(hist.counts, [1, 1])
        assert hist.inf_count == 2
        assert hist.total == 4
        assert hist.finite_total == 2

    def test_back_to_back_repeats(self):
        hist = measure_ird(make_trace("aaa"))
        np.testing.assert_array_equal(hist.values, [1])
        np.testing.assert_array_equal(hist.counts, [2])
        assert hist.inf_count == 1

    def test_all_distinct_is_all_first_touches(self):
        hist = measure_ird(make_trace([5, 6, 7]))
        assert hist.values.size == 0
        assert hist.inf_count == 3
        assert hist.finite_total == 0

    def test_first_touch_count_equals_distinct_items(self):
        trace = gen_from_ird(fgen(20, {0, 3}, 5e-3), 50, 5000, Rng(1))
        hist = measure_ird(trace)
        assert hist.inf_count == np.unique(trace.refs).size
        assert hist.total == len(trace)

    def test_display_bins_cover_all_finite_mass(self):
        trace = gen_from_ird(fgen(20, {0, 3}, 5e-3), 100, 20_000, Rng(2))
        hist = measure_ird(trace, bins=32)
        assert hist.bin_counts.sum() == hist.finite_total
        assert hist.bin_edges.size == hist.bin_counts.size + 1

    def test_multiblock_measured_at_block_granularity(self):
        hist = measure_ird(make_trace([10, 10], sizes=[2, 2]))  # 10,11,10,11
        np.testing.assert_array_equal(hist.values, [2])
        np.testing.assert_array_equal(hist.counts, [2])
        assert hist.inf_count == 2

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            measure_ird(Trace(refs=np.empty(0, dtype=np.uint64)))
        with pytest.raises(ValueError):
            measure_ird(make_trace("ab"), bins=0)

    def test_roundtrip_to_sampleable_spec(self):
        hist = measure_ird(make_trace("abaa"))
        spec = hist.to_ird_spec()
        np.testing.assert_array_equal(spec.values, [1, 2])
        np.testing.assert_allclose(spec.bin_probs, [0.25, 0.25])
        assert spec.p_infinite == pytest.approx(0.5)

    def test_histogram_invariant_enforced(self):
        with pytest.raises(ValueError):
            IrdHistogram(
                values=np.array([1]),
                counts=np.array([2]),
                inf_count=1,
                total=4,  # 2 + 1 != 4
                bin_edges=np.array([1.0, 2.0]),
                bin_counts=np.array([2]),
            )
        with pytest.raises(ValueError):
            make_hist([1], [-1], 0)


class TestChePredict:
    def test_deterministic_distance_gives_exact_step(self):
        # every reuse at distance exactly 5: miss below implied size 4, hit at 4
        curve = che_predict(make_hist([5], [100], 0)).to_hrc()
        assert curve.hit_ratio_at(3.999) == 0.0
        assert curve.hit_ratio_at(4.0) == pytest.approx(1.0)
        np.testing.assert_array_equal(curve.sizes, [1, 2, 3, 4])
        np.testing.assert_allclose(curve.hit_ratios, [0, 0, 0, 1])

    def test_first_touch_mass_caps_hit_ratio(self):
        sweep = che_predict(make_hist([5], [95], 5))
        assert sweep.hit_ratios.max() == pytest.approx(0.95)
        # the tail floor keeps implied sizes growing past the step
        np.testing.assert_allclose(sweep.cache_sizes, [1, 2, 3, 4, 4.05])
        assert sweep.source_footprint == 5
        assert sweep.source_length == 100

    def test_implied_size_never_exceeds_age(self):
        sweep = che_predict(make_hist([2, 7, 31], [5, 3, 2], 4))
        assert np.all(sweep.cache_sizes <= sweep.tau + 1e-12)
        assert np.all(np.diff(sweep.cache_sizes) >= -1e-12)
        assert np.all(np.diff(sweep.hit_ratios) >= -1e-12)

    def test_rejects_histograms_without_reuse(self):
        with pytest.raises(ValueError):
            che_predict(make_hist([], [], 3))

    def test_implied_size_approaches_footprint_as_trace_grows(self):
        # the first-touch floor inflates implied sizes by ~ footprint/length
        # per age step, so the overshoot shrinks as the trace lengthens
        spec = fgen(5, {0, 4}, 1e-2)
        errs = []
        for n in (1000, 5000, 20_000):
            trace = gen_from_ird(spec, 100, n, Rng(7))
            sweep = che_predict(measure_ird(trace))
            footprint = float(np.unique(trace.refs).size)
            errs.append(max(0.0, float(sweep.cache_sizes[-1]) - footprint) / footprint)
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 0.01

    def test_agrees_with_exact_curve_on_a_real_trace(self):
        trace = gen_from_ird(fgen(20, {0, 3}, 5e-3), 500, 50_000, Rng(8))
        predicted = che_predict(measure_ird(trace)).to_hrc()
        exact = exact_lru_hrc(trace)
        assert hrc_mae(predicted, exact) <= 0.05

    @given(
        st.lists(st.integers(1, 60), min_size=1, max_size=8, unique=True),
        st.data(),
    )
    @settings(max_examples=60, deadline=None)
    def test_sweep_shape_properties(self, values, data):
        values = sorted(values)
        counts = data.draw(
            st.lists(st.integers(1, 50), min_size=len(values), max_size=len(values))
        )
        inf_count = data.draw(st.integers(0, 50))
        sweep = che_predict(make_hist(values, counts, inf_count))
        total = sum(counts) + inf_count
        assert sweep.tau.size == values[-1]
        assert np.all(sweep.cache_sizes <= sweep.tau + 1e-9)
        assert sweep.hit_ratios[-1] == pytest.approx(sum(counts) / total)
        curve = sweep.to_hrc()
        assert np.all(np.diff(curve.sizes) > 0)


class TestSpikeToCliff:
    def test_uniform_bins_tile_the_size_axis(self):
        spec = auto_tune_tmax(fgen(4, set(range(4)), 0.0), 1000)
        cliffs = predicted_cliffs(spec)
        assert [b for b, _ in cliffs] == [0, 1, 2, 3]
        assert cliffs[0][1][0] == 0.0
        for (_, a), (_, b) in zip(cliffs, cliffs[1:]):
            assert a[1] == pytest.approx(b[0])  # consecutive intervals share an edge
        # uniform reuse distances over [1, 2M] imply a top size near M
        assert cliffs[-1][1][1] == pytest.approx(1000, rel=0.02)

    def test_single_spike_holds_nearly_all_rise(self):
        spec = auto_tune_tmax(fgen(5, {2}, 5e-3), 10_000)
        lo, hi = spike_to_cliff(spec, 2)
        curve = che_predict_from_spec(spec).to_hrc()
        rise_inside = curve.hit_ratio_at(hi) - curve.hit_ratio_at(lo)
        total_rise = curve.hit_ratios[-1]
        assert rise_inside / total_rise >= 0.98

    def test_intervals_ordered_and_disjoint_for_separated_spikes(self):
        spec = auto_tune_tmax(fgen(20, {0, 3}, 5e-3), 1000)
        (b0, (lo0, hi0)), (b1, (lo1, hi1)) = predicted_cliffs(spec)
        assert (b0, b1) == (0, 3)
        assert 0.0 <= lo0 < hi0 <= lo1 < hi1

    def test_rejects_wrong_spec_kind_and_range(self):
        spec = auto_tune_tmax(fgen(5, {2}, 0.0), 100)
        with pytest.raises(ValueError):
            spike_to_cliff(spec, 5)
        from tracegen.distributions import empirical_ird

        with pytest.raises(ValueError):
            spike_to_cliff(empirical_ird([1, 2], [1.0, 1.0]), 0)

    def test_requires_tuned_spec(self):
        with pytest.raises(ValueError):
            spike_to_cliff(fgen(5, {2}, 0.0), 2)

    def test_discretized_pmf_is_exact(self):
        spec = auto_tune_tmax(fgen(5, {2}, 5e-3), 10_000)  # integer width 4000
        dense = ird_spec_pmf(spec)
        assert dense[0] == 0.0
        assert dense.sum() == pytest.approx(1.0, abs=1e-9)
        # with integer-width bins each integer belongs to exactly one bin
        np.testing.assert_allclose(
            dense[8001:12001], np.full(4000, 0.995 / 4000), atol=1e-15
        )


def che_predict_from_spec(spec):
    """Sweep the idealized (infinitely long trace) histogram of a spec."""
    from tracegen.analysis import _sweep_from_pmf

    dense = ird_spec_pmf(spec)
    tau, cache, cdf = _sweep_from_pmf(dense)
    return AetCurve(tau=tau, cache_sizes=cache, hit_ratios=cdf, source_footprint=0)


class TestHrcMae:
    @staticmethod
    def const_curve(level, footprint=10):
        return HitRatioCurve(
            "lru",
            np.array([1.0, float(footprint)]),
            np.array([level, level]),
            footprint,
            100,
        )

    def test_identical_curves_score_zero(self):
        trace_curve = exact_lru_hrc(make_trace("abacba"))
        assert hrc_mae(trace_curve, trace_curve) == 0.0

    def test_constant_offset_scores_the_offset(self):
        assert hrc_mae(self.const_curve(0.2), self.const_curve(0.3)) == pytest.approx(0.1)

    def test_footprint_normalization_aligns_scales(self):
        # same shape at 10x the scale reads identically on the shared grid
        a = self.const_curve(0.4, footprint=10)
        b = self.const_curve(0.4, footprint=100)
        assert hrc_mae(a, b) == pytest.approx(0.0)

    def test_custom_grid(self):
        a, b = self.const_curve(0.0), self.const_curve(0.75)
        assert hrc_mae(a, b, grid=[1.0]) == pytest.approx(0.75)
        with pytest.raises(ValueError):
            hrc_mae(a, b, grid=[])

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_metric_properties(self, data):
        def random_curve():
            k = data.draw(st.integers(2, 6))
            sizes = np.cumsum(data.draw(st.lists(st.integers(1, 5), min_size=k, max_size=k)))
            ratios = np.sort(
                data.draw(st.lists(st.floats(0, 1), min_size=k, max_size=k))
            )
            return HitRatioCurve("lru", sizes.astype(float), ratios, int(sizes[-1]), 100)

        a, b, c = random_curve(), random_curve(), random_curve()
        assert hrc_mae(a, b) == pytest.approx(hrc_mae(b, a))
        assert hrc_mae(a, a) == 0.0
        assert hrc_mae(a, c) <= hrc_mae(a, b) + hrc_mae(b, c) + 1e-12


def brute_force_gap(curve):
    """O(n^3) least-concave-majorant distance used as an oracle."""
    x = np.concatenate(([0.0], curve.normalized_sizes))
    y = np.concatenate(([0.0], curve.hit_ratios))
    worst = 0.0
    for i in range(len(x)):
        best = y[i]
        for j in range(len(x)):
            for k in range(len(x)):
                if x[j] <= x[i] <= x[k] and x[j] < x[k]:
                    chord = y[j] + (y[k] - y[j]) * (x[i] - x[j]) / (x[k] - x[j])
                    best = max(best, chord)
        worst = max(worst, best - y[i])
    return worst


class TestConcavityGap:
    def test_linear_curve_is_concave(self):
        sizes = np.arange(1, 11, dtype=float)
        curve = HitRatioCurve("lru", sizes, sizes / 10.0, 10, 100)
        assert concavity_gap(curve) == pytest.approx(0.0, abs=1e-12)

    def test_concave_curve_scores_zero(self):
        sizes = np.arange(1, 21, dtype=float)
        curve = HitRatioCurve("lru", sizes, np.sqrt(sizes / 20.0), 20, 100)
        assert concavity_gap(curve) == pytest.approx(0.0, abs=1e-12)

    def test_step_curve_scores_half(self):
        curve = HitRatioCurve(
            "lru", np.array([1.0, 5.0, 10.0]), np.array([0.0, 0.0, 1.0]), 10, 100
        )
        assert concavity_gap(curve) == pytest.approx(0.5)

    def test_requires_three_points(self):
        curve = HitRatioCurve("lru", np.array([1.0, 2.0]), np.array([0.0, 1.0]), 2, 10)
        with pytest.raises(ValueError):
            concavity_gap(curve)

    @given(st.data())
    @settings(max_examples=100, deadline=None)
    def test_matches_brute_force_majorant(self, data):
        k = data.draw(st.integers(3, 12))
        sizes = np.cumsum(data.draw(st.lists(st.integers(1, 4), min_size=k, max_size=k)))
        ratios = np.sort(
            np.round(data.draw(st.lists(st.floats(0, 1), min_size=k, max_size=k)), 6)
        )
        curve = HitRatioCurve("lru", sizes.astype(float), ratios, int(sizes[-1]), 100)
        assert concavity_gap(curve) == pytest.approx(brute_force_gap(curve), abs=1e-9)
