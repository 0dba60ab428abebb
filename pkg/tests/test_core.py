import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from warpbench.core import (
    LabeledDataset,
    MeasureKind,
    MeasureSpec,
    TimeSeries,
    z_normalize,
)

finite_values = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


class TestTimeSeries:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            TimeSeries([])

    @pytest.mark.parametrize("bad", [float("nan"), float("inf"), -float("inf")])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ValueError):
            TimeSeries([1.0, bad, 2.0])

    def test_values_are_read_only(self):
        series = TimeSeries([1.0, 2.0])
        with pytest.raises(ValueError):
            series.values[0] = 5.0

    def test_source_mutation_does_not_leak(self):
        source = np.array([1.0, 2.0, 3.0])
        series = TimeSeries(source)
        source[0] = 99.0
        assert series.values[0] == 1.0

    def test_equality(self):
        assert TimeSeries([1, 2]) == TimeSeries([1.0, 2.0])
        assert TimeSeries([1, 2]) != TimeSeries([1, 3])


class TestLabeledDataset:
    def test_requires_equal_lengths(self):
        with pytest.raises(ValueError, match="length"):
            LabeledDataset.from_instances(
                "bad", "train", [([1.0, 2.0], "a"), ([1.0, 2.0, 3.0], "b")]
            )

    def test_requires_known_role(self):
        with pytest.raises(ValueError, match="role"):
            LabeledDataset.from_instances("bad", "validation", [([1.0], "a")])

    def test_values_matrix_matches_instances(self):
        data = LabeledDataset.from_instances(
            "toy", "train", [([1.0, 2.0], "a"), ([3.0, 4.0], "b")]
        )
        assert data.values.shape == (2, 2)
        assert data.values[1, 0] == 3.0
        assert data.labels == ("a", "b")
        assert data.class_alphabet == ("a", "b")

    def test_with_labels_replaces_only_labels(self):
        data = LabeledDataset.from_instances(
            "toy", "train", [([1.0, 2.0], "a"), ([3.0, 4.0], "b")]
        )
        relabeled = data.with_labels(["x", "y"])
        assert relabeled.labels == ("x", "y")
        assert relabeled.series == data.series


class TestMeasureSpec:
    def test_window_required_for_dtw(self):
        with pytest.raises(ValueError):
            MeasureSpec(MeasureKind.DTW)

    def test_window_range(self):
        with pytest.raises(ValueError):
            MeasureSpec.dtw(window=1.5)

    def test_penalty_nonnegative(self):
        with pytest.raises(ValueError):
            MeasureSpec.wdtw(penalty=-0.1)

    def test_threshold_nonnegative(self):
        with pytest.raises(ValueError):
            MeasureSpec.lcss(threshold=-1.0)

    def test_identifier_round_trips_kind(self):
        spec = MeasureSpec.ddtw(window=0.25)
        assert spec.identifier() == "ddtw(window=0.25)"
        assert MeasureKind.from_name("ddtw") is MeasureKind.DDTW

    def test_unknown_kind_name(self):
        with pytest.raises(ValueError):
            MeasureKind.from_name("manhattan")


class TestZNormalize:
    def test_constant_series_becomes_zeros(self):
        assert np.array_equal(z_normalize([1.0, 1.0, 1.0]).values, [0.0, 0.0, 0.0])

    def test_symmetric_two_point_case(self):
        assert np.array_equal(z_normalize([0.0, 2.0]).values, [-1.0, 1.0])

    def test_four_point_case_against_direct_arithmetic(self):
        values = [1.0, 2.0, 3.0, 4.0]
        mean = sum(values) / 4
        std = math.sqrt(sum((v - mean) ** 2 for v in values) / 4)
        expected = [(v - mean) / std for v in values]
        out = z_normalize(values).values
        np.testing.assert_allclose(out, expected, rtol=1e-12)
        assert abs(out.mean()) < 1e-12
        assert abs(out.std() - 1.0) < 1e-12
        assert list(np.argsort(out)) == [0, 1, 2, 3]

    def test_too_short(self):
        with pytest.raises(ValueError, match="too short"):
            z_normalize([1.0])

    # Integer-valued inputs keep the mean/std subtractions exact, so the
    # 1e-9 idempotency bound is meaningful rather than cancellation noise.
    @given(st.lists(st.integers(min_value=-10**6, max_value=10**6), min_size=2, max_size=30))
    def test_idempotent_and_rank_preserving(self, values):
        values = [float(v) for v in values]
        normalized = z_normalize(values)
        twice = z_normalize(normalized)
        np.testing.assert_allclose(twice.values, normalized.values, atol=1e-9)
        if np.std(values) > 0:
            original_order = np.argsort(np.asarray(values), kind="stable")
            new_order = np.argsort(normalized.values, kind="stable")
            assert list(original_order) == list(new_order)
