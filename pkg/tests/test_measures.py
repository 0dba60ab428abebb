import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_warping_paths, brute_force_dtw, brute_force_wdtw, naive_lcs_length
from warpbench import measures
from warpbench.core import MeasureSpec, TimeSeries

rng = np.random.default_rng(20240817)

series_strategy = st.lists(
    st.integers(min_value=-20, max_value=20), min_size=1, max_size=12
).map(lambda xs: [float(x) for x in xs])


def paired_series(min_size=1, max_size=12):
    return st.integers(min_value=min_size, max_value=max_size).flatmap(
        lambda m: st.tuples(
            st.lists(st.integers(-20, 20), min_size=m, max_size=m),
            st.lists(st.integers(-20, 20), min_size=m, max_size=m),
        )
    )


class TestBand:
    @pytest.mark.parametrize(
        "window,length,expected",
        [(0.0, 50, 0), (1.0, 50, 50), (0.1, 25, 2), (0.29, 100, 29), (0.5, 7, 3)],
    )
    def test_examples(self, window, length, expected):
        assert measures.band(window, length) == expected

    def test_full_window_covers_all_displacements(self):
        for m in range(1, 40):
            assert measures.band(1.0, m) >= m - 1

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            measures.band(-0.1, 10)
        with pytest.raises(ValueError):
            measures.band(1.2, 10)


class TestSquaredEuclidean:
    def test_identity(self):
        assert measures.squared_euclidean([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_simple_arithmetic(self):
        assert measures.squared_euclidean([1.0, 2.0], [3.0, 4.0]) == 8.0

    def test_equals_zero_window_dtw_on_random_pairs(self):
        for _ in range(25):
            a = rng.normal(size=6)
            b = rng.normal(size=6)
            assert measures.squared_euclidean(a, b) == measures.dtw(a, b, 0.0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            measures.squared_euclidean([1.0], [1.0, 2.0])


class TestDtw:
    def test_self_distance_is_zero(self):
        a = rng.normal(size=9)
        for window in (0.0, 0.3, 1.0):
            assert measures.dtw(a, a, window) == 0.0

    def test_three_point_example(self):
        # Enumeration over all m=3 full-window paths confirms the minimum is 1
        # (diagonal path: 0 + 0 + (3-2)^2).
        a, b = [1.0, 2.0, 3.0], [1.0, 2.0, 2.0]
        assert brute_force_dtw(a, b, band=3) == 1.0
        assert measures.dtw(a, b, 1.0) == 1.0

    @pytest.mark.parametrize("m", range(2, 9))
    def test_matches_enumeration(self, m):
        pair_rng = np.random.default_rng(100 + m)
        for _ in range(30):
            a = pair_rng.integers(-10, 11, size=m).astype(float)
            b = pair_rng.integers(-10, 11, size=m).astype(float)
            for window in (0.0, 0.25, 0.5, 1.0):
                band = measures.band(window, m)
                assert measures.dtw(a, b, window) == brute_force_dtw(a, b, band)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            measures.dtw([1.0, 2.0], [1.0, 2.0, 3.0], 1.0)


class TestDtwPath:
    def test_identity_gives_diagonal(self):
        a = rng.normal(size=6)
        path, cost = measures.dtw_path(a, a, 0.5)
        assert cost == 0.0
        assert path.points == tuple((i, i) for i in range(1, 7))

    def test_cost_matches_dtw_and_replay(self):
        for _ in range(20):
            a = rng.normal(size=7)
            b = rng.normal(size=7)
            for window in (0.0, 0.25, 1.0):
                path, cost = measures.dtw_path(a, b, window)
                assert cost == measures.dtw(a, b, window)
                assert path.cost(a, b) == cost
                path.validate(7, measures.band(window, 7))

    def test_tie_break_prefers_diagonal(self):
        path, cost = measures.dtw_path([0.0, 0.0], [0.0, 0.0], 1.0)
        assert cost == 0.0
        assert path.points == ((1, 1), (2, 2))

    def test_single_point(self):
        path, cost = measures.dtw_path([2.0], [5.0], 1.0)
        assert path.points == ((1, 1),)
        assert cost == 9.0

    def test_validate_rejects_bad_paths(self):
        with pytest.raises(ValueError, match="start"):
            measures.WarpingPath(((1, 2), (2, 2))).validate(2)
        with pytest.raises(ValueError, match="illegal step"):
            measures.WarpingPath(((1, 1), (3, 3))).validate(3)
        with pytest.raises(ValueError, match="stationary"):
            measures.WarpingPath(((1, 1), (1, 1), (2, 2))).validate(2)
        with pytest.raises(ValueError, match="displacement"):
            measures.WarpingPath(((1, 1), (2, 1), (2, 2))).validate(2, 0)


class TestDerivativeTransform:
    def test_linear_series_gives_slope(self):
        assert np.array_equal(
            measures.derivative_transform([0.0, 1.0, 2.0, 3.0]).values, [1.0, 1.0]
        )
        assert np.array_equal(
            measures.derivative_transform([5.0, 3.0, 1.0, -1.0, -3.0]).values,
            [-2.0, -2.0, -2.0],
        )

    def test_constant_series_gives_zeros(self):
        assert np.array_equal(
            measures.derivative_transform([4.0, 4.0, 4.0, 4.0]).values, [0.0, 0.0]
        )

    def test_hand_computed_interior_point(self):
        # ((2-0) + (1-0)/2) / 2 = 1.25
        assert measures.derivative_transform([0.0, 2.0, 1.0]).values[0] == 1.25

    def test_output_length(self):
        assert len(measures.derivative_transform(rng.normal(size=10))) == 8

    def test_too_short(self):
        with pytest.raises(ValueError, match="too short"):
            measures.derivative_transform([1.0, 2.0])


def manual_derivative(values):
    values = np.asarray(values, dtype=float)
    return np.array(
        [
            ((values[i] - values[i - 1]) + (values[i + 1] - values[i - 1]) / 2) / 2
            for i in range(1, len(values) - 1)
        ]
    )


class TestDdtw:
    def test_equal_slope_lines_are_identical(self):
        a = [1.0 + 2.0 * i for i in range(8)]
        b = [-4.0 + 2.0 * i for i in range(8)]
        for window in (0.0, 0.5, 1.0):
            assert measures.ddtw(a, b, window) == 0.0

    def test_self_distance_is_zero(self):
        a = rng.normal(size=8)
        assert measures.ddtw(a, a, 0.3) == 0.0

    def test_composition_oracle(self):
        for _ in range(20):
            a = rng.normal(size=10)
            b = rng.normal(size=10)
            for window in (0.0, 0.4, 1.0):
                expected = measures.dtw(manual_derivative(a), manual_derivative(b), window)
                assert measures.ddtw(a, b, window) == expected

    def test_too_short(self):
        with pytest.raises(ValueError, match="too short"):
            measures.ddtw([1.0, 2.0], [3.0, 4.0], 1.0)


class TestWdtwWeight:
    def test_zero_penalty_flattens_to_half(self):
        for d in range(11):
            assert measures.wdtw_weight(d, 0.0, 10) == 0.5

    def test_midpoint_is_half(self):
        for penalty in (0.01, 1.0, 50.0):
            assert measures.wdtw_weight(5, penalty, 10) == 0.5

    def test_saturation(self):
        assert measures.wdtw_weight(0, 1000.0, 10) < 1e-12
        assert measures.wdtw_weight(10, 1000.0, 10) > 1.0 - 1e-12

    def test_monotone_in_displacement(self):
        weights = [measures.wdtw_weight(d, 0.7, 20) for d in range(21)]
        assert all(lo <= hi for lo, hi in zip(weights, weights[1:]))
        assert all(0.0 <= w <= 1.0 for w in weights)

    def test_rejects_negative_penalty(self):
        with pytest.raises(ValueError):
            measures.wdtw_weight(1, -1.0, 10)


class TestWdtw:
    def test_zero_penalty_halves_full_window_dtw(self):
        for _ in range(30):
            a = rng.normal(size=9)
            b = rng.normal(size=9)
            assert measures.wdtw(a, b, 0.0) == 0.5 * measures.dtw(a, b, 1.0)

    def test_self_distance_is_zero(self):
        a = rng.normal(size=9)
        for penalty in (0.0, 0.1, 10.0):
            assert measures.wdtw(a, a, penalty) == 0.0

    @pytest.mark.parametrize("m", range(2, 9))
    def test_matches_enumeration(self, m):
        pair_rng = np.random.default_rng(300 + m)
        for _ in range(15):
            a = pair_rng.integers(-10, 11, size=m).astype(float)
            b = pair_rng.integers(-10, 11, size=m).astype(float)
            for penalty in (0.0, 0.05, 1.0):
                assert measures.wdtw(a, b, penalty) == brute_force_wdtw(a, b, penalty)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            measures.wdtw([1.0], [1.0, 2.0], 0.1)


class TestWddtw:
    def test_equal_slope_lines_are_identical(self):
        a = [3.0 * i for i in range(7)]
        b = [10.0 + 3.0 * i for i in range(7)]
        assert measures.wddtw(a, b, 0.2) == 0.0

    def test_self_distance_is_zero(self):
        a = rng.normal(size=7)
        assert measures.wddtw(a, a, 0.5) == 0.0

    def test_composition_oracle(self):
        for _ in range(15):
            a = rng.normal(size=9)
            b = rng.normal(size=9)
            expected = measures.wdtw(manual_derivative(a), manual_derivative(b), 0.3)
            assert measures.wddtw(a, b, 0.3) == expected


LCSS_FIRST = "ABCADACDAB"
LCSS_SECOND = "BCDADBCACB"


def encode(text):
    return [float("ABCD".index(c)) for c in text]


class TestLcss:
    def test_paper_string_pair(self):
        a, b = encode(LCSS_FIRST), encode(LCSS_SECOND)
        assert measures.lcss_length(a, b, 0.0) == 7  # realizes "BCDACAB"
        assert measures.lcss_distance(a, b, 0.0) == 0.3

    def test_full_match(self):
        a = rng.integers(0, 5, size=10).astype(float)
        assert measures.lcss_length(a, a, 0.0) == 10
        assert measures.lcss_distance(a, a, 0.0) == 0.0

    def test_total_mismatch(self):
        a = [0.0, 0.0, 0.0]
        b = [10.0, 10.0, 10.0]
        assert measures.lcss_length(a, b, 1.0) == 0
        assert measures.lcss_distance(a, b, 1.0) == 1.0

    def test_matches_naive_recursion(self):
        pair_rng = np.random.default_rng(55)
        for _ in range(60):
            m = int(pair_rng.integers(1, 11))
            a = pair_rng.integers(0, 10, size=m).astype(float)
            b = pair_rng.integers(0, 10, size=m).astype(float)
            for threshold in (0.0, 1.0):
                assert measures.lcss_length(a, b, threshold) == naive_lcs_length(
                    a, b, threshold
                )

    def test_table_agrees_with_rolling_kernel(self):
        pair_rng = np.random.default_rng(56)
        for _ in range(20):
            m = int(pair_rng.integers(1, 12))
            a = pair_rng.integers(0, 6, size=m).astype(float)
            b = pair_rng.integers(0, 6, size=m).astype(float)
            table = measures.lcss_table(a, b, 1.0)
            assert table[0, 0] == measures.lcss_length(a, b, 1.0)
            # Suffix match counts never increase toward larger indices.
            assert (np.diff(table, axis=0) <= 0).all()
            assert (np.diff(table, axis=1) <= 0).all()
            assert table.max() <= m

    def test_rejects_negative_threshold(self):
        with pytest.raises(ValueError):
            measures.lcss_length([1.0], [1.0], -0.5)


class TestCostMatrix:
    def test_entries_and_swap_transpose_symmetry(self):
        a = rng.normal(size=6)
        b = rng.normal(size=6)
        grid = measures.pointwise_cost_matrix(a, b)
        assert grid[2, 4] == (a[2] - b[4]) ** 2
        assert (grid >= 0).all()
        assert np.array_equal(measures.pointwise_cost_matrix(b, a), grid.T)

    def test_weighted_entries(self):
        a = rng.normal(size=5)
        b = rng.normal(size=5)
        weights = measures.wdtw_weights(0.8, 5)
        grid = measures.pointwise_cost_matrix(a, b, weights)
        assert grid[1, 4] == weights[3] * (a[1] - b[4]) ** 2


class TestMeasureProperties:
    @given(paired_series(min_size=1, max_size=10))
    @settings(max_examples=60, deadline=None)
    def test_symmetry_exact(self, pair):
        a, b = ([float(v) for v in s] for s in pair)
        assert measures.dtw(a, b, 0.5) == measures.dtw(b, a, 0.5)
        assert measures.squared_euclidean(a, b) == measures.squared_euclidean(b, a)
        assert measures.wdtw(a, b, 0.1) == measures.wdtw(b, a, 0.1)
        assert measures.lcss_length(a, b, 1.0) == measures.lcss_length(b, a, 1.0)

    @given(series_strategy)
    @settings(max_examples=40, deadline=None)
    def test_identity_zero(self, values):
        assert measures.squared_euclidean(values, values) == 0.0
        assert measures.dtw(values, values, 0.25) == 0.0
        assert measures.wdtw(values, values, 1.0) == 0.0
        assert measures.lcss_distance(values, values, 0.0) == 0.0

    @given(paired_series(min_size=2, max_size=10))
    @settings(max_examples=40, deadline=None)
    def test_window_monotone_and_euclidean_dominance(self, pair):
        a, b = ([float(v) for v in s] for s in pair)
        grid = [0.0, 0.1, 0.2, 0.4, 0.7, 1.0]
        costs = [measures.dtw(a, b, w) for w in grid]
        assert all(hi >= lo for hi, lo in zip(costs, costs[1:]))
        euclid = measures.squared_euclidean(a, b)
        assert costs[0] == euclid
        assert all(c <= euclid for c in costs)

    @given(paired_series(min_size=1, max_size=10))
    @settings(max_examples=40, deadline=None)
    def test_lcss_monotone_in_threshold(self, pair):
        a, b = ([float(v) for v in s] for s in pair)
        lengths = [measures.lcss_length(a, b, eps) for eps in (0.0, 0.5, 1.0, 2.0, 5.0)]
        assert all(hi >= lo for hi, lo in zip(lengths[1:], lengths))

    @given(paired_series(min_size=2, max_size=8))
    @settings(max_examples=30, deadline=None)
    def test_weight_collapse(self, pair):
        a, b = ([float(v) for v in s] for s in pair)
        lhs = measures.wdtw(a, b, 0.0)
        rhs = 0.5 * measures.dtw(a, b, 1.0)
        assert lhs == pytest.approx(rhs, rel=1e-9)


class TestBatchDispatch:
    def test_self_matrix_matches_scalar_calls(self):
        values = rng.normal(size=(5, 8))
        for spec in (
            MeasureSpec.squared_euclidean(),
            MeasureSpec.dtw(0.25),
            MeasureSpec.ddtw(0.5),
            MeasureSpec.wdtw(0.3),
            MeasureSpec.wddtw(0.0),
            MeasureSpec.lcss(0.5),
        ):
            matrix = measures.batch_self_distances(values, spec)
            assert np.array_equal(matrix, matrix.T)
            assert np.array_equal(np.diag(matrix), np.zeros(5))
            for i in range(5):
                for j in range(i + 1, 5):
                    assert matrix[i, j] == measures.pair_distance(
                        values[i], values[j], spec
                    )

    def test_cross_matrix_matches_scalar_calls(self):
        queries = rng.normal(size=(3, 7))
        refs = rng.normal(size=(4, 7))
        spec = MeasureSpec.dtw(0.4)
        matrix = measures.batch_cross_distances(queries, refs, spec)
        assert matrix.shape == (3, 4)
        for i in range(3):
            for j in range(4):
                assert matrix[i, j] == measures.pair_distance(queries[i], refs[j], spec)

    def test_pair_distance_accepts_time_series(self):
        a = TimeSeries([1.0, 2.0, 3.0])
        b = TimeSeries([1.0, 2.0, 2.0])
        assert measures.pair_distance(a, b, MeasureSpec.dtw(1.0)) == 1.0

    def test_path_count_sanity(self):
        # Delannoy-style growth: full-window path counts for m = 1..5.
        assert [len(all_warping_paths(m, m)) for m in range(1, 6)] == [1, 3, 13, 63, 321]
