"""Elastic and lock-step distance measures between equal-length series.

All distances are sums of squared differences (no square root anywhere); the
warping variants minimize that sum over monotone alignments of the two index
axes. Every operation is a pure function and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .core import MeasureKind, MeasureSpec, TimeSeries, series_values

__all__ = [
    "WarpingPath",
    "band",
    "squared_euclidean",
    "dtw",
    "dtw_path",
    "derivative_transform",
    "ddtw",
    "wdtw_weight",
    "wdtw_weights",
    "wdtw",
    "wddtw",
    "lcss_length",
    "lcss_table",
    "lcss_distance",
    "pointwise_cost_matrix",
    "pair_distance",
]


@dataclass(frozen=True)
class WarpingPath:
    """A monotone traversal of the pairwise cost grid, as 1-based index pairs."""

    points: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.points)

    def validate(self, length: int, max_displacement: int | None = None) -> None:
        """Raise if the path violates any alignment constraint."""
        pts = self.points
        if not pts:
            raise ValueError("warping path is empty")
        if pts[0] != (1, 1):
            raise ValueError(f"path must start at (1, 1), got {pts[0]}")
        if pts[-1] != (length, length):
            raise ValueError(f"path must end at ({length}, {length}), got {pts[-1]}")
        for (e0, f0), (e1, f1) in zip(pts, pts[1:]):
            de, df = e1 - e0, f1 - f0
            if not (0 <= de <= 1 and 0 <= df <= 1):
                raise ValueError(f"illegal step from ({e0}, {f0}) to ({e1}, {f1})")
            if de == 0 and df == 0:
                raise ValueError(f"stationary repeat at ({e0}, {f0})")
        if max_displacement is not None:
            for e, f in pts:
                if abs(e - f) > max_displacement:
                    raise ValueError(
                        f"point ({e}, {f}) exceeds allowed displacement {max_displacement}"
                    )

    def cost(self, a, b) -> float:
        """Replay the summed squared differences along the path."""
        av, bv = _pair_values(a, b)
        total = 0.0
        for e, f in self.points:
            diff = av[e - 1] - bv[f - 1]
            total = total + diff * diff
        return total


def _pair_values(a, b) -> tuple[np.ndarray, np.ndarray]:
    av = series_values(a)
    bv = series_values(b)
    if av.shape[0] != bv.shape[0]:
        raise ValueError(f"series length mismatch: {av.shape[0]} vs {bv.shape[0]}")
    return av, bv


def _check_window(window: float) -> float:
    if not 0.0 <= window <= 1.0:
        raise ValueError(f"warping window must be in [0, 1], got {window}")
    return float(window)


def band(window: float, length: int) -> int:
    """Maximum index displacement allowed by a warping window fraction.

    floor(window * length), with a tiny nudge so fractions that are exact in
    decimal (0.29 * 100 = 29) are not truncated by binary representation.
    """
    _check_window(window)
    return int(math.floor(window * length + 1e-9))


def squared_euclidean(a, b) -> float:
    """Sum of pointwise squared differences (the diagonal alignment)."""
    av, bv = _pair_values(a, b)
    return float(_kernels.squared_euclidean(av, bv))


def dtw(a, b, window: float = 1.0) -> float:
    """Minimum summed squared difference over all in-band warping paths."""
    av, bv = _pair_values(a, b)
    return float(_kernels.dtw(av, bv, band(window, av.shape[0])))


def dtw_path(a, b, window: float = 1.0) -> tuple[WarpingPath, float]:
    """Optimal warping path and its cost.

    Cost ties during traceback prefer the diagonal predecessor, then the one
    reducing the first index, then the one reducing the second.
    """
    av, bv = _pair_values(a, b)
    m = av.shape[0]
    grid = _kernels.dtw_cumulative(av, bv, band(window, m))
    i = j = m - 1
    reversed_points = [(i, j)]
    while i > 0 or j > 0:
        candidates = (
            (grid[i - 1, j - 1] if i > 0 and j > 0 else np.inf, i - 1, j - 1),
            (grid[i - 1, j] if i > 0 else np.inf, i - 1, j),
            (grid[i, j - 1] if j > 0 else np.inf, i, j - 1),
        )
        best = min(c[0] for c in candidates)
        for value, ci, cj in candidates:
            if value == best:
                i, j = ci, cj
                break
        reversed_points.append((i, j))
    points = tuple((e + 1, f + 1) for e, f in reversed(reversed_points))
    return WarpingPath(points), float(grid[m - 1, m - 1])


def derivative_transform(a) -> TimeSeries:
    """Series of local slope estimates, averaging the two adjacent slopes.

    Output has length m - 2: only interior points have both neighbours.
    """
    values = series_values(a)
    if values.shape[0] < 3:
        raise ValueError("series too short for derivative (need at least 3 observations)")
    return TimeSeries(_derivative_values(values))


def _derivative_values(values: np.ndarray) -> np.ndarray:
    """Slope-average transform along the last axis (works on 1-D and 2-D)."""
    left = values[..., :-2]
    mid = values[..., 1:-1]
    right = values[..., 2:]
    return ((mid - left) + (right - left) / 2.0) / 2.0


def ddtw(a, b, window: float = 1.0) -> float:
    """DTW between the slope-transformed series."""
    return dtw(derivative_transform(a), derivative_transform(b), window)


def wdtw_weight(displacement: int, penalty: float, length: int) -> float:
    """Logistic alignment weight for an index displacement.

    Rises from near 0 (no warping) to near 1 (maximal warping) around the
    half-length midpoint; the penalty parameter controls the steepness.
    """
    if penalty < 0.0:
        raise ValueError(f"weight penalty must be >= 0, got {penalty}")
    exponent = -penalty * (displacement - length / 2.0)
    if exponent > 709.0:  # exp overflow; weight saturates at 0
        return 0.0
    return 1.0 / (1.0 + math.exp(exponent))


@lru_cache(maxsize=None)
def wdtw_weights(penalty: float, length: int) -> np.ndarray:
    """Weight lookup for displacements 0..length-1, shared across all pairs."""
    weights = np.array(
        [wdtw_weight(d, penalty, length) for d in range(length)], dtype=np.float64
    )
    weights.flags.writeable = False
    return weights


def wdtw(a, b, penalty: float) -> float:
    """Full-window DTW over squared differences scaled by the logistic weight."""
    av, bv = _pair_values(a, b)
    return float(_kernels.wdtw(av, bv, wdtw_weights(penalty, av.shape[0])))


def wddtw(a, b, penalty: float) -> float:
    """Weighted DTW between the slope-transformed series."""
    return wdtw(derivative_transform(a), derivative_transform(b), penalty)


def lcss_length(a, b, threshold: float = 0.0) -> int:
    """Length of the longest common subsequence under |a_i - b_j| <= threshold."""
    av, bv = _pair_values(a, b)
    if threshold < 0.0:
        raise ValueError(f"match threshold must be >= 0, got {threshold}")
    return int(_kernels.lcss_length(av, bv, threshold))


def lcss_table(a, b, threshold: float = 0.0) -> np.ndarray:
    """The full (m+1) x (m+1) suffix match-count table.

    Entry [i, j] is the longest common subsequence of a[i:] and b[j:]
    (0-based); [0, 0] is the full match length. Kept for inspection and
    testing; the distance path uses a two-row rolling computation.
    """
    av, bv = _pair_values(a, b)
    m = av.shape[0]
    table = np.zeros((m + 1, m + 1), dtype=np.int64)
    for i in range(m - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            value = table[i + 1, j + 1]
            if abs(av[i] - bv[j]) <= threshold:
                value += 1
            elif table[i, j + 1] > value:
                value = table[i, j + 1]
            elif table[i + 1, j] > value:
                value = table[i + 1, j]
            table[i, j] = value
    return table


def lcss_distance(a, b, threshold: float = 0.0) -> float:
    """Normalized complement of the match count, in [0, 1].

    Computed as (m - length) / m so exact-decimal results (3/10 = 0.3) hold.
    """
    av, bv = _pair_values(a, b)
    m = av.shape[0]
    return (m - lcss_length(av, bv, threshold)) / m


def pointwise_cost_matrix(a, b, weights: np.ndarray | None = None) -> np.ndarray:
    """Grid of (a_i - b_j)^2 costs, optionally scaled by weights[|i - j|]."""
    av, bv = _pair_values(a, b)
    grid = (av[:, None] - bv[None, :]) ** 2
    if weights is not None:
        m = av.shape[0]
        disp = np.abs(np.arange(m)[:, None] - np.arange(m)[None, :])
        grid = np.asarray(weights)[disp] * grid
    return grid


# -- MeasureSpec dispatch -----------------------------------------------------

_NO_WEIGHTS = np.zeros(0, dtype=np.float64)
_NO_WEIGHTS.flags.writeable = False


def prepare_batch(values: np.ndarray, spec: MeasureSpec):
    """Transform a stacked (n, m) value array and bind kernel parameters.

    Returns (values, code, band, weights, threshold) ready for the compiled
    pairwise drivers; derivative-based measures are transformed here once so
    per-pair work never repeats the transform.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    if spec.uses_derivative:
        if values.shape[-1] < 3:
            raise ValueError(
                "series too short for derivative (need at least 3 observations)"
            )
        values = np.ascontiguousarray(_derivative_values(values))
    length = values.shape[-1]
    kind = spec.kind
    if kind is MeasureKind.SQUARED_EUCLIDEAN:
        return values, _kernels.SQUARED_EUCLIDEAN, 0, _NO_WEIGHTS, 0.0
    if kind in (MeasureKind.DTW, MeasureKind.DDTW):
        return values, _kernels.DTW, band(spec.window, length), _NO_WEIGHTS, 0.0
    if kind in (MeasureKind.WDTW, MeasureKind.WDDTW):
        return values, _kernels.WDTW, 0, wdtw_weights(spec.penalty, length), 0.0
    if kind is MeasureKind.LCSS:
        return values, _kernels.LCSS, 0, _NO_WEIGHTS, float(spec.threshold)
    raise ValueError(f"unsupported measure kind {kind!r}")


def pair_distance(a, b, spec: MeasureSpec) -> float:
    """Distance between two series under a measure spec."""
    av, bv = _pair_values(a, b)
    batch, code, band_, weights, threshold = prepare_batch(np.stack((av, bv)), spec)
    return float(_kernels.pair_distance(batch[0], batch[1], code, band_, weights, threshold))


def batch_self_distances(values: np.ndarray, spec: MeasureSpec) -> np.ndarray:
    """Symmetric all-pairs distance grid over stacked (n, m) values."""
    batch, code, band_, weights, threshold = prepare_batch(values, spec)
    return _kernels.self_distance_matrix(batch, code, band_, weights, threshold)


def batch_cross_distances(
    queries: np.ndarray, references: np.ndarray, spec: MeasureSpec
) -> np.ndarray:
    """Distances from each query row to each reference row."""
    if queries.shape[-1] != references.shape[-1]:
        raise ValueError(
            f"series length mismatch: {queries.shape[-1]} vs {references.shape[-1]}"
        )
    qbatch, code, band_, weights, threshold = prepare_batch(queries, spec)
    rbatch, _, _, _, _ = prepare_batch(references, spec)
    return _kernels.cross_distance_matrix(qbatch, rbatch, code, band_, weights, threshold)
