"""Training-set-only parameter selection via leave-one-out cross-validation.

Every tuner scores each grid candidate by LOOCV accuracy of a 1-NN classifier
on the training split and returns the best candidate, breaking ties toward
the smallest value (cheapest and least elastic). Nothing here ever sees test
labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

import numpy as np

from .classify import DistanceMatrix, KnnSpec, predict_from_distances
from .core import LabeledDataset, MeasureSpec
from .measures import batch_self_distances


@dataclass(frozen=True)
class ParamGrid:
    """Ordered candidate values for one parameter."""

    values: tuple

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("parameter grid is empty")
        for lo, hi in zip(self.values, self.values[1:]):
            if not lo < hi:
                raise ValueError("grid values must be strictly increasing")

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def of(cls, values: Sequence) -> "ParamGrid":
        return cls(tuple(values))


@dataclass(frozen=True)
class TuneResult:
    parameter: str
    grid: ParamGrid
    accuracies: tuple[float, ...]
    best: float | int

    @property
    def best_accuracy(self) -> float:
        return max(self.accuracies)


class MatrixCache(Protocol):
    def get(self, train: LabeledDataset, measure: MeasureSpec) -> np.ndarray | None: ...

    def put(self, train: LabeledDataset, measure: MeasureSpec, matrix: np.ndarray) -> None: ...


def default_window_grid() -> ParamGrid:
    """Warping window fractions 0.00, 0.01, ..., 1.00."""
    return ParamGrid(tuple(i / 100 for i in range(101)))


def default_k_grid(train_size: int) -> ParamGrid:
    """Odd neighbour counts 1, 3, ..., 99 capped at train_size - 1."""
    values = tuple(k for k in range(1, 100, 2) if k <= train_size - 1)
    if not values:
        raise ValueError("training set too small to tune k (need at least 2 instances)")
    return ParamGrid(values)


def default_penalty_grid() -> ParamGrid:
    return ParamGrid((0.0, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 5.0, 10.0, 50.0, 100.0))


def default_threshold_grid(train: LabeledDataset) -> ParamGrid:
    """Match thresholds 0.02 std, 0.04 std, ..., 1.0 std of the training values."""
    std = float(np.std(train.values))
    if std == 0.0:
        return ParamGrid((0.0,))
    return ParamGrid(tuple(i * 0.02 * std for i in range(1, 51)))


def _resolve_matrix(
    train: LabeledDataset, measure: MeasureSpec, cache: MatrixCache | None
) -> np.ndarray:
    if cache is not None:
        cached = cache.get(train, measure)
        if cached is not None:
            return cached
    matrix = batch_self_distances(train.values, measure)
    if cache is not None:
        cache.put(train, measure, matrix)
    return matrix


def loocv_accuracy(
    train: LabeledDataset,
    spec: KnnSpec,
    matrix: DistanceMatrix | np.ndarray | None = None,
    cache: MatrixCache | None = None,
) -> float:
    """Fraction of training instances classified correctly by all the others.

    Folds are deterministic in instance order; a precomputed distance matrix
    may be passed to avoid rebuilding it per candidate.
    """
    n = len(train)
    if n < 2:
        raise ValueError("leave-one-out needs at least 2 training instances")
    if spec.k > n - 1:
        raise ValueError(f"k={spec.k} exceeds the {n - 1} instances left per fold")
    if matrix is None:
        matrix = _resolve_matrix(train, spec.measure, cache)
    elif isinstance(matrix, DistanceMatrix):
        matrix = matrix.values
    correct = 0
    for i in range(n):
        predicted = predict_from_distances(matrix[i], train.labels, spec.k, exclude=i)
        if predicted == train.labels[i]:
            correct += 1
    return correct / n


def _search(
    parameter: str,
    train: LabeledDataset,
    grid: ParamGrid,
    spec_for: Callable[[float], MeasureSpec],
    cache: MatrixCache | None,
) -> TuneResult:
    best = None
    best_accuracy = -1.0
    accuracies = []
    for value in grid.values:
        measure = spec_for(value)
        matrix = _resolve_matrix(train, measure, cache)
        accuracy = loocv_accuracy(train, KnnSpec(measure=measure, k=1), matrix=matrix)
        accuracies.append(accuracy)
        if accuracy > best_accuracy:  # strict: ties keep the smaller value
            best_accuracy = accuracy
            best = value
    return TuneResult(
        parameter=parameter, grid=grid, accuracies=tuple(accuracies), best=best
    )


def tune_window(
    train: LabeledDataset,
    grid: ParamGrid | None = None,
    derivative: bool = False,
    cache: MatrixCache | None = None,
) -> TuneResult:
    """Pick the warping window for 1-NN DTW (or DDTW) by LOOCV.

    Each candidate gets a freshly built distance matrix: a new window size may
    change every entry.
    """
    grid = grid or default_window_grid()
    for value in grid.values:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"window candidates must be in [0, 1], got {value}")
    make = MeasureSpec.ddtw if derivative else MeasureSpec.dtw
    return _search("window", train, grid, lambda r: make(window=r), cache)


def tune_penalty(
    train: LabeledDataset,
    grid: ParamGrid | None = None,
    derivative: bool = False,
    cache: MatrixCache | None = None,
) -> TuneResult:
    """Pick the weight penalty for 1-NN WDTW (or WDDTW) by LOOCV."""
    grid = grid or default_penalty_grid()
    if grid.values[0] < 0.0:
        raise ValueError("penalty candidates must be >= 0")
    make = MeasureSpec.wddtw if derivative else MeasureSpec.wdtw
    return _search("penalty", train, grid, lambda g: make(penalty=g), cache)


def tune_threshold(
    train: LabeledDataset,
    grid: ParamGrid | None = None,
    cache: MatrixCache | None = None,
) -> TuneResult:
    """Pick the LCSS match threshold for 1-NN by LOOCV."""
    grid = grid or default_threshold_grid(train)
    if grid.values[0] < 0.0:
        raise ValueError("threshold candidates must be >= 0")
    return _search(
        "threshold", train, grid, lambda eps: MeasureSpec.lcss(threshold=eps), cache
    )


def tune_k(
    train: LabeledDataset,
    measure: MeasureSpec,
    grid: ParamGrid | None = None,
    cache: MatrixCache | None = None,
) -> TuneResult:
    """Pick the neighbour count for a fixed measure by LOOCV.

    The distance matrix does not depend on k, so it is built once and shared
    by every candidate.
    """
    grid = grid or default_k_grid(len(train))
    if grid.values[-1] > len(train) - 1:
        raise ValueError(
            f"k grid reaches {grid.values[-1]} but folds have {len(train) - 1} instances"
        )
    matrix = _resolve_matrix(train, measure, cache)
    best = None
    best_accuracy = -1.0
    accuracies = []
    for k in grid.values:
        accuracy = loocv_accuracy(train, KnnSpec(measure=measure, k=int(k)), matrix=matrix)
        accuracies.append(accuracy)
        if accuracy > best_accuracy:
            best_accuracy = accuracy
            best = int(k)
    return TuneResult(parameter="k", grid=grid, accuracies=tuple(accuracies), best=best)
