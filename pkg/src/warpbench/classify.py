"""k-nearest-neighbour classification over any distance measure spec.

Tie handling is fully deterministic: equal distances prefer the lower
training index, and tied votes fall back to the class of the nearest
neighbour among the tied classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Label, LabeledDataset, MeasureSpec, series_values
from .measures import batch_cross_distances, batch_self_distances


@dataclass(frozen=True)
class KnnSpec:
    """Neighbour count plus the distance measure to rank neighbours with."""

    measure: MeasureSpec
    k: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class Prediction:
    index: int
    predicted: Label
    actual: Label

    @property
    def correct(self) -> bool:
        return self.predicted == self.actual


@dataclass(frozen=True)
class DistanceMatrix:
    """All pairwise distances over one dataset (symmetric, zero diagonal)."""

    measure: MeasureSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))

    @property
    def size(self) -> int:
        return self.values.shape[0]


def distance_matrix(data: LabeledDataset, measure: MeasureSpec) -> DistanceMatrix:
    """Pairwise distances between every two instances of a dataset.

    Entries are computed for i < j and mirrored, so symmetry is exact.
    """
    return DistanceMatrix(measure=measure, values=batch_self_distances(data.values, measure))


def vote(ordered_labels: list[Label]) -> Label:
    """Majority vote over neighbour labels listed nearest first.

    A tied vote is resolved to the class of the nearest tied-class neighbour,
    so k-NN degrades gracefully to 1-NN behaviour.
    """
    counts: dict[Label, int] = {}
    for label in ordered_labels:
        counts[label] = counts.get(label, 0) + 1
    top = max(counts.values())
    for label in ordered_labels:
        if counts[label] == top:
            return label
    raise AssertionError("unreachable: ordered_labels is nonempty")


def predict_from_distances(
    distances: np.ndarray, labels: tuple[Label, ...], k: int, exclude: int | None = None
) -> Label:
    """Classify one instance given its distance row against the training set."""
    candidates = [
        (distances[j], j) for j in range(len(labels)) if j != exclude
    ]
    if k > len(candidates):
        raise ValueError(f"k={k} exceeds the {len(candidates)} available neighbours")
    candidates.sort()  # (distance, index): equal distances prefer lower index
    return vote([labels[j] for _, j in candidates[:k]])


def knn_predict(train: LabeledDataset, query, spec: KnnSpec) -> Label:
    """Label of a query series by majority vote of its k nearest neighbours."""
    if spec.k > len(train):
        raise ValueError(f"k={spec.k} exceeds the {len(train)} training instances")
    qv = series_values(query)
    if qv.shape[0] != train.series_length:
        raise ValueError(
            f"series length mismatch: query {qv.shape[0]} vs train {train.series_length}"
        )
    row = batch_cross_distances(qv[None, :], train.values, spec.measure)[0]
    return predict_from_distances(row, train.labels, spec.k)


def evaluate(
    train: LabeledDataset, test: LabeledDataset, spec: KnnSpec
) -> tuple[float, list[Prediction]]:
    """Accuracy and per-instance predictions of a k-NN classifier on a test set."""
    if len(test) == 0:
        raise ValueError("test set is empty")
    if spec.k > len(train):
        raise ValueError(f"k={spec.k} exceeds the {len(train)} training instances")
    if test.series_length != train.series_length:
        raise ValueError(
            f"series length mismatch: test {test.series_length} vs train {train.series_length}"
        )
    rows = batch_cross_distances(test.values, train.values, spec.measure)
    predictions = [
        Prediction(
            index=i,
            predicted=predict_from_distances(rows[i], train.labels, spec.k),
            actual=test.labels[i],
        )
        for i in range(len(test))
    ]
    accuracy = sum(p.correct for p in predictions) / len(predictions)
    return accuracy, predictions
