"""Core domain types: series, labelled datasets and distance-measure specs.

Everything here is immutable after construction, so instances can be shared
freely between worker threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

Label = Union[int, str]


def _as_readonly_values(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"series values must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise ValueError("series must contain at least one observation")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series values must be finite (no NaN or infinity)")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """An ordered, fixed-length sequence of finite real observations."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly_values(self.values))

    def __len__(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.all(self.values == other.values)
        )

    def __hash__(self):
        return hash(self.values.tobytes())


def series_values(series) -> np.ndarray:
    """Values of a `TimeSeries` or validated copy of an array-like."""
    if isinstance(series, TimeSeries):
        return series.values
    return _as_readonly_values(series)


class MeasureKind(enum.Enum):
    SQUARED_EUCLIDEAN = "euclid"
    DTW = "dtw"
    DDTW = "ddtw"
    WDTW = "wdtw"
    WDDTW = "wddtw"
    LCSS = "lcss"

    @classmethod
    def from_name(cls, name: str) -> "MeasureKind":
        for kind in cls:
            if kind.value == name.lower():
                return kind
        raise ValueError(f"unknown measure kind {name!r}")


# Which optional parameter each kind consumes; all others are ignored.
_WINDOWED = (MeasureKind.DTW, MeasureKind.DDTW)
_WEIGHTED = (MeasureKind.WDTW, MeasureKind.WDDTW)


@dataclass(frozen=True)
class MeasureSpec:
    """A distance measure identifier plus the parameters it needs.

    `window` is the allowed warping fraction in [0, 1] (DTW/DDTW),
    `penalty` the logistic weight steepness >= 0 (WDTW/WDDTW) and
    `threshold` the value-match tolerance >= 0 (LCSS). Parameters that a
    kind does not use are ignored.
    """

    kind: MeasureKind
    window: float | None = None
    penalty: float | None = None
    threshold: float | None = None

    def __post_init__(self):
        if self.kind in _WINDOWED:
            if self.window is None:
                raise ValueError(f"{self.kind.value} requires a warping window")
            if not 0.0 <= self.window <= 1.0:
                raise ValueError(f"warping window must be in [0, 1], got {self.window}")
        if self.kind in _WEIGHTED:
            if self.penalty is None:
                raise ValueError(f"{self.kind.value} requires a weight penalty")
            if self.penalty < 0.0:
                raise ValueError(f"weight penalty must be >= 0, got {self.penalty}")
        if self.kind is MeasureKind.LCSS:
            if self.threshold is None:
                raise ValueError("lcss requires a match threshold")
            if self.threshold < 0.0:
                raise ValueError(f"match threshold must be >= 0, got {self.threshold}")

    @classmethod
    def squared_euclidean(cls) -> "MeasureSpec":
        return cls(MeasureKind.SQUARED_EUCLIDEAN)

    @classmethod
    def dtw(cls, window: float = 1.0) -> "MeasureSpec":
        return cls(MeasureKind.DTW, window=window)

    @classmethod
    def ddtw(cls, window: float = 1.0) -> "MeasureSpec":
        return cls(MeasureKind.DDTW, window=window)

    @classmethod
    def wdtw(cls, penalty: float) -> "MeasureSpec":
        return cls(MeasureKind.WDTW, penalty=penalty)

    @classmethod
    def wddtw(cls, penalty: float) -> "MeasureSpec":
        return cls(MeasureKind.WDDTW, penalty=penalty)

    @classmethod
    def lcss(cls, threshold: float) -> "MeasureSpec":
        return cls(MeasureKind.LCSS, threshold=threshold)

    @property
    def uses_derivative(self) -> bool:
        return self.kind in (MeasureKind.DDTW, MeasureKind.WDDTW)

    def identifier(self) -> str:
        """Stable string form, e.g. ``dtw(window=0.25)``, used in cache keys."""
        if self.kind in _WINDOWED:
            return f"{self.kind.value}(window={self.window!r})"
        if self.kind in _WEIGHTED:
            return f"{self.kind.value}(penalty={self.penalty!r})"
        if self.kind is MeasureKind.LCSS:
            return f"{self.kind.value}(threshold={self.threshold!r})"
        return self.kind.value


@dataclass(frozen=True)
class LabeledDataset:
    """A named collection of equal-length series with class labels.

    Instance order is stable and used for deterministic tie-breaking, so the
    dataset behaves like an immutable sequence of (series, label) pairs.
    """

    name: str
    role: str
    series: tuple[TimeSeries, ...]
    labels: tuple[Label, ...] = field(compare=True)

    def __post_init__(self):
        if self.role not in ("train", "test"):
            raise ValueError(f"dataset role must be 'train' or 'test', got {self.role!r}")
        if len(self.series) < 1:
            raise ValueError("dataset must contain at least one instance")
        if len(self.series) != len(self.labels):
            raise ValueError("series and labels must have equal length")
        lengths = {len(s) for s in self.series}
        if len(lengths) > 1:
            raise ValueError(f"all series must share one length, got lengths {sorted(lengths)}")

    @classmethod
    def from_instances(
        cls, name: str, role: str, instances: Iterable[tuple[TimeSeries, Label]]
    ) -> "LabeledDataset":
        pairs = list(instances)
        series = tuple(
            s if isinstance(s, TimeSeries) else TimeSeries(s) for s, _ in pairs
        )
        labels = tuple(label for _, label in pairs)
        return cls(name=name, role=role, series=series, labels=labels)

    def __len__(self) -> int:
        return len(self.series)

    def __getitem__(self, index: int) -> tuple[TimeSeries, Label]:
        return self.series[index], self.labels[index]

    @property
    def series_length(self) -> int:
        return len(self.series[0])

    @cached_property
    def values(self) -> np.ndarray:
        """All series stacked into an (n, m) read-only array."""
        arr = np.stack([s.values for s in self.series])
        arr.flags.writeable = False
        return arr

    @property
    def class_alphabet(self) -> tuple[Label, ...]:
        seen: dict[Label, None] = {}
        for label in self.labels:
            seen.setdefault(label, None)
        return tuple(seen)

    def normalized(self) -> "LabeledDataset":
        """Copy of the dataset with every series z-normalized."""
        return LabeledDataset(
            name=self.name,
            role=self.role,
            series=tuple(z_normalize(s) for s in self.series),
            labels=self.labels,
        )

    def with_labels(self, labels: Sequence[Label]) -> "LabeledDataset":
        return LabeledDataset(
            name=self.name, role=self.role, series=self.series, labels=tuple(labels)
        )


def z_normalize(series) -> TimeSeries:
    """Rescale a series to mean 0 and population standard deviation 1.

    Constant series come out as all zeros rather than raising: flat segments
    legitimately occur in sensor data.
    """
    values = series_values(series)
    if values.shape[0] < 2:
        raise ValueError("series too short to normalize (need at least 2 observations)")
    mean = values.mean()
    std = values.std()  # population convention: divide by m
    if std == 0.0:
        return TimeSeries(np.zeros_like(values))
    return TimeSeries((values - mean) / std)
