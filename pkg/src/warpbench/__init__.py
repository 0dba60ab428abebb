"""Elastic-distance nearest-neighbour time series classification toolkit."""

from .classify import DistanceMatrix, KnnSpec, Prediction, distance_matrix, evaluate, knn_predict
from .core import Label, LabeledDataset, MeasureKind, MeasureSpec, TimeSeries, z_normalize
from .measures import (
    WarpingPath,
    band,
    ddtw,
    derivative_transform,
    dtw,
    dtw_path,
    lcss_distance,
    lcss_length,
    pair_distance,
    squared_euclidean,
    wddtw,
    wdtw,
    wdtw_weight,
)
from .tune import (
    ParamGrid,
    TuneResult,
    loocv_accuracy,
    tune_k,
    tune_penalty,
    tune_threshold,
    tune_window,
)

__all__ = [
    "DistanceMatrix",
    "KnnSpec",
    "Label",
    "LabeledDataset",
    "MeasureKind",
    "MeasureSpec",
    "ParamGrid",
    "Prediction",
    "TimeSeries",
    "TuneResult",
    "WarpingPath",
    "band",
    "ddtw",
    "derivative_transform",
    "distance_matrix",
    "dtw",
    "dtw_path",
    "evaluate",
    "knn_predict",
    "lcss_distance",
    "lcss_length",
    "loocv_accuracy",
    "pair_distance",
    "squared_euclidean",
    "tune_k",
    "tune_penalty",
    "tune_threshold",
    "tune_window",
    "wddtw",
    "wdtw",
    "wdtw_weight",
    "z_normalize",
]

__version__ = "0.1.0"
