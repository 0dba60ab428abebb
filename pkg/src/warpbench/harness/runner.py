"""Experiment runner: datasets x classifiers, tuned on train, scored on test.

Cells run concurrently on a thread pool (the distance kernels release the
GIL); results are sorted by (dataset, classifier) before anything is written,
so outputs are byte-identical for any worker count.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ..classify import KnnSpec, evaluate
from ..core import LabeledDataset, MeasureKind, MeasureSpec
from ..stats import AccuracyTable
from ..tune import ParamGrid, loocv_accuracy, tune_k, tune_penalty, tune_threshold, tune_window
from .cache import DiskMatrixCache
from .config import ClassifierDirective, ExperimentConfig
from .datasets import DatasetError, parse_dataset


@dataclass(frozen=True)
class ResultsRecord:
    dataset: str
    classifier: str
    test_accuracy: float
    params: dict
    tuned: tuple[str, ...]
    train_accuracy: float | None
    seconds: float

    def to_json(self) -> str:
        payload = {
            "dataset": self.dataset,
            "classifier": self.classifier,
            "test_accuracy": self.test_accuracy,
            "params": self.params,
            "tuned": list(self.tuned),
            "train_accuracy": self.train_accuracy,
            "seconds": self.seconds,
        }
        return json.dumps(payload, sort_keys=True)


@dataclass(frozen=True)
class CellFailure:
    dataset: str
    classifier: str | None
    error: str


@dataclass(frozen=True)
class RunResult:
    records: tuple[ResultsRecord, ...]
    failures: tuple[CellFailure, ...]
    out_dir: Path

    @property
    def ok(self) -> bool:
        return not self.failures


def _grids(config: ExperimentConfig):
    window = ParamGrid(config.window_grid) if config.window_grid else None
    penalty = ParamGrid(config.penalty_grid) if config.penalty_grid else None
    threshold = ParamGrid(config.threshold_grid) if config.threshold_grid else None
    k = ParamGrid(config.k_grid) if config.k_grid else None
    return window, penalty, threshold, k


def resolve_classifier(
    directive: ClassifierDirective,
    train: LabeledDataset,
    config: ExperimentConfig,
    cache: DiskMatrixCache | None,
) -> tuple[KnnSpec, dict]:
    """Fix every ``cv`` parameter of a directive by LOOCV on the training split."""
    window_grid, penalty_grid, threshold_grid, k_grid = _grids(config)
    tuned: dict = {}
    window, penalty, threshold = directive.window, directive.penalty, directive.threshold
    if window == "cv":
        derivative = directive.kind is MeasureKind.DDTW
        window = tune_window(train, grid=window_grid, derivative=derivative, cache=cache).best
        tuned["window"] = window
    if penalty == "cv":
        derivative = directive.kind is MeasureKind.WDDTW
        penalty = tune_penalty(train, grid=penalty_grid, derivative=derivative, cache=cache).best
        tuned["penalty"] = penalty
    if threshold == "cv":
        threshold = tune_threshold(train, grid=threshold_grid, cache=cache).best
        tuned["threshold"] = threshold
    measure = MeasureSpec(
        kind=directive.kind, window=window, penalty=penalty, threshold=threshold
    )
    k = directive.k
    if k == "cv":
        k = tune_k(train, measure, grid=k_grid, cache=cache).best
        tuned["k"] = k
    return KnnSpec(measure=measure, k=int(k)), tuned


def _run_cell(
    dataset_name: str,
    directive: ClassifierDirective,
    train: LabeledDataset,
    test: LabeledDataset,
    config: ExperimentConfig,
    cache: DiskMatrixCache | None,
) -> ResultsRecord:
    started = time.perf_counter()
    spec, tuned = resolve_classifier(directive, train, config, cache)
    try:
        train_accuracy = loocv_accuracy(train, spec, cache=cache)
    except ValueError:  # single-instance train set or k too large for folds
        train_accuracy = None
    accuracy, _ = evaluate(train, test, spec)
    params = {"measure": spec.measure.kind.value, "k": spec.k}
    for name in ("window", "penalty", "threshold"):
        value = getattr(spec.measure, name)
        if value is not None:
            params[name] = value
    return ResultsRecord(
        dataset=dataset_name,
        classifier=directive.ident,
        test_accuracy=accuracy,
        params=params,
        tuned=tuple(sorted(tuned)),
        train_accuracy=train_accuracy,
        seconds=time.perf_counter() - started,
    )


def emit_accuracy_csv(records, path) -> AccuracyTable:
    """Write the datasets x classifiers accuracy grid as CSV.

    Every dataset must carry the same classifier set; rows and columns are
    emitted in sorted order.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to emit")
    by_dataset: dict[str, dict[str, float]] = {}
    for record in records:
        cells = by_dataset.setdefault(record.dataset, {})
        if record.classifier in cells:
            raise ValueError(
                f"duplicate cell ({record.dataset!r}, {record.classifier!r})"
            )
        cells[record.classifier] = record.test_accuracy
    classifier_sets = {frozenset(cells) for cells in by_dataset.values()}
    if len(classifier_sets) > 1:
        raise ValueError("inconsistent classifier sets across datasets")
    datasets = tuple(sorted(by_dataset))
    classifiers = tuple(sorted(next(iter(classifier_sets))))
    grid = [[by_dataset[d][c] for c in classifiers] for d in datasets]
    table = AccuracyTable(datasets=datasets, classifiers=classifiers, accuracies=grid)
    table.to_csv(path)
    return table


def run_experiment(config: ExperimentConfig) -> RunResult:
    """Run every (dataset, classifier) cell and persist records, CSV and manifest.

    A dataset that fails to parse only aborts its own cells; the failure is
    logged in the run manifest and the remaining cells still run.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cache = DiskMatrixCache(config.cache_dir) if config.cache_dir else None

    loaded: dict[str, tuple[LabeledDataset, LabeledDataset]] = {}
    failures: list[CellFailure] = []
    for entry in config.datasets:
        try:
            train = parse_dataset(
                entry.train_path, role="train", name=entry.name, normalize=config.normalize
            )
            test = parse_dataset(
                entry.test_path, role="test", name=entry.name, normalize=config.normalize
            )
            if train.series_length != test.series_length:
                raise DatasetError(
                    f"{entry.name}: train length {train.series_length} != "
                    f"test length {test.series_length}"
                )
            loaded[entry.name] = (train, test)
        except (DatasetError, ValueError) as exc:
            failures.append(CellFailure(dataset=entry.name, classifier=None, error=str(exc)))

    cells = [
        (entry.name, directive)
        for entry in config.datasets
        if entry.name in loaded
        for directive in config.classifiers
    ]

    def task(cell):
        name, directive = cell
        train, test = loaded[name]
        try:
            return _run_cell(name, directive, train, test, config, cache)
        except Exception as exc:  # noqa: BLE001 - one bad cell must not kill the run
            return CellFailure(dataset=name, classifier=directive.ident, error=str(exc))

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(task, cells))
    else:
        outcomes = [task(cell) for cell in cells]

    records = sorted(
        (o for o in outcomes if isinstance(o, ResultsRecord)),
        key=lambda r: (r.dataset, r.classifier),
    )
    failures.extend(o for o in outcomes if isinstance(o, CellFailure))
    failures.sort(key=lambda f: (f.dataset, f.classifier or ""))

    (out_dir / "records.jsonl").write_text(
        "".join(record.to_json() + "\n" for record in records)
    )
    csv_path = out_dir / "accuracies.csv"
    complete = _complete_records(records, config)
    if complete:
        emit_accuracy_csv(complete, csv_path)
    manifest = {
        "seed": config.seed,
        "workers": config.workers,
        "normalize": config.normalize,
        "datasets": [entry.name for entry in config.datasets],
        "classifiers": [directive.ident for directive in config.classifiers],
        "records": len(records),
        "failures": [
            {"dataset": f.dataset, "classifier": f.classifier, "error": f.error}
            for f in failures
        ],
        "cell_seconds": {
            f"{r.dataset}/{r.classifier}": round(r.seconds, 6) for r in records
        },
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return RunResult(records=tuple(records), failures=tuple(failures), out_dir=out_dir)


def _complete_records(records, config: ExperimentConfig) -> list[ResultsRecord]:
    """Records restricted to datasets that produced every classifier cell."""
    expected = {directive.ident for directive in config.classifiers}
    by_dataset: dict[str, set[str]] = {}
    for record in records:
        by_dataset.setdefault(record.dataset, set()).add(record.classifier)
    complete = {name for name, seen in by_dataset.items() if seen == expected}
    return [record for record in records if record.dataset in complete]
