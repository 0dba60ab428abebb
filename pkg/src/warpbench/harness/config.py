"""Experiment configuration: flat key-value sections, INI style.

A ``[run]`` section sets global options, each ``[dataset NAME]`` section
points at a train/test file pair, and each ``[classifier ID]`` section
declares a measure with fixed parameters or ``cv`` markers. The experiment
matrix is the cross product of datasets and classifiers.

Example::

    [run]
    out = results
    seed = 7
    workers = 4

    [dataset gun]
    train = data/gun_TRAIN.txt
    test = data/gun_TEST.txt

    [classifier dtw-cv]
    measure = dtw
    r = cv

    [classifier euclid]
    measure = euclid
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace
from pathlib import Path

from ..core import MeasureKind, MeasureSpec


class ConfigError(ValueError):
    """The experiment configuration is malformed."""


def _parse_setting(raw: str, name: str) -> float | str:
    raw = raw.strip()
    if raw == "cv":
        return "cv"
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a number or 'cv', got {raw!r}") from None


@dataclass(frozen=True)
class ClassifierDirective:
    """One column of the experiment matrix: a measure plus per-parameter
    fixed values or ``cv`` markers."""

    ident: str
    kind: MeasureKind
    window: float | str | None = None
    penalty: float | str | None = None
    threshold: float | str | None = None
    k: int | str = 1

    def __post_init__(self):
        if self.kind in (MeasureKind.DTW, MeasureKind.DDTW):
            if self.window is None:
                object.__setattr__(self, "window", 1.0)
            elif self.window != "cv" and not 0.0 <= self.window <= 1.0:
                raise ConfigError(f"{self.ident}: window (r) must be in [0, 1] or 'cv'")
        elif self.window is not None:
            raise ConfigError(f"{self.ident}: {self.kind.value} takes no window (r)")
        if self.kind in (MeasureKind.WDTW, MeasureKind.WDDTW):
            if self.penalty is None:
                object.__setattr__(self, "penalty", "cv")
            elif self.penalty != "cv" and self.penalty < 0.0:
                raise ConfigError(f"{self.ident}: penalty (g) must be >= 0 or 'cv'")
        elif self.penalty is not None:
            raise ConfigError(f"{self.ident}: {self.kind.value} takes no penalty (g)")
        if self.kind is MeasureKind.LCSS:
            if self.threshold is None:
                object.__setattr__(self, "threshold", "cv")
            elif self.threshold != "cv" and self.threshold < 0.0:
                raise ConfigError(f"{self.ident}: threshold (eps) must be >= 0 or 'cv'")
        elif self.threshold is not None:
            raise ConfigError(f"{self.ident}: {self.kind.value} takes no threshold (eps)")
        if self.k != "cv" and self.k < 1:
            raise ConfigError(f"{self.ident}: k must be >= 1 or 'cv'")

    @classmethod
    def from_options(cls, ident: str, options: dict[str, str]) -> "ClassifierDirective":
        known = {"measure", "r", "g", "eps", "k"}
        unknown = set(options) - known
        if unknown:
            raise ConfigError(f"{ident}: unknown option(s) {sorted(unknown)}")
        if "measure" not in options:
            raise ConfigError(f"{ident}: missing 'measure'")
        try:
            kind = MeasureKind.from_name(options["measure"])
        except ValueError as exc:
            raise ConfigError(f"{ident}: {exc}") from None
        k: int | str = 1
        if "k" in options:
            raw = _parse_setting(options["k"], "k")
            k = raw if raw == "cv" else int(raw)
        return cls(
            ident=ident,
            kind=kind,
            window=_parse_setting(options["r"], "r") if "r" in options else None,
            penalty=_parse_setting(options["g"], "g") if "g" in options else None,
            threshold=_parse_setting(options["eps"], "eps") if "eps" in options else None,
            k=k,
        )

    @property
    def tuned_parameters(self) -> tuple[str, ...]:
        names = []
        for name, value in (
            ("window", self.window),
            ("penalty", self.penalty),
            ("threshold", self.threshold),
            ("k", self.k),
        ):
            if value == "cv":
                names.append(name)
        return tuple(names)

    def fixed_measure(self) -> MeasureSpec:
        """The measure with all parameters fixed; fails if any is 'cv'."""
        if any(v == "cv" for v in (self.window, self.penalty, self.threshold)):
            raise ConfigError(f"{self.ident}: measure parameters not resolved")
        return MeasureSpec(
            kind=self.kind,
            window=self.window,
            penalty=self.penalty,
            threshold=self.threshold,
        )


@dataclass(frozen=True)
class DatasetEntry:
    name: str
    train_path: Path
    test_path: Path


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple[DatasetEntry, ...]
    classifiers: tuple[ClassifierDirective, ...]
    out_dir: Path = Path("results")
    normalize: bool = False
    seed: int = 0
    workers: int = 1
    cache_dir: Path | None = None
    window_grid: tuple[float, ...] | None = None
    k_grid: tuple[int, ...] | None = None
    penalty_grid: tuple[float, ...] | None = None
    threshold_grid: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("no datasets configured")
        if not self.classifiers:
            raise ConfigError("no classifiers configured")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        names = [d.name for d in self.datasets]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate dataset names")
        idents = [c.ident for c in self.classifiers]
        if len(set(idents)) != len(idents):
            raise ConfigError("duplicate classifier identifiers")

    def override(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


def _grid(raw: str, name: str, as_int: bool = False) -> tuple:
    values = []
    for token in raw.replace(",", " ").split():
        try:
            values.append(int(token) if as_int else float(token))
        except ValueError:
            raise ConfigError(f"{name}: bad grid value {token!r}") from None
    if not values:
        raise ConfigError(f"{name}: empty grid")
    return tuple(values)


def load_config(path) -> ExperimentConfig:
    """Parse an experiment configuration file."""
    path = Path(path)
    parser = configparser.ConfigParser()
    try:
        with path.open() as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    datasets = []
    classifiers = []
    run: dict[str, str] = {}
    for section in parser.sections():
        options = dict(parser.items(section))
        if section == "run":
            run = options
        elif section.startswith("dataset "):
            name = section[len("dataset "):].strip()
            if "train" not in options or "test" not in options:
                raise ConfigError(f"dataset {name}: needs 'train' and 'test' paths")
            base = path.parent
            datasets.append(
                DatasetEntry(
                    name=name,
                    train_path=base / options["train"],
                    test_path=base / options["test"],
                )
            )
        elif section.startswith("classifier "):
            ident = section[len("classifier "):].strip()
            classifiers.append(ClassifierDirective.from_options(ident, options))
        else:
            raise ConfigError(f"unknown section [{section}]")

    known_run = {
        "out", "seed", "workers", "normalize", "cache_dir",
        "grid_r", "grid_k", "grid_g", "grid_eps",
    }
    unknown = set(run) - known_run
    if unknown:
        raise ConfigError(f"[run]: unknown option(s) {sorted(unknown)}")

    base = path.parent
    return ExperimentConfig(
        datasets=tuple(datasets),
        classifiers=tuple(classifiers),
        out_dir=base / run.get("out", "results"),
        normalize=run.get("normalize", "false").strip().lower() in ("1", "true", "yes", "on"),
        seed=int(run.get("seed", "0")),
        workers=int(run.get("workers", "1")),
        cache_dir=(base / run["cache_dir"]) if "cache_dir" in run else None,
        window_grid=_grid(run["grid_r"], "grid_r") if "grid_r" in run else None,
        k_grid=_grid(run["grid_k"], "grid_k", as_int=True) if "grid_k" in run else None,
        penalty_grid=_grid(run["grid_g"], "grid_g") if "grid_g" in run else None,
        threshold_grid=_grid(run["grid_eps"], "grid_eps") if "grid_eps" in run else None,
    )
