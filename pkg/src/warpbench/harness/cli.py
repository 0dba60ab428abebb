"""Command-line interface.

Subcommands: ``dist`` (one pair, one measure), ``classify`` (train/test
evaluation), ``tune`` (training-set parameter search), ``bench`` (config
file driven experiment matrix), ``stats`` (accuracy CSV analysis), ``plot``
(SVG figures) and ``synth`` (seeded synthetic datasets).

Exit codes: 0 success, 1 usage error, 2 data error, 3 partial bench failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..classify import KnnSpec, evaluate
from ..core import MeasureKind, MeasureSpec
from ..measures import pair_distance
from ..stats import (
    AccuracyTable,
    average_ranks,
    friedman_statistic,
    mean_median_improvement,
    nemenyi_cd,
)
from ..tune import ParamGrid, tune_k, tune_penalty, tune_threshold, tune_window
from .cache import DiskMatrixCache
from .config import ConfigError, load_config
from .datasets import DatasetError, parse_dataset, write_dataset
from .runner import run_experiment
from .svg import emit_cd_diagram, emit_histogram, emit_scatter_regression
from .synthetic import KINDS, generate_synthetic

USAGE_ERROR = 1
DATA_ERROR = 2
PARTIAL_FAILURE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        raise UsageError(message)


def _add_measure_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--measure",
        required=True,
        choices=[kind.value for kind in MeasureKind],
        help="distance measure",
    )
    parser.add_argument("--r", type=float, help="warping window fraction (dtw/ddtw)")
    parser.add_argument("--g", type=float, help="weight penalty (wdtw/wddtw)")
    parser.add_argument("--eps", type=float, help="match threshold (lcss)")


def _measure_from_args(args) -> MeasureSpec:
    kind = MeasureKind.from_name(args.measure)
    try:
        if kind in (MeasureKind.DTW, MeasureKind.DDTW):
            return MeasureSpec(kind, window=args.r if args.r is not None else 1.0)
        if kind in (MeasureKind.WDTW, MeasureKind.WDDTW):
            if args.g is None:
                raise UsageError(f"--measure {kind.value} requires --g")
            return MeasureSpec(kind, penalty=args.g)
        if kind is MeasureKind.LCSS:
            if args.eps is None:
                raise UsageError("--measure lcss requires --eps")
            return MeasureSpec(kind, threshold=args.eps)
        return MeasureSpec(kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _grid_flag(raw: str | None, as_int: bool = False) -> ParamGrid | None:
    if raw is None:
        return None
    tokens = raw.replace(",", " ").split()
    try:
        values = tuple(int(t) if as_int else float(t) for t in tokens)
        return ParamGrid(values)
    except ValueError as exc:
        raise UsageError(f"bad grid: {exc}") from None


def build_parser() -> _Parser:
    parser = _Parser(prog="warpbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance between two instances of a dataset file")
    p.add_argument("data", help="dataset file")
    p.add_argument("--i", type=int, default=0, help="first instance index")
    p.add_argument("--j", type=int, default=1, help="second instance index")
    p.add_argument("--normalize", action="store_true")
    _add_measure_flags(p)

    p = sub.add_parser("classify", help="train/test evaluation of a k-NN classifier")
    p.add_argument("train")
    p.add_argument("test")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--out", help="write per-instance predictions to this CSV")
    _add_measure_flags(p)

    p = sub.add_parser("tune", help="LOOCV parameter search on a training file")
    p.add_argument("train")
    p.add_argument(
        "--param",
        choices=["auto", "window", "penalty", "threshold", "k"],
        default="auto",
        help="parameter to tune (auto picks the measure's own parameter)",
    )
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--grid-r", help="window grid, comma separated")
    p.add_argument("--grid-k", help="k grid, comma separated")
    p.add_argument("--grid-g", help="penalty grid, comma separated")
    p.add_argument("--grid-eps", help="threshold grid, comma separated")
    p.add_argument("--cache-dir", help="distance matrix cache directory")
    _add_measure_flags(p)

    p = sub.add_parser("bench", help="run a config-driven experiment matrix")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--cache-dir")
    p.add_argument("--normalize", action="store_true", default=None)

    p = sub.add_parser("stats", help="rank/test analysis of an accuracy CSV")
    p.add_argument("csv")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--baseline", help="compare every classifier against this one only")

    p = sub.add_parser("plot", help="emit SVG figures")
    plot_sub = p.add_subparsers(dest="figure", required=True)

    pc = plot_sub.add_parser("cd", help="critical-difference diagram from an accuracy CSV")
    pc.add_argument("csv")
    pc.add_argument("--alpha", type=float, default=0.05)
    pc.add_argument("--out", required=True)

    ph = plot_sub.add_parser("hist", help="histogram of paired accuracy improvements")
    ph.add_argument("csv")
    ph.add_argument("--before", required=True, help="baseline classifier column")
    ph.add_argument("--after", required=True, help="improved classifier column")
    ph.add_argument("--bin-width", type=float, default=1.0)
    ph.add_argument("--origin", type=float, default=0.0)
    ph.add_argument("--scale", type=float, default=100.0, help="difference multiplier")
    ph.add_argument("--out", required=True)

    ps = plot_sub.add_parser("scatter", help="scatter + regression from a two-column CSV")
    ps.add_argument("points", help="CSV of x,y pairs (header allowed)")
    ps.add_argument("--out", required=True)

    p = sub.add_parser("synth", help="generate seeded synthetic train/test files")
    p.add_argument("--kind", choices=list(KINDS), default="phase-shift")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--length", type=int, default=20)
    p.add_argument("--shift-max", type=float, default=2.0)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--warp-strength", type=float, default=0.3)
    p.add_argument("--train-size", type=int, default=50)
    p.add_argument("--test-size", type=int, default=50)

    return parser


def _cmd_dist(args) -> int:
    measure = _measure_from_args(args)
    data = parse_dataset(args.data, normalize=args.normalize)
    n = len(data)
    if not (0 <= args.i < n and 0 <= args.j < n):
        raise DatasetError(f"instance index out of range (dataset has {n} instances)")
    value = pair_distance(data.series[args.i], data.series[args.j], measure)
    print(f"{value!r}")
    return 0


def _cmd_classify(args) -> int:
    measure = _measure_from_args(args)
    if args.k < 1:
        raise UsageError(f"--k must be >= 1, got {args.k}")
    train = parse_dataset(args.train, role="train", normalize=args.normalize)
    test = parse_dataset(args.test, role="test", normalize=args.normalize)
    try:
        accuracy, predictions = evaluate(train, test, KnnSpec(measure=measure, k=args.k))
    except ValueError as exc:
        raise DatasetError(str(exc)) from None
    print(f"accuracy {accuracy:.6f} ({sum(p.correct for p in predictions)}/{len(predictions)})")
    if args.out:
        lines = ["index,predicted,actual"]
        lines += [f"{p.index},{p.predicted},{p.actual}" for p in predictions]
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"predictions written to {args.out}")
    return 0


def _cmd_tune(args) -> int:
    measure_kind = MeasureKind.from_name(args.measure)
    train = parse_dataset(args.train, role="train", normalize=args.normalize)
    cache = DiskMatrixCache(args.cache_dir) if args.cache_dir else None
    param = args.param
    if param == "auto":
        param = {
            MeasureKind.DTW: "window",
            MeasureKind.DDTW: "window",
            MeasureKind.WDTW: "penalty",
            MeasureKind.WDDTW: "penalty",
            MeasureKind.LCSS: "threshold",
            MeasureKind.SQUARED_EUCLIDEAN: "k",
        }[measure_kind]
    try:
        if param == "window":
            if measure_kind not in (MeasureKind.DTW, MeasureKind.DDTW):
                raise UsageError(f"cannot tune a window for {measure_kind.value}")
            result = tune_window(
                train,
                grid=_grid_flag(args.grid_r),
                derivative=measure_kind is MeasureKind.DDTW,
                cache=cache,
            )
        elif param == "penalty":
            if measure_kind not in (MeasureKind.WDTW, MeasureKind.WDDTW):
                raise UsageError(f"cannot tune a penalty for {measure_kind.value}")
            result = tune_penalty(
                train,
                grid=_grid_flag(args.grid_g),
                derivative=measure_kind is MeasureKind.WDDTW,
                cache=cache,
            )
        elif param == "threshold":
            if measure_kind is not MeasureKind.LCSS:
                raise UsageError(f"cannot tune a threshold for {measure_kind.value}")
            result = tune_threshold(train, grid=_grid_flag(args.grid_eps), cache=cache)
        else:  # k over a fully fixed measure
            result = tune_k(
                train,
                _measure_from_args(args),
                grid=_grid_flag(args.grid_k, as_int=True),
                cache=cache,
            )
    except ValueError as exc:
        raise DatasetError(str(exc)) from None
    print(f"parameter {result.parameter}")
    print(f"best {result.best!r} (loocv accuracy {result.best_accuracy:.6f})")
    for value, accuracy in zip(result.grid.values, result.accuracies):
        print(f"  {value!r}\t{accuracy:.6f}")
    return 0


def _cmd_bench(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    overrides = {}
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = Path(args.out)
    if args.cache_dir is not None:
        overrides["cache_dir"] = Path(args.cache_dir)
    if args.normalize is not None:
        overrides["normalize"] = True
    if overrides:
        config = config.override(**overrides)
    result = run_experiment(config)
    for record in result.records:
        print(
            f"{record.dataset}\t{record.classifier}\t{record.test_accuracy:.6f}"
            f"\t{record.seconds:.2f}s"
        )
    print(f"{len(result.records)} records written to {result.out_dir}")
    if result.failures:
        for failure in result.failures:
            cell = failure.dataset if failure.classifier is None else (
                f"{failure.dataset}/{failure.classifier}"
            )
            print(f"FAILED {cell}: {failure.error}", file=sys.stderr)
        return PARTIAL_FAILURE
    return 0


def _cmd_stats(args) -> int:
    table = AccuracyTable.from_csv(args.csv)
    summary = average_ranks(table)
    print("average ranks:")
    order = sorted(range(len(table.classifiers)), key=lambda i: summary.average_ranks[i])
    for i in order:
        print(f"  {table.classifiers[i]}\t{summary.average_ranks[i]:.4f}")
    print(f"friedman statistic {friedman_statistic(table):.4f}")
    if 2 <= len(table.classifiers) <= 20:
        cd = nemenyi_cd(len(table.classifiers), len(table.datasets), args.alpha)
        print(f"critical difference {cd:.4f} (alpha={args.alpha})")
    if args.baseline:
        pairs = [(args.baseline, c) for c in table.classifiers if c != args.baseline]
    else:
        pairs = [
            (a, b)
            for idx, a in enumerate(table.classifiers)
            for b in table.classifiers[idx + 1 :]
        ]
    print("paired comparisons (after vs before):")
    for before, after in pairs:
        try:
            summary = mean_median_improvement(table.column(before), table.column(after))
        except ValueError as exc:
            print(f"  {after} - {before}: n/a ({exc})")
            continue
        flags = "degenerate" if summary.t_test.degenerate or summary.wilcoxon.degenerate else ""
        print(
            f"  {after} - {before}: mean {summary.mean_diff:+.4f} "
            f"median {summary.median_diff:+.4f} "
            f"t-p {summary.t_test.p_value:.4f} wilcoxon-p {summary.wilcoxon.p_value:.4f} {flags}".rstrip()
        )
    return 0


def _parse_points(path: str) -> tuple[list[float], list[float]]:
    xs, ys = [], []
    lines = [line for line in Path(path).read_text().splitlines() if line.strip()]
    if not lines:
        raise DatasetError(f"{path}: no data")
    for lineno, line in enumerate(lines, start=1):
        fields = line.replace(",", " ").split()
        if len(fields) != 2:
            raise DatasetError(f"{path}:{lineno}: expected two columns")
        try:
            x, y = float(fields[0]), float(fields[1])
        except ValueError:
            if lineno == 1:
                continue  # header row
            raise DatasetError(f"{path}:{lineno}: non-numeric point") from None
        xs.append(x)
        ys.append(y)
    if not xs:
        raise DatasetError(f"{path}: no numeric points")
    return xs, ys


def _cmd_plot(args) -> int:
    if args.figure == "cd":
        table = AccuracyTable.from_csv(args.csv)
        summary = average_ranks(table)
        cd = nemenyi_cd(len(table.classifiers), len(table.datasets), args.alpha)
        path = emit_cd_diagram(summary.with_critical_difference(cd), args.out)
    elif args.figure == "hist":
        table = AccuracyTable.from_csv(args.csv)
        diffs = (table.column(args.after) - table.column(args.before)) * args.scale
        path = emit_histogram(diffs, args.bin_width, args.out, origin=args.origin)
    else:
        xs, ys = _parse_points(args.points)
        path = emit_scatter_regression(xs, ys, args.out)
    print(f"figure written to {path}")
    return 0


def _cmd_synth(args) -> int:
    try:
        train, test = generate_synthetic(
            kind=args.kind,
            length=args.length,
            shift_max=args.shift_max,
            noise=args.noise,
            warp_strength=args.warp_strength,
            train_size=args.train_size,
            test_size=args.test_size,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    train_path = write_dataset(train, out_dir / f"{train.name}_TRAIN.txt")
    test_path = write_dataset(test, out_dir / f"{test.name}_TEST.txt")
    print(train_path)
    print(test_path)
    return 0


_COMMANDS = {
    "dist": _cmd_dist,
    "classify": _cmd_classify,
    "tune": _cmd_tune,
    "bench": _cmd_bench,
    "stats": _cmd_stats,
    "plot": _cmd_plot,
    "synth": _cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (DatasetError, FileNotFoundError, KeyError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
