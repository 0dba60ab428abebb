"""Reading and writing label-first time series files.

One instance per nonempty line; the first field is the class label and the
remaining fields are the observations. Comma and whitespace delimiters are
auto-detected from the first data line unless forced.
"""

from __future__ import annotations

import math
from pathlib import Path

from ..core import LabeledDataset, TimeSeries


class DatasetError(ValueError):
    """A dataset file could not be parsed."""


def _split(line: str, delimiter: str | None) -> list[str]:
    if delimiter is None or delimiter == "whitespace":
        return line.split()
    return [field.strip() for field in line.split(delimiter)]


def parse_dataset(
    path,
    role: str = "train",
    name: str | None = None,
    delimiter: str | None = None,
    label_last: bool = False,
    normalize: bool = False,
) -> LabeledDataset:
    """Load a labelled dataset from a text file.

    `delimiter` forces "," or "whitespace"; by default the first data line
    decides. Labels are kept as string tokens. Raises `DatasetError` with a
    line number on ragged rows, non-numeric or non-finite values, or an empty
    file.
    """
    path = Path(path)
    if name is None:
        name = path.stem
    try:
        text = path.read_text()
    except OSError as exc:
        raise DatasetError(f"{path}: {exc}") from exc

    numbered = [(i, line) for i, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if not numbered:
        raise DatasetError(f"{path}: file contains no data lines")
    if delimiter is None:
        delimiter = "," if "," in numbered[0][1] else "whitespace"
    elif delimiter not in (",", "whitespace"):
        raise ValueError(f"delimiter must be ',' or 'whitespace', got {delimiter!r}")

    instances = []
    width = None
    for lineno, line in numbered:
        fields = _split(line, delimiter)
        if width is None:
            width = len(fields)
            if width < 2:
                raise DatasetError(
                    f"{path}:{lineno}: need a label and at least one value, got {width} field(s)"
                )
        elif len(fields) != width:
            raise DatasetError(
                f"{path}:{lineno}: expected {width} fields but found {len(fields)}"
            )
        if label_last:
            label, value_fields = fields[-1], fields[:-1]
        else:
            label, value_fields = fields[0], fields[1:]
        values = []
        for field in value_fields:
            try:
                value = float(field)
            except ValueError:
                raise DatasetError(f"{path}:{lineno}: non-numeric value {field!r}") from None
            if not math.isfinite(value):
                raise DatasetError(f"{path}:{lineno}: non-finite value {field!r}")
            values.append(value)
        instances.append((TimeSeries(values), label))

    dataset = LabeledDataset.from_instances(name=name, role=role, instances=instances)
    return dataset.normalized() if normalize else dataset


def write_dataset(dataset: LabeledDataset, path, delimiter: str = ",") -> Path:
    """Write a dataset in the label-first format; floats round-trip exactly."""
    path = Path(path)
    sep = delimiter if delimiter == "," else " "
    lines = []
    for series, label in dataset:
        lines.append(sep.join([str(label)] + [repr(float(v)) for v in series.values]))
    path.write_text("\n".join(lines) + "\n")
    return path
