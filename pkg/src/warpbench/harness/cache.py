"""Advisory on-disk cache for training-set distance matrices.

Files are keyed by a content hash of the dataset values, labels and the
measure identifier, so a stale or foreign file can never be mistaken for a
hit: the header repeats the hash and is validated on read. Corrupt or
unreadable entries are treated as misses.
"""

from __future__ import annotations

import hashlib
import os
import threading
from pathlib import Path

import numpy as np

from ..core import LabeledDataset, MeasureKind, MeasureSpec


def _measure_fields(measure: MeasureSpec) -> tuple[str, str]:
    kind = measure.kind
    if kind in (MeasureKind.DTW, MeasureKind.DDTW):
        return kind.value, f"window={measure.window!r}"
    if kind in (MeasureKind.WDTW, MeasureKind.WDDTW):
        return kind.value, f"penalty={measure.penalty!r}"
    if kind is MeasureKind.LCSS:
        return kind.value, f"threshold={measure.threshold!r}"
    return kind.value, "-"


def content_key(train: LabeledDataset, measure: MeasureSpec) -> str:
    digest = hashlib.sha256()
    digest.update(train.values.tobytes())
    digest.update(repr(train.labels).encode())
    digest.update(measure.identifier().encode())
    return digest.hexdigest()


class DiskMatrixCache:
    """Matrix files: header ``m n measure-id params hash`` then n rows of n decimals."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.dmat"

    def get(self, train: LabeledDataset, measure: MeasureSpec) -> np.ndarray | None:
        key = content_key(train, measure)
        path = self._path(key)
        try:
            lines = path.read_text().splitlines()
            header = lines[0].split()
            m, n = int(header[0]), int(header[1])
            if header[4] != key or n != len(train) or m != train.series_length:
                return None
            matrix = np.array(
                [[float(v) for v in line.split()] for line in lines[1 : n + 1]]
            )
            if matrix.shape != (n, n):
                return None
            return matrix
        except (OSError, IndexError, ValueError):
            return None

    def put(self, train: LabeledDataset, measure: MeasureSpec, matrix: np.ndarray) -> None:
        key = content_key(train, measure)
        measure_id, params = _measure_fields(measure)
        n = len(train)
        lines = [f"{train.series_length} {n} {measure_id} {params} {key}"]
        for row in np.asarray(matrix):
            lines.append(" ".join(repr(float(v)) for v in row))
        # Atomic replace so concurrent workers never observe torn files.
        final = self._path(key)
        tmp = final.with_suffix(f".tmp.{os.getpid()}.{threading.get_ident()}")
        tmp.write_text("\n".join(lines) + "\n")
        tmp.replace(final)
