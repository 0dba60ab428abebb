"""Seeded two-class synthetic generators for desk-scale experiments.

Both classes share a high-energy comb of three square pulses; they differ
only in the pulse height ordering (tall-to-short vs short-to-tall), which no
order-preserving alignment can undo. The time axis is then disturbed:

* ``phase-shift``: each instance is circularly shifted by a random real
  offset up to ``shift_max`` (linear interpolation between samples) — index
  noise that a windowed elastic measure can mostly undo, while a lock-step
  measure pays the full misalignment cost of the pulse edges.
* ``warp-noise``: each instance is resampled through a random monotone warp
  of the index axis, blended with the identity by ``warp_strength``.

Observation noise is additive Gaussian in both cases. The same seed and
parameters always reproduce bit-identical datasets.
"""

from __future__ import annotations

import numpy as np

from ..core import LabeledDataset, TimeSeries

KINDS = ("phase-shift", "warp-noise")

_PULSE_SPANS = ((0.10, 0.25), (0.40, 0.55), (0.70, 0.85))
_PULSE_BASE = 2.0
_PULSE_STEP = 0.2


def class_shapes(length: int) -> tuple[np.ndarray, np.ndarray]:
    """Base curves: the same three-pulse comb with opposite height ordering."""

    def build(heights):
        shape = np.zeros(length)
        for (lo, hi), height in zip(_PULSE_SPANS, heights):
            start = int(lo * length)
            stop = max(int(hi * length), start + 1)
            shape[start:stop] = height
        return shape

    descending = (_PULSE_BASE + _PULSE_STEP, _PULSE_BASE, _PULSE_BASE - _PULSE_STEP)
    return build(descending), build(descending[::-1])


def _phase_shift_instance(base, shift_max, noise, rng):
    m = base.shape[0]
    shift = float(rng.uniform(-shift_max, shift_max))
    grid = np.arange(m + 1, dtype=np.float64)
    extended = np.append(base, base[0])  # circular: position m wraps to 0
    values = np.interp((np.arange(m) - shift) % m, grid, extended)
    return values + noise * rng.standard_normal(m)


def _warp_instance(base, warp_strength, noise, rng):
    m = base.shape[0]
    increments = rng.exponential(1.0, m)
    positions = np.cumsum(increments)
    positions = (positions - positions[0]) / (positions[-1] - positions[0]) * (m - 1)
    identity = np.arange(m, dtype=np.float64)
    warped = (1.0 - warp_strength) * identity + warp_strength * positions
    return np.interp(warped, identity, base) + noise * rng.standard_normal(m)


def generate_synthetic(
    kind: str = "phase-shift",
    length: int = 20,
    shift_max: float = 2.0,
    noise: float = 0.1,
    warp_strength: float = 0.3,
    train_size: int = 50,
    test_size: int = 50,
    seed: int = 0,
    name: str | None = None,
) -> tuple[LabeledDataset, LabeledDataset]:
    """Build seeded train and test splits with alternating class labels."""
    if kind not in KINDS:
        raise ValueError(f"unknown synthetic kind {kind!r} (use one of {KINDS})")
    if length < 4:
        raise ValueError(f"length must be at least 4, got {length}")
    if train_size < 2 or test_size < 2:
        raise ValueError("train and test sizes must each be at least 2")
    if shift_max < 0 or noise < 0 or not 0.0 <= warp_strength <= 1.0:
        raise ValueError("shift_max and noise must be >= 0, warp_strength in [0, 1]")

    shapes = class_shapes(length)
    rng = np.random.default_rng(seed)
    if name is None:
        name = f"{kind}-{seed}"

    def build(role: str, size: int) -> LabeledDataset:
        instances = []
        for i in range(size):
            label = str(i % 2)
            base = shapes[i % 2]
            if kind == "phase-shift":
                values = _phase_shift_instance(base, shift_max, noise, rng)
            else:
                values = _warp_instance(base, warp_strength, noise, rng)
            instances.append((TimeSeries(values), label))
        return LabeledDataset.from_instances(name=name, role=role, instances=instances)

    return build("train", train_size), build("test", test_size)
