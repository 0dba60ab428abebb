"""Independent reference implementations the tests check the library against.

Nothing in here shares code with the package's computation paths: paths are
enumerated explicitly, LCS is the plain exponential recursion, k-NN is a full
sort, the Wilcoxon tail is a literal walk over all 2^n sign assignments and
the t/normal tails come from scipy.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

_STEPS = ((1, 1), (1, 0), (0, 1))


@lru_cache(maxsize=None)
def all_warping_paths(length: int, band: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Every monotone path (0,0) -> (m-1,m-1) within the band (0-based)."""
    results: list[tuple[tuple[int, int], ...]] = []
    path = [(0, 0)]

    def extend(i: int, j: int) -> None:
        if i == length - 1 and j == length - 1:
            results.append(tuple(path))
            return
        for di, dj in _STEPS:
            ni, nj = i + di, j + dj
            if ni < length and nj < length and abs(ni - nj) <= band:
                path.append((ni, nj))
                extend(ni, nj)
                path.pop()

    extend(0, 0)
    return tuple(results)


@lru_cache(maxsize=None)
def _packed_paths(length: int, band: int):
    paths = all_warping_paths(length, band)
    flat_e = np.array([e for p in paths for e, _ in p], dtype=np.intp)
    flat_f = np.array([f for p in paths for _, f in p], dtype=np.intp)
    offsets = np.zeros(len(paths), dtype=np.intp)
    pos = 0
    for idx, p in enumerate(paths):
        offsets[idx] = pos
        pos += len(p)
    return flat_e, flat_f, offsets


def brute_force_dtw(a, b, band: int) -> float:
    """Minimum path cost over the explicit enumeration of all valid paths."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    flat_e, flat_f, offsets = _packed_paths(a.shape[0], band)
    costs = (a[flat_e] - b[flat_f]) ** 2
    return float(np.add.reduceat(costs, offsets).min())


def brute_force_wdtw(a, b, penalty: float) -> float:
    """Enumerated minimum over full-window paths with logistic-weighted costs."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m = a.shape[0]
    flat_e, flat_f, offsets = _packed_paths(m, m)
    weights = np.array(
        [1.0 / (1.0 + math.exp(-penalty * (d - m / 2))) for d in range(m)]
    )
    costs = weights[np.abs(flat_e - flat_f)] * (a[flat_e] - b[flat_f]) ** 2
    return float(np.add.reduceat(costs, offsets).min())


def naive_lcs_length(a, b, threshold: float) -> int:
    """Textbook exponential recursion for the longest common subsequence."""
    a = list(a)
    b = list(b)

    def rec(i: int, j: int) -> int:
        if i == len(a) or j == len(b):
            return 0
        if abs(a[i] - b[j]) <= threshold:
            return 1 + rec(i + 1, j + 1)
        return max(rec(i + 1, j), rec(i, j + 1))

    return rec(0, 0)


def naive_knn_predict(distances, labels, k: int):
    """Full sort of all distances, majority vote, documented tie rules."""
    order = sorted(range(len(labels)), key=lambda j: (distances[j], j))
    chosen = order[:k]
    counts: dict = {}
    for j in chosen:
        counts[labels[j]] = counts.get(labels[j], 0) + 1
    top = max(counts.values())
    for j in chosen:
        if counts[labels[j]] == top:
            return labels[j]
    raise AssertionError("unreachable")


def rank_magnitudes(values) -> list[float]:
    """Average ranks of |values|, built from a plain sort."""
    magnitudes = [abs(v) for v in values]
    order = sorted(range(len(magnitudes)), key=lambda i: magnitudes[i])
    ranks = [0.0] * len(magnitudes)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and magnitudes[order[j + 1]] == magnitudes[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for t in range(i, j + 1):
            ranks[order[t]] = mean_rank
        i = j + 1
    return ranks


def wilcoxon_enumerated_p(differences, alternative: str = "two-sided") -> float:
    """Two-sided (or one-sided) exact p by walking all 2^n sign assignments."""
    diffs = [float(d) for d in differences if d != 0.0]
    ranks = rank_magnitudes(diffs)
    total = sum(ranks)
    observed = sum(r for r, d in zip(ranks, diffs) if d > 0)
    count = 0
    n = len(diffs)
    # Ranks are dyadic rationals (multiples of 0.5), so all comparisons are
    # float-exact: no tolerance needed.
    for signs in itertools.product((1, -1), repeat=n):
        t = sum(r for r, s in zip(ranks, signs) if s > 0)
        if alternative == "two-sided":
            if abs(t - total / 2) >= abs(observed - total / 2):
                count += 1
        elif alternative == "greater":
            if t >= observed:
                count += 1
        else:
            if t <= observed:
                count += 1
    return count / 2**n


def t_two_sided_p(t: float, dof: int) -> float:
    """Two-sided t-tail via scipy's incomplete-beta based distribution."""
    from scipy import stats as sps

    return float(2.0 * sps.t.sf(abs(t), dof))
