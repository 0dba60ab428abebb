"""Compiled dynamic-programming kernels shared by the distance measures.

All kernels are pure functions over float64 arrays, release the GIL and are
cached to disk so worker threads and fresh processes skip recompilation.
The squared-difference accumulation order is identical across kernels: the
band-0 DTW recursion therefore reproduces the squared Euclidean sum bit for
bit, and zero-penalty weighting reproduces exactly half the unweighted cost.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_JIT = {"cache": True, "nogil": True}

# Measure codes used by the pairwise drivers.
SQUARED_EUCLIDEAN = 0
DTW = 1
WDTW = 2
LCSS = 3


@njit(**_JIT)
def squared_euclidean(a, b):
    total = 0.0
    for i in range(a.shape[0]):
        diff = a[i] - b[i]
        total = total + diff * diff
    return total


@njit(**_JIT)
def dtw(a, b, band):
    m = a.shape[0]
    prev = np.full(m, np.inf)
    cur = np.full(m, np.inf)
    for i in range(m):
        lo = i - band
        if lo < 0:
            lo = 0
        hi = i + band
        if hi > m - 1:
            hi = m - 1
        for j in range(m):
            cur[j] = np.inf
        for j in range(lo, hi + 1):
            diff = a[i] - b[j]
            cost = diff * diff
            if i == 0 and j == 0:
                cur[j] = cost
            else:
                best = np.inf
                if i > 0 and prev[j] < best:
                    best = prev[j]
                if i > 0 and j > 0 and prev[j - 1] < best:
                    best = prev[j - 1]
                if j > 0 and cur[j - 1] < best:
                    best = cur[j - 1]
                cur[j] = cost + best
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m - 1]


@njit(**_JIT)
def dtw_cumulative(a, b, band):
    """Full cumulative-cost grid (cells outside the band stay +inf)."""
    m = a.shape[0]
    grid = np.full((m, m), np.inf)
    for i in range(m):
        lo = i - band
        if lo < 0:
            lo = 0
        hi = i + band
        if hi > m - 1:
            hi = m - 1
        for j in range(lo, hi + 1):
            diff = a[i] - b[j]
            cost = diff * diff
            if i == 0 and j == 0:
                grid[i, j] = cost
            else:
                best = np.inf
                if i > 0 and grid[i - 1, j] < best:
                    best = grid[i - 1, j]
                if i > 0 and j > 0 and grid[i - 1, j - 1] < best:
                    best = grid[i - 1, j - 1]
                if j > 0 and grid[i, j - 1] < best:
                    best = grid[i, j - 1]
                grid[i, j] = cost + best
    return grid


@njit(**_JIT)
def wdtw(a, b, weights):
    """Full-window DTW over costs scaled by weights[|i - j|]."""
    m = a.shape[0]
    prev = np.full(m, np.inf)
    cur = np.full(m, np.inf)
    for i in range(m):
        for j in range(m):
            diff = a[i] - b[j]
            disp = i - j
            if disp < 0:
                disp = -disp
            cost = weights[disp] * (diff * diff)
            if i == 0 and j == 0:
                cur[j] = cost
            else:
                best = np.inf
                if i > 0 and prev[j] < best:
                    best = prev[j]
                if i > 0 and j > 0 and prev[j - 1] < best:
                    best = prev[j - 1]
                if j > 0 and cur[j - 1] < best:
                    best = cur[j - 1]
                cur[j] = cost + best
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m - 1]


@njit(**_JIT)
def lcss_length(a, b, threshold):
    """Longest common subsequence length with |a_i - b_j| <= threshold matches."""
    m = a.shape[0]
    below = np.zeros(m + 1, dtype=np.int64)  # row i+1 of the suffix table
    cur = np.zeros(m + 1, dtype=np.int64)
    for i in range(m - 1, -1, -1):
        for j in range(m + 1):
            cur[j] = 0
        for j in range(m - 1, -1, -1):
            best = below[j + 1]
            diff = a[i] - b[j]
            if diff < 0:
                diff = -diff
            if diff <= threshold:
                best = best + 1
            elif cur[j + 1] > best:
                best = cur[j + 1]
            elif below[j] > best:
                best = below[j]
            cur[j] = best
        tmp = below
        below = cur
        cur = tmp
    return below[0]


@njit(**_JIT)
def pair_distance(a, b, code, band, weights, threshold):
    if code == 0:
        return squared_euclidean(a, b)
    if code == 1:
        return dtw(a, b, band)
    if code == 2:
        return wdtw(a, b, weights)
    # LCSS: normalized complement of the match count. Computed as
    # (m - length) / m so decimal anchors like 0.3 come out exact.
    m = a.shape[0]
    length = lcss_length(a, b, threshold)
    return (m - length) / m


@njit(**_JIT)
def self_distance_matrix(values, code, band, weights, threshold):
    n = values.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = pair_distance(values[i], values[j], code, band, weights, threshold)
            out[i, j] = d
            out[j, i] = d
    return out


@njit(**_JIT)
def cross_distance_matrix(queries, references, code, band, weights, threshold):
    nq = queries.shape[0]
    nr = references.shape[0]
    out = np.zeros((nq, nr))
    for i in range(nq):
        for j in range(nr):
            out[i, j] = pair_distance(
                queries[i], references[j], code, band, weights, threshold
            )
    return out


def warm_up():
    """Force compilation of every kernel (first call in a process is slow)."""
    a = np.array([0.0, 1.0, 2.0])
    b = np.array([0.0, 1.0, 1.0])
    w = np.full(3, 0.5)
    squared_euclidean(a, b)
    dtw(a, b, 1)
    dtw_cumulative(a, b, 3)
    wdtw(a, b, w)
    lcss_length(a, b, 0.0)
    x = np.stack((a, b))
    self_distance_matrix(x, DTW, 3, w, 0.0)
    cross_distance_matrix(x, x, LCSS, 0, w, 0.5)
