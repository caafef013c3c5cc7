"""Compiled inner loops for the Monte Carlo paths.

Every kernel here has a pure-Python counterpart elsewhere in the package and
is tested against it.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _lower_bound(tails, size, x):
    lo, hi = 0, size
    while lo < hi:
        mid = (lo + hi) >> 1
        if tails[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def patience_length(cells, model):
    """Number of particles after sweeping all rows (= longest chain).

    ``tails`` holds the sorted particle positions; a cross at x moves the
    leftmost particle at or right of x onto x, or creates one.
    """
    m, n = cells.shape
    tails = np.empty(n, dtype=np.int64)
    size = 0
    for t in range(m):
        row = cells[t]
        if model == 1:
            for x in range(n - 1, -1, -1):
                if row[x]:
                    i = _lower_bound(tails, size, x)
                    tails[i] = x
                    if i == size:
                        size += 1
        else:
            for x in range(n):
                if row[x]:
                    i = _lower_bound(tails, size, x)
                    tails[i] = x
                    if i == size:
                        size += 1
    return size


@njit(cache=True)
def strict_lis_length(values):
    """Longest strictly increasing subsequence of a 1-d float array."""
    tails = np.empty(values.size, dtype=values.dtype)
    size = 0
    for v in values:
        i = _lower_bound(tails, size, v)
        tails[i] = v
        if i == size:
            size += 1
    return size


@njit(cache=True)
def quadrant_table(cells, model):
    """G[x, t] = longest chain using only crosses in [x, n] x [t, m] (1-based, padded)."""
    m, n = cells.shape
    g = np.zeros((n + 2, m + 2), dtype=np.int64)
    for x in range(n, 0, -1):
        for t in range(m, 0, -1):
            best = g[x + 1, t]
            if g[x, t + 1] > best:
                best = g[x, t + 1]
            if cells[t - 1, x - 1]:
                if model == 1:
                    cand = 1 + g[x + 1, t + 1]
                else:
                    cand = 1 + g[x + 1, t]
                if cand > best:
                    best = cand
            g[x, t] = best
    return g


@njit(cache=True)
def boundary_length(cells, sources, sinks, model):
    """Longest path picking a source run or a sink run, then interior crosses."""
    m, n = cells.shape
    g = quadrant_table(cells, model)
    best = g[1, 1]
    acc = 0
    for u in range(1, m + 1):
        acc += sinks[u - 1]
        if model == 1:
            cand = acc + g[1, u + 1]
        else:
            cand = acc + g[1, u]
        if cand > best:
            best = cand
    acc = 0
    for u in range(1, n + 1):
        acc += sources[u - 1]
        cand = acc + g[u + 1, 1]
        if cand > best:
            best = cand
    return best


@njit(cache=True)
def geometric_lpp_value(weights):
    """Max weight over up/right lattice paths from the first to the last cell."""
    m, n = weights.shape
    row = np.zeros(n, dtype=np.int64)
    for t in range(m):
        left = 0
        for x in range(n):
            up = row[x]
            best = up if up > left else left
            row[x] = best + weights[t, x]
            left = row[x]
    return row[n - 1]


@njit(cache=True)
def _act(occ, x):
    """Cross at 0-based site x (x = -1 is a sink: removes the leftmost particle)."""
    n = occ.size
    start = x if x >= 0 else 0
    for y in range(start, n):
        if occ[y]:
            occ[y] = 0
            if x >= 0:
                occ[x] = 1
            return 1
    if x >= 0:
        occ[x] = 1
    return 0


@njit(cache=True)
def evolve_counts(cells, sources, sinks, model):
    """Particle counts per time 0..m and the final occupancy."""
    m, n = cells.shape
    occ = sources.astype(np.uint8).copy()
    counts = np.empty(m + 1, dtype=np.int64)
    counts[0] = occ.sum()
    for t in range(m):
        row = cells[t]
        if model == 1:
            for x in range(n - 1, -1, -1):
                if row[x]:
                    _act(occ, x)
            for _ in range(sinks[t]):
                _act(occ, -1)
        else:
            for _ in range(sinks[t]):
                _act(occ, -1)
            for x in range(n):
                if row[x]:
                    _act(occ, x)
        counts[t + 1] = occ.sum()
    return counts, occ


@njit(cache=True)
def z_window_run(occ, crosses):
    """Apply T rows of crosses right-to-left to a walled window, in place."""
    steps, n = crosses.shape
    for s in range(steps):
        row = crosses[s]
        for x in range(n - 1, -1, -1):
            if row[x]:
                _act(occ, x)
    return occ


@njit(cache=True)
def coupled_trace(X, Y, row, k):
    """Apply one row of crosses (right to left) to both windows in place.

    Returns, per cross, its 0-based site and the discrepancy on the first k
    sites before and after it acts.
    """
    n = row.size
    delta = 0
    for i in range(k):
        if X[i] != Y[i]:
            delta += 1
    count = 0
    for x in range(n):
        if row[x]:
            count += 1
    out = np.empty((count, 3), dtype=np.int64)
    j = 0
    for x in range(n - 1, -1, -1):
        if row[x]:
            before = delta
            _act(X, x)
            _act(Y, x)
            delta = 0
            for i in range(k):
                if X[i] != Y[i]:
                    delta += 1
            out[j, 0] = x
            out[j, 1] = before
            out[j, 2] = delta
            j += 1
    return out


@njit(cache=True)
def first_value(table, x0, t0, r):
    """Smallest (t, x) with table[t, x] == r over t >= t0 and x0 <= x < width - 1."""
    rows, width = table.shape
    for t in range(t0, rows - 1):
        for x in range(x0, width - 1):
            if table[t, x] == r:
                return t, x
    return -1, -1
