"""The Model 1 dynamics on a finite window of Z and a coupled pair driven by common crosses.

A window holds sites 1..N; a permanent particle at site 0 (the wall) stands
in for the particles to the left. Crosses act from right to left with the
usual rule, so a cross with no particle at or right of it creates one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


def _window(state) -> np.ndarray:
    occ = np.array(state, dtype=np.uint8).ravel()
    if occ.size and occ.max() > 1:
        raise ValueError("window states are 0/1 vectors")
    return occ


def z_step(state, cross_row) -> np.ndarray:
    occ = _window(state)
    row = np.asarray(cross_row, dtype=np.uint8).ravel()
    if row.size != occ.size:
        raise ValueError(f"cross row has {row.size} sites, window has {occ.size}")
    return _kernels.z_window_run(occ, row[None, :])


@dataclass(frozen=True)
class CoupledPair:
    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X, Y = _window(self.X), _window(self.Y)
        if X.size != Y.size:
            raise ValueError("coupled windows must have the same size")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def N(self) -> int:
        return self.X.size


def coupled_step(pair: CoupledPair, cross_row) -> CoupledPair:
    """Both components see the same crosses."""
    return CoupledPair(z_step(pair.X, cross_row), z_step(pair.Y, cross_row))


def discrepancy(pair: CoupledPair, k: int) -> int:
    """Number of sites i in 1..k with X(i) != Y(i)."""
    if not 0 <= k <= pair.N:
        raise ValueError(f"k={k} outside [0, {pair.N}]")
    return int(np.count_nonzero(pair.X[:k] != pair.Y[:k]))


def _is_pattern(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # rows of a = (1, 0, ..., 0), rows of b = (0, ..., 0, 1)
    return (a[:, 0] == 1) & ~a[:, 1:].any(axis=1) & (b[:, -1] == 1) & ~b[:, :-1].any(axis=1)


def pattern_at(pair: CoupledPair, x: int, n: int) -> bool:
    """Forbidden pattern over sites x..x+n-1, in either orientation."""
    a, b = pair.X[x - 1:x - 1 + n], pair.Y[x - 1:x - 1 + n]
    if x < 1 or a.size < n:
        return False
    a, b = a[None, :], b[None, :]
    return bool(_is_pattern(a, b)[0] or _is_pattern(b, a)[0])


def event_e(cross_row, x: int, n: int) -> bool:
    """A cross at x and none at x+1..x+n-1."""
    row = np.asarray(cross_row).ravel()
    seg = row[x - 1:x - 1 + n]
    return seg.size == n and seg[0] == 1 and not seg[1:].any()


def forbidden_pattern_scan(pair: CoupledPair, n: int, cross_row, blocks: int | None = None):
    """Pattern locations among 1, 1+n, 1+2n, ... and how many of them see the event E.

    ``blocks`` limits the scan to the first ``blocks`` locations.
    """
    if n < 2:
        raise ValueError("pattern span n must be at least 2")
    count = (pair.N - n) // n + 1 if pair.N >= n else 0
    if blocks is not None:
        count = min(count, blocks)
    a = pair.X[:count * n].reshape(count, n)
    b = pair.Y[:count * n].reshape(count, n)
    mask = _is_pattern(a, b) | _is_pattern(b, a)
    found = (np.flatnonzero(mask) * n + 1).tolist()
    row = np.asarray(cross_row).ravel()
    hits = sum(1 for x in found if event_e(row, x, n))
    return found, hits


@dataclass(frozen=True)
class InequalityReport:
    n: int
    j: int
    delta_before: int
    delta_after: int
    patterns: tuple[int, ...]
    A: int

    @property
    def bound(self) -> int:
        return self.delta_before + 1 - 2 * self.A

    @property
    def holds(self) -> bool:
        return self.delta_after <= self.bound


def lemma_inequality_check(pair: CoupledPair, cross_row, n: int, j: int) -> InequalityReport:
    """Discrepancy on 1..jn after one coupled step against before + 1 - 2A(n, j)."""
    if n < 2 or j < 1:
        raise ValueError("need n >= 2 and j >= 1")
    if j * n > pair.N - n:
        raise ValueError(f"interior guard: j*n={j * n} must be <= N-n={pair.N - n}")
    k = j * n
    found, A = forbidden_pattern_scan(pair, n, cross_row, blocks=j)
    after = coupled_step(pair, cross_row)
    return InequalityReport(n, j, discrepancy(pair, k), discrepancy(after, k), tuple(found), A)


def cross_audit(pair: CoupledPair, cross_row, k: int) -> list[tuple[int, int, int]]:
    """Apply the crosses one at a time (right to left); (x, delta before, delta after) per cross."""
    X, Y = pair.X.copy(), pair.Y.copy()
    row = np.asarray(cross_row, dtype=np.uint8).ravel()
    trace = _kernels.coupled_trace(X, Y, row, k)
    return [(int(x) + 1, int(b), int(a)) for x, b, a in trace]


def run_window(state, crosses) -> np.ndarray:
    """Many z-steps at once (compiled); ``crosses`` has one row per step."""
    occ = _window(state)
    rows = np.ascontiguousarray(crosses, dtype=np.uint8)
    return _kernels.z_window_run(occ, rows)
