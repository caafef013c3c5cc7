"""Particle dynamics on [1, n] driven by the crosses, with sources and sinks."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .core import BoundaryData, CrossField, ModelKind


def _state(state) -> np.ndarray:
    occ = np.array(state, dtype=np.uint8).ravel()
    if occ.size and occ.max() > 1:
        raise ValueError("particle states are 0/1 vectors")
    return occ


def _act_inplace(occ: np.ndarray, x: int) -> None:
    # x == 0 is a sink: the leftmost particle leaves the system
    hits = np.flatnonzero(occ[max(x - 1, 0):])
    if hits.size:
        occ[max(x - 1, 0) + hits[0]] = 0
    if x >= 1:
        occ[x - 1] = 1


def act_cross(state, x: int) -> np.ndarray:
    """Leftmost particle in [x, n] moves to x; if there is none, one is created at x."""
    occ = _state(state)
    if not 1 <= x <= occ.size:
        raise ValueError(f"site {x} outside [1, {occ.size}]")
    _act_inplace(occ, x)
    return occ


def act_sink(state) -> np.ndarray:
    """A cross at site 0: removes the leftmost particle, if any."""
    occ = _state(state)
    _act_inplace(occ, 0)
    return occ


def step(model, state, cross_row, sink_units: int = 0) -> np.ndarray:
    """One time step.

    Model 1: crosses right to left, then the sink. Model 2: sink units first,
    then crosses left to right.
    """
    model = ModelKind.parse(model)
    occ = _state(state)
    row = np.asarray(cross_row).ravel()
    if row.size != occ.size:
        raise ValueError(f"cross row has {row.size} sites, state has {occ.size}")
    sink_units = int(sink_units)
    if sink_units < 0:
        raise ValueError("sink units must be nonnegative")
    if model is ModelKind.MODEL1 and sink_units > 1:
        raise ValueError("Model 1 sinks carry at most one unit")
    crosses = (np.flatnonzero(row) + 1).tolist()
    if model is ModelKind.MODEL1:
        for x in reversed(crosses):
            _act_inplace(occ, x)
        for _ in range(sink_units):
            _act_inplace(occ, 0)
    else:
        for _ in range(sink_units):
            _act_inplace(occ, 0)
        for x in crosses:
            _act_inplace(occ, x)
    return occ


def evolve(model, field: CrossField, boundary: BoundaryData | None = None) -> np.ndarray:
    """Trajectory, shape (m + 1, n): row 0 is the sources, row t follows row t of crosses."""
    model = ModelKind.parse(model)
    if boundary is None:
        boundary = BoundaryData.zero(model, field.n, field.m)
    if boundary.n != field.n or boundary.m != field.m:
        raise ValueError("boundary sizes do not match the field")
    traj = np.zeros((field.m + 1, field.n), dtype=np.uint8)
    traj[0] = boundary.sources
    for t in range(1, field.m + 1):
        traj[t] = step(model, traj[t - 1], field.cells[t - 1], boundary.sinks[t - 1])
    return traj


def particle_counts(model, field: CrossField, boundary: BoundaryData | None = None) -> np.ndarray:
    """Particle count at each time 0..m (compiled path)."""
    model = ModelKind.parse(model)
    if boundary is None:
        boundary = BoundaryData.zero(model, field.n, field.m)
    counts, _ = _kernels.evolve_counts(field.cells, boundary.sources, boundary.sinks, model.value)
    return counts


def local_move(state, cross_row, x: int) -> int:
    """New position of the Model 1 particle at x, from local data only.

    Only the left neighbour y (0 if none) and the crosses strictly between y
    and x matter: the particle ends on the leftmost of those crosses, or stays
    at x when there is none.
    """
    occ = np.asarray(state).ravel()
    row = np.asarray(cross_row).ravel()
    left = np.flatnonzero(occ[:x - 1])
    y = int(left[-1]) + 1 if left.size else 0
    between = np.flatnonzero(row[y:x - 1])
    return y + int(between[0]) + 1 if between.size else x


def local_step(state, cross_row) -> np.ndarray:
    """Model 1 step (no sink) assembled from independent local particle moves.

    Crosses right of the rightmost particle add one particle at the leftmost
    of them.
    """
    occ = np.asarray(state, dtype=np.uint8).ravel()
    row = np.asarray(cross_row).ravel()
    out = np.zeros_like(occ)
    sites = np.flatnonzero(occ) + 1
    for x in sites.tolist():
        out[local_move(occ, row, x) - 1] = 1
    right = int(sites[-1]) if sites.size else 0
    beyond = np.flatnonzero(row[right:])
    if beyond.size:
        out[right + int(beyond[0])] = 1
    return out


def format_trajectory(traj: np.ndarray) -> str:
    """One line per time t = 0..m, 'o' for a particle and '.' for a hole."""
    return "".join("".join("o" if v else "." for v in row) + "\n" for row in traj)
