"""Hammersley line diagrams built by peeling minimal crosses.

Geometry conventions: the top side of the box is row m + 1, the right side is
column n + 1, sinks sit at (0, t) and sources at (x, 0). A line is stored as
its corner points; it leaves each connected cross eastward along that cross's
row and drops at the next cross's column.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .core import BoundaryData, CrossField, ModelKind


@dataclass(frozen=True)
class Line:
    entry: tuple[str, int]  # ("top", x) or ("sink", t)
    exit: tuple[str, int]  # ("right", t) or ("source", x)
    points: tuple[tuple[int, int], ...]
    vertices: tuple[tuple[int, int], ...]

    def vertical_segments(self):
        """(x, lo, hi) for every vertical run from row hi down to row lo."""
        v = self.vertices
        for (xa, ta), (xb, tb) in zip(v, v[1:]):
            if xa == xb and ta != tb:
                yield xa, tb, ta

    def horizontal_segments(self):
        """(t, x_from, x_to) for every eastward run along row t."""
        v = self.vertices
        for (xa, ta), (xb, tb) in zip(v, v[1:]):
            if ta == tb and xa != xb:
                yield ta, xa, xb


@dataclass(frozen=True)
class LineDiagram:
    n: int
    m: int
    model: ModelKind
    lines: tuple[Line, ...]
    boundary: BoundaryData | None = field(default=None, compare=False)

    def __len__(self):
        return len(self.lines)

    @cached_property
    def occupancy(self) -> np.ndarray:
        """occ[t, x - 1] = number of lines on the vertical edge {(x, t), (x, t + 1)}."""
        occ = np.zeros((self.m + 1, self.n), dtype=np.int64)
        for line in self.lines:
            for x, lo, hi in line.vertical_segments():
                occ[lo:min(hi, self.m + 1), x - 1] += 1
        return occ

    def vertical_edges(self) -> Counter:
        edges = Counter()
        for line in self.lines:
            for x, lo, hi in line.vertical_segments():
                for s in range(lo, hi):
                    edges[(x, min(s, self.m))] += 1
        return edges

    def horizontal_edges(self) -> Counter:
        edges = Counter()
        for line in self.lines:
            for t, xa, xb in line.horizontal_segments():
                for x in range(xa, xb):
                    edges[(x, t)] += 1
        return edges


def build_lines(field: CrossField, model) -> LineDiagram:
    """Lines for the crosses alone: each one enters at the top and exits right."""
    model = ModelKind.parse(model)
    return _peel(field, BoundaryData.zero(model, field.n, field.m), model)


def build_lines_boundary(field: CrossField, boundary: BoundaryData, model) -> LineDiagram:
    """Lines with sources and sinks.

    Each round consumes one unit of the lowest sink, the leftmost source and
    the minimal remaining crosses not dominated by either.
    """
    model = ModelKind.parse(model)
    if boundary.model is not model:
        raise ValueError(f"boundary is for {boundary.model.name}, lines requested for {model.name}")
    if boundary.n != field.n or boundary.m != field.m:
        raise ValueError("boundary sizes do not match the field")
    return _peel(field, boundary, model)


def _peel(field: CrossField, boundary: BoundaryData, model: ModelKind) -> LineDiagram:
    n, m = field.n, field.m
    strict = model is ModelKind.MODEL1
    cols: list[list[int]] = [[] for _ in range(n + 1)]
    ts, xs = np.nonzero(field.cells)
    for t, x in sorted(zip(ts.tolist(), xs.tolist())):
        cols[x + 1].append(t + 1)
    head = [0] * (n + 1)
    remaining = len(ts)
    sinks = [int(v) for v in boundary.sinks]
    sources = [x + 1 for x in np.flatnonzero(boundary.sources).tolist()]
    sink_t = 0  # rows already exhausted
    src_i = 0
    lines: list[Line] = []
    while True:
        while sink_t < m and sinks[sink_t] == 0:
            sink_t += 1
        t1 = sink_t + 1 if sink_t < m else None
        x1 = sources[src_i] if src_i < len(sources) else None
        if t1 is None and x1 is None and remaining == 0:
            break
        picked: list[tuple[int, int]] = []
        floor = None  # lowest remaining row among columns already swept
        last_col = x1 if x1 is not None else n
        for x in range(1, last_col + 1):
            col, h = cols[x], head[x]
            if h == len(col):
                continue
            low = col[h]
            k = h
            while k < len(col):
                t = col[k]
                if floor is not None and (t > floor if strict else t >= floor):
                    break
                if t1 is not None and (t > t1 if strict else t >= t1):
                    break
                k += 1
            if k > h:
                picked.extend((x, t) for t in reversed(col[h:k]))
                head[x] = k
                remaining -= k - h
            if floor is None or low < floor:
                floor = low
        lines.append(_trace(picked, t1, x1, n, m))
        if t1 is not None:
            sinks[t1 - 1] -= 1
        if x1 is not None:
            src_i += 1
    return LineDiagram(n, m, model, tuple(lines), boundary)


def _trace(picked, t1, x1, n, m) -> Line:
    if t1 is not None:
        start = (0, t1)
        entry = ("sink", t1)
    else:
        first_x = picked[0][0] if picked else x1
        start = (first_x, m + 1)
        entry = ("top", first_x)
    verts = [start]
    cx, ct = start
    for x, t in picked:
        if t != ct and x != cx:
            verts.append((x, ct))
        verts.append((x, t))
        cx, ct = x, t
    if x1 is not None:
        if cx != x1:
            verts.append((x1, ct))
        verts.append((x1, 0))
        exit_ = ("source", x1)
    else:
        verts.append((n + 1, ct))
        exit_ = ("right", ct)
    return Line(entry, exit_, tuple(picked), tuple(verts))


def top_exit_count(diagram: LineDiagram) -> int:
    """Lines crossing the top side of the box."""
    return sum(1 for line in diagram.lines if line.entry[0] == "top")


def consumed_sink_units(diagram: LineDiagram) -> int:
    return sum(1 for line in diagram.lines if line.entry[0] == "sink")


def edge_occupancy(diagram: LineDiagram, t: int) -> np.ndarray:
    """X_t(x) = 1 iff a line uses the vertical edge {(x, t), (x, t + 1)}."""
    if not 0 <= t <= diagram.m:
        raise ValueError(f"t={t} outside [0, {diagram.m}]")
    return (diagram.occupancy[t] > 0).astype(np.uint8)


def occupancy_matrix(diagram: LineDiagram) -> np.ndarray:
    """All edge occupancies at once, shape (m + 1, n)."""
    return (diagram.occupancy > 0).astype(np.uint8)
