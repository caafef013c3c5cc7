"""Longest chains through a cross field, with and without boundary.

Points are (x, t) pairs. Sources live at (x, 0), sinks at (0, t); a sink site
may carry several units (Model 2), each counted once in the path score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .core import BoundaryData, CrossField, ModelKind, parse_rational

BRUTE_FORCE_MAX_CELLS = 25


@dataclass(frozen=True)
class ChainResult:
    length: int
    witness: list[tuple[int, int]] = field(default_factory=list)
    d_sources: int = 0
    d_sinks: int = 0

    def as_record(self) -> dict:
        return {
            "length": self.length,
            "d_sources": self.d_sources,
            "d_sinks": self.d_sinks,
            "witness": [list(p) for p in self.witness],
        }


def _model_code(model) -> int:
    return ModelKind.parse(model).value


def longest_chain(field: CrossField, model) -> int:
    """Longest increasing (Model 1) or non-decreasing (Model 2) subsequence."""
    return int(_kernels.patience_length(field.cells, _model_code(model)))


def longest_chain_dp(field: CrossField, model) -> int:
    """Same value through the O(n m) quadrant table."""
    return int(_kernels.quadrant_table(field.cells, _model_code(model))[1, 1])


def longest_chain_brute(field: CrossField, model) -> int:
    """Exhaustive recursive enumeration of chains; only for tiny fields."""
    model = ModelKind.parse(model)
    if field.n * field.m > BRUTE_FORCE_MAX_CELLS:
        raise ValueError(f"brute force limited to n*m <= {BRUTE_FORCE_MAX_CELLS}, got {field.n * field.m}")
    pts = field.points()

    def extend(last) -> int:
        best = 0
        for q in pts:
            if last is None or model.precedes(last, q):
                best = max(best, 1 + extend(q))
        return best

    return extend(None)


def is_valid_path(points, model, field: CrossField, boundary: BoundaryData | None = None) -> bool:
    """Chain validity: optional initial source or sink run, then an increasing chain of crosses."""
    model = ModelKind.parse(model)
    pts = [tuple(p) for p in points]
    i = 0
    last = None
    if pts and (pts[0][1] == 0 or pts[0][0] == 0):
        if boundary is None:
            return False
        on_sources = pts[0][1] == 0
        while i < len(pts) and (pts[i][1] == 0 if on_sources else pts[i][0] == 0):
            x, t = pts[i]
            if on_sources:
                if x == 0 or not 1 <= x <= field.n or not boundary.sources[x - 1]:
                    return False
                if last is not None and x <= last[0]:
                    return False
            else:
                if not 1 <= t <= field.m or not boundary.sinks[t - 1]:
                    return False
                if last is not None and t <= last[1]:
                    return False
            last = (x, t)
            i += 1
    for x, t in pts[i:]:
        if not (1 <= x <= field.n and 1 <= t <= field.m) or not field[x, t]:
            return False
        if last is not None:
            if last[1] == 0:
                if x <= last[0]:
                    return False
            elif last[0] == 0:
                if not (t > last[1] if model is ModelKind.MODEL1 else t >= last[1]):
                    return False
            elif not model.precedes(last, (x, t)):
                return False
        last = (x, t)
    return True


def path_score(points, boundary: BoundaryData | None = None) -> int:
    total = 0
    for x, t in points:
        if x == 0:
            total += int(boundary.sinks[t - 1])
        else:
            total += 1
    return total


class _Tables:
    """Value tables for the canonical witness search."""

    def __init__(self, field: CrossField, boundary: BoundaryData, model: ModelKind):
        self.model = model
        self.cells = field.cells
        self.n, self.m = field.n, field.m
        code = model.value
        g = _kernels.quadrant_table(field.cells, code)
        self.g = g
        n, m = self.n, self.m
        # best chain that starts exactly at the cross (x, t), indexed [t, x] 1-based
        nxt = g[2:n + 2, 2:m + 2] if code == 1 else g[2:n + 2, 1:m + 1]
        start = np.where(field.cells.T.astype(bool), 1 + nxt, -1)
        self.start = np.full((m + 2, n + 2), -1, dtype=np.int64)
        self.start[1:m + 1, 1:n + 1] = start.T
        src = boundary.sources
        snk = boundary.sinks
        # best total from picking source x first among the remaining sources
        self.vs = np.full(n + 2, -1, dtype=np.int64)
        tail = -1
        for x in range(n, 0, -1):
            if src[x - 1]:
                self.vs[x] = 1 + max(int(g[x + 1, 1]), tail)
                tail = max(tail, int(self.vs[x]))
        self.vk = np.full(m + 2, -1, dtype=np.int64)
        tail = -1
        for t in range(m, 0, -1):
            if snk[t - 1]:
                after = int(g[1, t + 1]) if code == 1 else int(g[1, t])
                self.vk[t] = int(snk[t - 1]) + max(after, tail)
                tail = max(tail, int(self.vk[t]))

    def first_interior(self, x0: int, t0: int, r: int):
        """Smallest (t, x) cross in [x0, n] x [t0, m] starting a chain of value r."""
        if x0 > self.n:
            return None
        t, x = _kernels.first_value(self.start, x0, max(t0, 1), r)
        return None if t < 0 else (int(x), int(t))


def optimal_path(field: CrossField, boundary: BoundaryData | None, model) -> ChainResult:
    """Canonical maximizer: the lexicographically smallest (t, x) point sequence."""
    model = ModelKind.parse(model)
    if boundary is None:
        boundary = BoundaryData.zero(model, field.n, field.m)
    _check_boundary(field, boundary, model)
    tb = _Tables(field, boundary, model)
    length = int(_kernels.boundary_length(field.cells, boundary.sources, boundary.sinks, model.value))
    witness: list[tuple[int, int]] = []
    d_src = d_snk = 0
    r = length
    state = "start"
    cur = (0, 0)
    while r > 0:
        cands = []
        if state in ("start", "src"):
            lo = cur[0] + 1 if state == "src" else 1
            xs = np.flatnonzero(tb.vs[lo:tb.n + 1] == r)
            if xs.size:
                cands.append(((0, lo + int(xs[0])), "src"))
        if state in ("start", "snk"):
            lo = cur[1] + 1 if state == "snk" else 1
            ts = np.flatnonzero(tb.vk[lo:tb.m + 1] == r)
            if ts.size:
                cands.append(((lo + int(ts[0]), 0), "snk"))
        if state == "start":
            q = tb.first_interior(1, 1, r)
        elif state == "src":
            q = tb.first_interior(cur[0] + 1, 1, r)
        elif state == "snk":
            q = tb.first_interior(1, cur[1] + 1 if model is ModelKind.MODEL1 else cur[1], r)
        else:
            q = tb.first_interior(cur[0] + 1, cur[1] + 1 if model is ModelKind.MODEL1 else cur[1], r)
        if q is not None:
            cands.append(((q[1], q[0]), "int"))
        if not cands:
            raise AssertionError("witness reconstruction lost the optimum")
        (t_key, x_key), kind = min(cands)
        if kind == "src":
            cur = (x_key, 0)
            d_src += 1
            r -= 1
        elif kind == "snk":
            cur = (0, t_key)
            units = int(boundary.sinks[t_key - 1])
            d_snk += units
            r -= units
        else:
            cur = (x_key, t_key)
            r -= 1
        state = kind
        witness.append(cur)
    return ChainResult(length, witness, d_src, d_snk)


def longest_chain_boundary(field: CrossField, boundary: BoundaryData, model) -> ChainResult:
    """Longest path that may first pick sources or sinks (never both)."""
    return optimal_path(field, boundary, model)


def boundary_chain_length(field: CrossField, boundary: BoundaryData, model) -> int:
    model = ModelKind.parse(model)
    _check_boundary(field, boundary, model)
    return int(_kernels.boundary_length(field.cells, boundary.sources, boundary.sinks, model.value))


def _check_boundary(field: CrossField, boundary: BoundaryData, model: ModelKind):
    if boundary.model is not model:
        raise ValueError(f"boundary is for {boundary.model.name}, chain requested for {model.name}")
    if boundary.n != field.n or boundary.m != field.m:
        raise ValueError(
            f"boundary sizes ({boundary.n} sources, {boundary.m} sinks) do not match field {field.n}x{field.m}"
        )


def eps_cut(n: int, eps) -> int:
    """floor(n * eps) computed exactly."""
    eps = parse_rational(eps)
    if not 0 <= eps <= 1:
        raise ValueError(f"eps={eps} outside [0, 1]")
    return math.floor(n * Fraction(eps))


def constrained_chain_eps(field: CrossField, sources, eps, model=ModelKind.MODEL1) -> int:
    """Sources restricted to columns <= floor(n eps), crosses to columns beyond it.

    The two parts do not interact, so the value is (sources in the prefix)
    plus the longest chain of the field right of the cut.
    """
    if ModelKind.parse(model) is not ModelKind.MODEL1:
        raise ValueError("the eps-constrained chain is defined for Model 1 only")
    sources = np.asarray(sources, dtype=np.int64)
    if sources.size != field.n:
        raise ValueError("sources length must equal n")
    cut = eps_cut(field.n, eps)
    head = int(sources[:cut].sum())
    if cut >= field.n:
        return head
    return head + longest_chain(CrossField(field.cells[:, cut:]), ModelKind.MODEL1)


def geometric_lpp(weights) -> int:
    """Last-passage value with (1,0)/(0,1) steps from (1,1) to (n,m).

    ``weights[t - 1, x - 1]`` is the weight of site (x, t).
    """
    w = np.ascontiguousarray(weights, dtype=np.int64)
    if w.ndim != 2 or w.size == 0:
        raise ValueError("weights must be a non-empty matrix")
    if w.min() < 0:
        raise ValueError("weights must be nonnegative")
    return int(_kernels.geometric_lpp_value(w))


def sample_geometric_weights(n: int, m: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. weights with P(w = k) = (1 - p) p^k, k >= 0."""
    return rng.geometric(1.0 - p, size=(m, n)).astype(np.int64) - 1
