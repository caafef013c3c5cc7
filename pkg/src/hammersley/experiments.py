"""Limit values, Monte Carlo estimates and the statistical batteries.

Every replica draws from its own substream, so results do not depend on the
order replicas run in. Means go through numpy's pairwise summation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import _kernels
from .core import (
    CrossField,
    ModelKind,
    SeedSpec,
    TrivialRegimeError,
    _as_seed,
    alpha_star,
    optimal_boundary,
    parse_rational,
    sample_boundary,
    sample_cross_field,
    scaled_dims,
)
from .subseq import (
    geometric_lpp,
    longest_chain,
    optimal_path,
    sample_geometric_weights,
)

LLN_TOLERANCE = 0.02
LPP_TOLERANCE = 0.1
SIGMA_BAND = 5.0
ULAM_BAND = (1.90, 2.00)
EXACT_MAX_CELLS = 16

CSV_FIELDS = ("model", "a", "b", "p", "n", "reps", "seed", "estimate", "stderr", "target", "tolerance", "pass")


def limit_value(model, a: float, b: float, p: float) -> float:
    """Almost sure limit of L/n on the floor(an) x floor(bn) box."""
    model = ModelKind.parse(model)
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    if model is ModelKind.MODEL1:
        if p >= min(a / b, b / a):
            return float(min(a, b))
        return math.sqrt(p) * (2 * math.sqrt(a * b) - (a + b) * math.sqrt(p)) / (1 - p)
    if p >= a / (a + b):
        return float(a)
    return 2 * math.sqrt(a * b * p * (1 - p)) + (a - b) * p


def phi1(a, b, alpha, p):
    """Model 1 upper bound a*alpha + b*alpha*(alpha, p); exact for Fraction inputs."""
    return a * alpha + b * p * (1 - alpha) / (alpha + p * (1 - alpha))


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    values = np.asarray(values, dtype=np.float64)
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, float("nan")
    return mean, float(np.std(values, ddof=1) / math.sqrt(values.size))


@dataclass
class ExperimentReport:
    model: int
    a: float
    b: float
    p: float
    n: int
    reps: int
    seed: int
    estimate: float
    stderr: float
    target: float
    tolerance: float
    samples: np.ndarray | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return abs(self.estimate - self.target) <= self.tolerance

    def as_row(self) -> dict:
        row = {k: v for k, v in asdict(self).items() if k != "samples"}
        row["pass"] = self.passed
        return row


def mc_estimate(model, a, b, p, n: int, reps: int, seed, tolerance: float = LLN_TOLERANCE) -> ExperimentReport:
    """Mean of L/n over ``reps`` fields of size floor(an) x floor(bn)."""
    model = ModelKind.parse(model)
    cols, rows = scaled_dims(a, b, n)
    base = _as_seed(seed)
    out = np.empty(reps, dtype=np.float64)
    for r in range(reps):
        f = sample_cross_field(cols, rows, p, base.for_replica(r))
        out[r] = longest_chain(f, model) / n
    est, se = _mean_stderr(out)
    return ExperimentReport(model.value, float(a), float(b), float(p), n, reps, base.master_seed,
                            est, se, limit_value(model, a, b, p), tolerance, out)


def exact_expectation_small(model, n: int, m: int, p) -> Fraction:
    """E[L] over all 2^(nm) fields, in exact rationals."""
    model = ModelKind.parse(model)
    if n * m > EXACT_MAX_CELLS:
        raise ValueError(f"exact enumeration limited to n*m <= {EXACT_MAX_CELLS}, got {n * m}")
    p = parse_rational(p)
    cells = n * m
    by_count = [0] * (cells + 1)
    for bits in product((0, 1), repeat=cells):
        arr = np.array(bits, dtype=np.uint8).reshape(m, n)
        by_count[sum(bits)] += int(_kernels.patience_length(arr, model.value))
    return sum((p ** k * (1 - p) ** (cells - k) * s for k, s in enumerate(by_count)), Fraction(0))


@dataclass
class StationarityReport:
    model: int
    n: int
    m: int
    alpha: float
    p: float
    star: float
    replicas: int
    seed: int
    slice_means: np.ndarray
    slice_z: np.ndarray
    top_mean: float
    top_mean_z: float
    top_var: float
    top_var_z: float
    identity_rate: float
    domination_rate: float

    @property
    def slices_ok(self) -> bool:
        return bool(np.all(np.abs(self.slice_z) <= SIGMA_BAND))

    @property
    def top_ok(self) -> bool:
        return abs(self.top_mean_z) <= SIGMA_BAND and abs(self.top_var_z) <= SIGMA_BAND

    @property
    def identity_ok(self) -> bool:
        return self.identity_rate == 1.0

    @property
    def passed(self) -> bool:
        return self.slices_ok and self.top_ok and self.identity_ok and self.domination_rate == 1.0

    def as_record(self) -> dict:
        return {
            "model": self.model, "n": self.n, "m": self.m, "alpha": self.alpha, "p": self.p,
            "alpha_star": self.star, "replicas": self.replicas, "seed": self.seed,
            "max_abs_slice_z": float(np.max(np.abs(self.slice_z))),
            "top_mean": self.top_mean, "top_mean_z": self.top_mean_z,
            "top_var": self.top_var, "top_var_z": self.top_var_z,
            "identity_rate": self.identity_rate, "domination_rate": self.domination_rate,
            "slices_ok": self.slices_ok, "top_ok": self.top_ok, "identity_ok": self.identity_ok,
            "pass": self.passed,
        }


def stationarity_test(model, n: int, m: int, alpha, p, replicas: int, seed, star=None) -> StationarityReport:
    """Particle counts under a sampled stationary boundary against Binom(n, alpha).

    The identity checked per replica is: boundary chain length = top exits +
    total sink units; the interior chain must not exceed it either.
    """
    model = ModelKind.parse(model)
    alpha, p = float(alpha), float(p)
    star = alpha_star(model, alpha, p) if star is None else float(star)
    base = _as_seed(seed)
    counts = np.empty((replicas, m + 1), dtype=np.int64)
    ident = dom = 0
    for r in range(replicas):
        rep = base.for_replica(r)
        f = sample_cross_field(n, m, p, rep.child("field"))
        bd = sample_boundary(model, n, m, alpha, p, rep.child("boundary"), star=star)
        c, _ = _kernels.evolve_counts(f.cells, bd.sources, bd.sinks, model.value)
        counts[r] = c
        big = int(_kernels.boundary_length(f.cells, bd.sources, bd.sinks, model.value))
        ident += big == int(c[-1]) + int(bd.sinks.sum())
        dom += int(_kernels.patience_length(f.cells, model.value)) <= big
    mu, var = n * alpha, n * alpha * (1 - alpha)
    means = counts.mean(axis=0)
    z = (means - mu) / math.sqrt(var / replicas)
    top = counts[:, -1].astype(np.float64)
    top_mean = float(np.mean(top))
    top_var = float(np.var(top, ddof=1))
    # fourth central moment of Binom(n, alpha)
    mu4 = var * (1 + 3 * (n - 2) * alpha * (1 - alpha))
    var_se = math.sqrt((mu4 - var ** 2 * (replicas - 3) / (replicas - 1)) / replicas)
    return StationarityReport(
        model.value, n, m, alpha, p, star, replicas, base.master_seed, means, z,
        top_mean, (top_mean - mu) / math.sqrt(var / replicas), top_var, (top_var - var) / var_se,
        ident / replicas, dom / replicas,
    )


def ulam_closed_form(k: int) -> float:
    """2k sqrt(p_k) / (sqrt(p_k) + 1) with p_k = 1 - exp(-1/k^2)."""
    s = math.sqrt(-math.expm1(-1.0 / k ** 2))
    return 2 * k * s / (s + 1)


def strict_lis(points: np.ndarray) -> int:
    """Longest chain strictly increasing in both coordinates of an (N, 2) array."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if pts.shape[0] == 0:
        return 0
    # sort by y, ties broken by decreasing x so equal y never chain
    order = np.lexsort((-pts[:, 0], pts[:, 1]))
    return int(_kernels.strict_lis_length(np.ascontiguousarray(pts[order, 0])))


def poisson_points(n: float, rng: np.random.Generator) -> np.ndarray:
    """Poisson(n) many i.i.d. uniform points in the unit square."""
    count = rng.poisson(n)
    return rng.random((count, 2))


def grid_field(points: np.ndarray, G: int) -> CrossField:
    """Cell (i, j) of the G x G grid holds a cross iff some point falls in it."""
    cells = np.zeros((G, G), dtype=np.uint8)
    if len(points):
        ij = np.minimum((points * G).astype(np.int64), G - 1)
        cells[ij[:, 1], ij[:, 0]] = 1
    return CrossField(cells)


@dataclass
class UlamReport:
    k: int
    n: float
    reps: int
    seed: int
    grid: int
    discretized: float
    discretized_stderr: float
    closed_form: float
    direct: float
    direct_stderr: float
    coupling_ok: bool

    @property
    def direct_in_band(self) -> bool:
        return ULAM_BAND[0] <= self.direct <= ULAM_BAND[1]

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["direct_in_band"] = self.direct_in_band
        return rec


def ulam_estimate(k: int, n: float, reps: int, seed) -> UlamReport:
    """Discretized and direct estimates of the Ulam constant on shared samples.

    Binning Poisson(n) points into a G x G grid, G = floor(k sqrt(n)), gives
    i.i.d. Bernoulli(1 - exp(-n/G^2)) cells; any chain of occupied cells
    yields a chain of points, so the grid value never exceeds the direct one.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    G = math.floor(k * math.sqrt(n))
    base = _as_seed(seed)
    disc = np.empty(reps)
    direct = np.empty(reps)
    ok = True
    root = math.sqrt(n)
    for r in range(reps):
        rng = base.for_replica(r).generator()
        pts = poisson_points(n, rng)
        lk = longest_chain(grid_field(pts, G), ModelKind.MODEL1)
        ell = strict_lis(pts)
        ok &= ell >= lk
        disc[r], direct[r] = lk / root, ell / root
    d, dse = _mean_stderr(disc)
    e, ese = _mean_stderr(direct)
    return UlamReport(k, n, reps, base.master_seed, G, d, dse, ulam_closed_form(k), e, ese, ok)


def lpp_limit(p: float) -> float:
    """Limit of L/n for i.i.d. weights with P(w = k) = (1 - p) p^k on an n x n square."""
    return 2 * math.sqrt(p) / (1 - math.sqrt(p))


def lpp_estimate(p: float, n: int, reps: int, seed, tolerance: float = LPP_TOLERANCE) -> ExperimentReport:
    base = _as_seed(seed)
    out = np.empty(reps)
    for r in range(reps):
        w = sample_geometric_weights(n, n, p, base.for_replica(r).generator())
        out[r] = geometric_lpp(w) / n
    est, se = _mean_stderr(out)
    return ExperimentReport(0, 1.0, 1.0, float(p), n, reps, base.master_seed, est, se, lpp_limit(p), tolerance, out)


@dataclass
class BoundaryUsage:
    n: int
    reps: int
    alpha: float
    star: float
    d_mean: float
    d_stderr: float
    d_sinks_mean: float
    lower_bound_ok: bool

    def as_record(self) -> dict:
        return asdict(self)


def boundary_usage(n: int, reps: int, seed, a: float = 1.0, b: float = 1.0, p: float = 0.25) -> BoundaryUsage:
    """Sources and sinks taken by the canonical optimal path, Model 1 at the optimal boundary.

    Also checks per replica that dropping those boundary points leaves a chain
    of crosses, i.e. boundary length - D - D' <= L.
    """
    alpha, star = optimal_boundary(ModelKind.MODEL1, a, b, p)
    cols, rows = scaled_dims(a, b, n)
    base = _as_seed(seed)
    d = np.empty(reps)
    dk = np.empty(reps)
    ok = True
    for r in range(reps):
        rep = base.for_replica(r)
        f = sample_cross_field(cols, rows, p, rep.child("field"))
        bd = sample_boundary(ModelKind.MODEL1, cols, rows, alpha, p, rep.child("boundary"), star=star)
        res = optimal_path(f, bd, ModelKind.MODEL1)
        ok &= res.length - res.d_sources - res.d_sinks <= longest_chain(f, ModelKind.MODEL1)
        d[r], dk[r] = res.d_sources / n, res.d_sinks / n
    dm, dse = _mean_stderr(d)
    return BoundaryUsage(n, reps, alpha, star, dm, dse, float(np.mean(dk)), ok)


@dataclass
class CouplingSweep:
    trials: int
    N: int
    spans: tuple[int, ...]
    inequality_failures: int
    audits: int
    audit_failures: int
    max_step_increase: int
    patterns_seen: int

    @property
    def passed(self) -> bool:
        return self.inequality_failures == 0 and self.audit_failures == 0 and self.max_step_increase <= 1

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["pass"] = self.passed
        return rec


def coupling_sweep(trials: int, seed, N: int = 256, spans=(2, 4, 8)) -> CouplingSweep:
    """Randomized check of the one-step discrepancy inequality and the prefix audit.

    Each trial draws two configurations with independent random densities, a
    row of crosses and a span n; j is the largest block count the interior
    guard allows. Half the trials plant forbidden patterns so A > 0 is common.
    """
    from .coupling import CoupledPair, cross_audit, lemma_inequality_check

    rng = _as_seed(seed).generator()
    spans = tuple(int(s) for s in spans)
    fails = audits = audit_fails = max_inc = seen = 0
    for _ in range(trials):
        n = spans[rng.integers(len(spans))]
        j = (N - n) // n
        dx, dy, p = rng.random(3)
        X = (rng.random(N) < dx).astype(np.uint8)
        Y = (rng.random(N) < dy).astype(np.uint8)
        if rng.random() < 0.5:
            for blk in np.flatnonzero(rng.random(j) < 0.5):
                s = blk * n
                a, b = (X, Y) if rng.random() < 0.5 else (Y, X)
                a[s:s + n] = 0
                b[s:s + n] = 0
                a[s] = 1
                b[s + n - 1] = 1
        row = (rng.random(N) < p).astype(np.uint8)
        pair = CoupledPair(X, Y)
        rep = lemma_inequality_check(pair, row, n, j)
        fails += not rep.holds
        seen += len(rep.patterns)
        k = j * n
        trace = cross_audit(pair, row, k)
        for x, before, after in trace:
            if x <= k:
                audits += 1
                audit_fails += after > before
        inc = rep.delta_after - rep.delta_before
        max_inc = max(max_inc, inc)
    return CouplingSweep(trials, N, spans, fails, audits, audit_fails, max_inc, seen)


def coupling_trace(N: int, steps: int, alpha: float, p: float, seed, n: int = 4) -> list[dict]:
    """Two independent Ber(alpha) windows driven by common crosses.

    One row per step: discrepancy on the guarded prefix before and after,
    patterns found, patterns resolved (A) and whether the inequality held.
    """
    from .coupling import CoupledPair, coupled_step, lemma_inequality_check

    base = _as_seed(seed)
    rng0 = base.child("start").generator()
    rng = base.child("crosses").generator()
    pair = CoupledPair((rng0.random(N) < alpha).astype(np.uint8), (rng0.random(N) < alpha).astype(np.uint8))
    j = (N - n) // n
    rows = []
    for t in range(1, steps + 1):
        row = (rng.random(N) < p).astype(np.uint8)
        rep = lemma_inequality_check(pair, row, n, j)
        rows.append({"t": t, "delta_before": rep.delta_before, "delta_after": rep.delta_after,
                     "patterns": len(rep.patterns), "A": rep.A, "holds": rep.holds})
        pair = coupled_step(pair, row)
    return rows


@dataclass
class WindowReport:
    N: int
    steps: int
    alpha: float
    p: float
    replicas: int
    lo: int
    hi: int
    max_abs_z: float

    @property
    def passed(self) -> bool:
        return self.max_abs_z <= SIGMA_BAND

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["pass"] = self.passed
        return rec


def window_stationarity(N: int, steps: int, alpha: float, p: float, replicas: int, seed) -> WindowReport:
    """Site marginals in [N/4, 3N/4] after ``steps`` window steps from Ber(alpha)."""
    base = _as_seed(seed)
    total = np.zeros(N, dtype=np.int64)
    for r in range(replicas):
        rng = base.for_replica(r).generator()
        occ = (rng.random(N) < alpha).astype(np.uint8)
        crosses = (rng.random((steps, N)) < p).astype(np.uint8)
        total += _kernels.z_window_run(occ, crosses)
    lo, hi = N // 4, 3 * N // 4
    means = total[lo - 1:hi] / replicas
    z = (means - alpha) / math.sqrt(alpha * (1 - alpha) / replicas)
    return WindowReport(N, steps, float(alpha), float(p), replicas, lo, hi, float(np.max(np.abs(z))))


@dataclass
class OracleReport:
    name: str
    instances: int
    mismatches: int
    first_mismatch: str | None = None

    @property
    def passed(self) -> bool:
        return self.instances > 0 and self.mismatches == 0

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["pass"] = self.passed
        return rec


def _all_fields(n: int, m: int):
    cells = n * m
    grid = np.array(list(product((0, 1), repeat=cells)), dtype=np.uint8).reshape(-1, m, n)
    for c in grid:
        yield CrossField(c)


def chain_oracle(n: int, m: int) -> OracleReport:
    """Line count, quadrant DP, patience and brute force agree on every n x m field, both models."""
    from .lines import build_lines
    from .subseq import longest_chain_brute, longest_chain_dp

    count = bad = 0
    first = None
    for f in _all_fields(n, m):
        for model in ModelKind:
            vals = (len(build_lines(f, model)), longest_chain_dp(f, model),
                    longest_chain(f, model), longest_chain_brute(f, model))
            count += 1
            if len(set(vals)) != 1:
                bad += 1
                first = first or f"model {model.value} field {f.points()} values {vals}"
    return OracleReport(f"chains {n}x{m}", count, bad, first)


def _boundaries(model: ModelKind, n: int, m: int, max_sink: int):
    from .core import BoundaryData

    sink_vals = (0, 1) if model is ModelKind.MODEL1 else tuple(range(max_sink + 1))
    for src in product((0, 1), repeat=n):
        for snk in product(sink_vals, repeat=m):
            yield BoundaryData(model, np.array(src), np.array(snk))


def _dynamics_match(model, f, bd) -> bool:
    from .dynamics import evolve
    from .lines import build_lines_boundary, occupancy_matrix

    return np.array_equal(evolve(model, f, bd), occupancy_matrix(build_lines_boundary(f, bd, model)))


def dynamics_oracle(n: int = 3, m: int = 3, max_sink: int = 2) -> OracleReport:
    """Trajectory equals line edge occupancy for every field and boundary (sinks <= max_sink)."""
    count = bad = 0
    first = None
    fields = list(_all_fields(n, m))
    for model in ModelKind:
        for bd in _boundaries(model, n, m, max_sink):
            for f in fields:
                count += 1
                if not _dynamics_match(model, f, bd):
                    bad += 1
                    first = first or f"model {model.value} field {f.points()} boundary {bd}"
    return OracleReport(f"dynamics {n}x{m}", count, bad, first)


def dynamics_random(model, instances: int, seed, n: int = 10, m: int = 10, p: float = 0.3) -> OracleReport:
    """Same check on random fields with random stationary-type boundaries."""
    model = ModelKind.parse(model)
    base = _as_seed(seed)
    alpha = 0.5 if model is ModelKind.MODEL1 else 0.6
    bad = 0
    first = None
    for r in range(instances):
        rep = base.for_replica(r)
        f = sample_cross_field(n, m, p, rep.child("field"))
        bd = sample_boundary(model, n, m, alpha, p, rep.child("boundary"))
        if not _dynamics_match(model, f, bd):
            bad += 1
            first = first or f"replica {r}"
    return OracleReport(f"dynamics random {n}x{m} model {model.value}", instances, bad, first)


__all__ = [
    "LLN_TOLERANCE", "LPP_TOLERANCE", "SIGMA_BAND", "ULAM_BAND", "CSV_FIELDS",
    "ExperimentReport", "StationarityReport", "UlamReport", "BoundaryUsage", "CouplingSweep",
    "limit_value", "phi1", "mc_estimate", "exact_expectation_small", "stationarity_test",
    "ulam_closed_form", "strict_lis", "poisson_points", "grid_field", "ulam_estimate",
    "lpp_limit", "lpp_estimate", "boundary_usage", "coupling_sweep",
    "coupling_trace", "WindowReport", "window_stationarity",
    "OracleReport", "chain_oracle", "dynamics_oracle", "dynamics_random", "SeedSpec", "TrivialRegimeError",
]
