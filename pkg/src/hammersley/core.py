"""Model parameters, cross fields, boundary data and seeded random streams."""

from __future__ import annotations

import enum
import math
import zlib
from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Real

import numpy as np


class TrivialRegimeError(ValueError):
    """Raised when (a, b, p) lies outside the regime where the optimizers exist."""


class ModelKind(enum.Enum):
    MODEL1 = 1
    MODEL2 = 2

    @classmethod
    def parse(cls, value) -> "ModelKind":
        if isinstance(value, ModelKind):
            return value
        text = str(value).strip().lower()
        for prefix in ("model", "m"):
            if text.startswith(prefix):
                text = text[len(prefix):]
                break
        if text in ("1", "2"):
            return cls(int(text))
        raise ValueError(f"unknown model {value!r}; expected 1 or 2")

    def precedes(self, a: tuple[int, int], b: tuple[int, int]) -> bool:
        """Partial order on (x, t) points: strict in x, strict (1) or weak (2) in t."""
        if self is ModelKind.MODEL1:
            return a[0] < b[0] and a[1] < b[1]
        return a[0] < b[0] and a[1] <= b[1]


@dataclass(frozen=True)
class CrossField:
    """Binary n x m field. ``cells[t - 1, x - 1]`` is 1 iff there is a cross at (x, t)."""

    cells: np.ndarray

    def __post_init__(self):
        cells = np.ascontiguousarray(self.cells, dtype=np.uint8)
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise ValueError(f"cross field must be a non-empty 2-d array, got shape {cells.shape}")
        if cells.max(initial=0) > 1:
            raise ValueError("cross field cells must be 0 or 1")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def n(self) -> int:
        return self.cells.shape[1]

    @property
    def m(self) -> int:
        return self.cells.shape[0]

    def __getitem__(self, xt: tuple[int, int]) -> int:
        x, t = xt
        return int(self.cells[t - 1, x - 1])

    def points(self) -> list[tuple[int, int]]:
        """Crosses as (x, t) pairs, sorted by t then x."""
        ts, xs = np.nonzero(self.cells)
        return [(int(x) + 1, int(t) + 1) for t, x in zip(ts, xs)]

    def restrict(self, n: int, m: int) -> "CrossField":
        return CrossField(self.cells[:m, :n])

    @classmethod
    def empty(cls, n: int, m: int) -> "CrossField":
        return cls(np.zeros((m, n), dtype=np.uint8))

    @classmethod
    def from_points(cls, n: int, m: int, points) -> "CrossField":
        cells = np.zeros((m, n), dtype=np.uint8)
        for x, t in points:
            if not (1 <= x <= n and 1 <= t <= m):
                raise ValueError(f"point {(x, t)} outside [1,{n}]x[1,{m}]")
            cells[t - 1, x - 1] = 1
        return cls(cells)

    def __eq__(self, other):
        return isinstance(other, CrossField) and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.cells.shape, self.cells.tobytes()))


@dataclass(frozen=True)
class BoundaryData:
    """Sources on the row t=0 (length n) and sinks on the column x=0 (length m)."""

    model: ModelKind
    sources: np.ndarray
    sinks: np.ndarray

    def __post_init__(self):
        model = ModelKind.parse(self.model)
        sources = np.ascontiguousarray(self.sources, dtype=np.int64).ravel()
        sinks = np.ascontiguousarray(self.sinks, dtype=np.int64).ravel()
        if sources.size and (sources.min() < 0 or sources.max() > 1):
            raise ValueError("sources must be 0 or 1")
        if sinks.size and sinks.min() < 0:
            raise ValueError("sinks must be nonnegative")
        if model is ModelKind.MODEL1 and sinks.size and sinks.max() > 1:
            raise ValueError("Model 1 sinks must be 0 or 1")
        sources.setflags(write=False)
        sinks.setflags(write=False)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "sources", sources)
        object.__setattr__(self, "sinks", sinks)

    @property
    def n(self) -> int:
        return self.sources.size

    @property
    def m(self) -> int:
        return self.sinks.size

    @classmethod
    def zero(cls, model, n: int, m: int) -> "BoundaryData":
        return cls(model, np.zeros(n, dtype=np.int64), np.zeros(m, dtype=np.int64))

    def is_zero(self) -> bool:
        return not self.sources.any() and not self.sinks.any()

    def __eq__(self, other):
        return (
            isinstance(other, BoundaryData)
            and self.model is other.model
            and np.array_equal(self.sources, other.sources)
            and np.array_equal(self.sinks, other.sinks)
        )

    def __hash__(self):
        return hash((self.model, self.sources.tobytes(), self.sinks.tobytes()))


@dataclass(frozen=True)
class Params:
    a: float = 1.0
    b: float = 1.0
    p: float = 0.25
    alpha: float = 1.0
    alpha_star: float | None = None

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("scales a, b must be positive")
        if not 0 < self.p < 1:
            raise ValueError("p must lie in (0, 1)")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")

    def dims(self, n: int) -> tuple[int, int]:
        return scaled_dims(self.a, self.b, n)


def scaled_dims(a: float, b: float, n: int) -> tuple[int, int]:
    """Rectangle (floor(a n), floor(b n)); zero sides are rejected."""
    cols, rows = math.floor(a * n), math.floor(b * n)
    if cols < 1 or rows < 1:
        raise ValueError(f"floor(a*n)={cols}, floor(b*n)={rows}: both must be >= 1")
    return cols, rows


@dataclass(frozen=True)
class SeedSpec:
    """Substream address: (master_seed, purpose, replica).

    Each address keys its own Philox counter-based generator, so draws depend
    only on the address and the draw position, never on execution order.
    """

    master_seed: int
    purpose: str = "field"
    replica: int = 0

    def key(self) -> np.ndarray:
        tag = zlib.crc32(self.purpose.encode("utf-8"))
        ss = np.random.SeedSequence([self.master_seed & (2**64 - 1), tag, self.replica])
        return ss.generate_state(2, dtype=np.uint64)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key()))

    def child(self, purpose: str) -> "SeedSpec":
        return replace(self, purpose=f"{self.purpose}/{purpose}")

    def for_replica(self, replica: int) -> "SeedSpec":
        return replace(self, replica=replica)


def _as_seed(seed) -> SeedSpec:
    if isinstance(seed, SeedSpec):
        return seed
    return SeedSpec(int(seed))


def _check_probability(name: str, value, lo_open=False, hi_open=False):
    ok_lo = value > 0 if lo_open else value >= 0
    ok_hi = value < 1 if hi_open else value <= 1
    if not (ok_lo and ok_hi):
        lo = "(" if lo_open else "["
        hi = ")" if hi_open else "]"
        raise ValueError(f"{name}={value} outside {lo}0,1{hi}")


def sample_cross_field(n: int, m: int, p: float, seed) -> CrossField:
    """I.i.d. Bernoulli(p) crosses on [1,n]x[1,m]; cell (x, t) uses draw (t-1)*n + (x-1)."""
    if n < 1 or m < 1:
        raise ValueError(f"dimensions must be positive, got n={n}, m={m}")
    _check_probability("p", p)
    rng = _as_seed(seed).generator()
    return CrossField((rng.random((m, n)) < float(p)).astype(np.uint8))


def alpha_star(model, alpha, p):
    """Sink intensity making the boundary with Ber(alpha) sources stationary.

    Works in exact arithmetic when given Fractions.
    """
    model = ModelKind.parse(model)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha={alpha} outside (0,1]")
    _check_probability("p", p, lo_open=True, hi_open=True)
    if model is ModelKind.MODEL1:
        return p * (1 - alpha) / (alpha + p * (1 - alpha))
    if alpha <= p:
        raise ValueError(f"Model 2 needs alpha > p (got alpha={alpha}, p={p}); sink law undefined")
    return (alpha - p) / (alpha * (1 - p))


def optimal_boundary(model, a: float, b: float, p: float) -> tuple[float, float]:
    """Source/sink intensities minimizing the stationary upper bound for an a x b box."""
    model = ModelKind.parse(model)
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    _check_probability("p", p, lo_open=True, hi_open=True)
    if model is ModelKind.MODEL1:
        if p >= min(a / b, b / a):
            raise TrivialRegimeError(f"trivial regime: p={p} >= min(a/b, b/a)={min(a / b, b / a)}")
        alpha = (math.sqrt(p * b / a) - p) / (1 - p)
        star = (math.sqrt(p * a / b) - p) / (1 - p)
        return alpha, star
    if p >= a / (a + b):
        raise TrivialRegimeError(f"trivial regime: p={p} >= a/(a+b)={a / (a + b)}")
    alpha = p + math.sqrt((b / a) * p * (1 - p))
    return alpha, alpha_star(model, alpha, p)


def sample_boundary(model, n: int, m: int, alpha: float, p: float, seed, star: float | None = None) -> BoundaryData:
    """Stationary boundary: Ber(alpha) sources, Ber(alpha*) or Geo(alpha*)-1 sinks.

    ``star`` overrides the stationary sink parameter (used for negative controls).
    """
    model = ModelKind.parse(model)
    if star is None:
        star = alpha_star(model, alpha, p)
    seed = _as_seed(seed)
    src_rng = seed.child("sources").generator()
    snk_rng = seed.child("sinks").generator()
    sources = (src_rng.random(n) < float(alpha)).astype(np.int64)
    if model is ModelKind.MODEL1:
        sinks = (snk_rng.random(m) < float(star)).astype(np.int64)
    else:
        if not 0 < star <= 1:
            raise ValueError(f"Model 2 sink parameter {star} outside (0,1]")
        sinks = snk_rng.geometric(float(star), size=m).astype(np.int64) - 1
    return BoundaryData(model, sources, sinks)


def parse_rational(text) -> Fraction:
    """Parse "num/den", an integer or a decimal string into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        return Fraction(repr(text))
    if isinstance(text, Real):
        return Fraction(text)
    return Fraction(str(text).strip())


# -- text formats -----------------------------------------------------------

def format_field(f: CrossField) -> str:
    rows = ["".join("x" if c else "." for c in f.cells[t]) for t in range(f.m)]
    return "\n".join([f"{f.n} {f.m}", *rows]) + "\n"


def parse_field(text: str) -> CrossField:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    try:
        n, m = (int(v) for v in lines[0].split())
    except (IndexError, ValueError):
        raise ValueError("field header must be 'n m'") from None
    rows = lines[1:]
    if len(rows) != m:
        raise ValueError(f"expected {m} rows, got {len(rows)}")
    cells = np.zeros((m, n), dtype=np.uint8)
    for t, row in enumerate(rows):
        if len(row) != n or set(row) - {".", "x"}:
            raise ValueError(f"row {t + 1} must be {n} characters from '.x'")
        cells[t] = [ch == "x" for ch in row]
    return CrossField(cells)


def format_boundary(bd: BoundaryData) -> str:
    return "".join(str(int(v)) for v in bd.sources) + "\n" + " ".join(str(int(v)) for v in bd.sinks) + "\n"


def parse_boundary(text: str, model) -> BoundaryData:
    lines = text.splitlines()
    if len(lines) < 2:
        raise ValueError("boundary needs a sources line and a sinks line")
    src = lines[0].strip()
    if set(src) - {"0", "1"}:
        raise ValueError("sources line must be a string of 0/1")
    sinks = [int(v) for v in lines[1].split()]
    return BoundaryData(model, np.array([int(c) for c in src], dtype=np.int64), np.array(sinks, dtype=np.int64))
