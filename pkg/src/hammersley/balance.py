"""Single-vertex input/output maps and exact checks that they preserve the boundary laws."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import ModelKind, alpha_star, parse_rational

DEFAULT_TRUNCATION = 32


def vertex_update(model, X: int, Y: int, xi: int) -> tuple[int, int]:
    """Lines leaving a vertex (top, right) given lines entering it (bottom, left) and the cross."""
    model = ModelKind.parse(model)
    if X not in (0, 1) or xi not in (0, 1):
        raise ValueError("X and xi must be 0 or 1")
    if model is ModelKind.MODEL1:
        if Y not in (0, 1):
            raise ValueError("Model 1 horizontal input must be 0 or 1")
        if X != Y:
            return X, Y
        if X == 0 and xi == 1:
            return 1, 1
        return 0, 0
    if Y < 0:
        raise ValueError("Model 2 horizontal input must be a nonnegative integer")
    if (X, Y) == (1, 0):
        return 1, 0
    return xi, Y - X + xi


def _bernoulli(q: Fraction, v: int) -> Fraction:
    return q if v else 1 - q


def _geometric0(q: Fraction, k: int) -> Fraction:
    # P(G - 1 = k) for G ~ Geo(q) on {1, 2, ...}
    return q * (1 - q) ** k


@dataclass
class AtomCheck:
    atom: tuple[int, int]
    expected: Fraction
    got: Fraction

    @property
    def equal(self) -> bool:
        return self.expected == self.got


@dataclass
class PushforwardReport:
    model: ModelKind
    alpha: Fraction
    p: Fraction
    alpha_star: Fraction
    truncation: int | None
    input_law: dict[tuple[int, int, int], Fraction] = field(default_factory=dict)
    atoms: list[AtomCheck] = field(default_factory=list)
    identity_holds: bool | None = None
    identity_checks: list[tuple[int, bool]] = field(default_factory=list)
    symbolic_identity: bool | None = None

    @property
    def first_violation(self) -> AtomCheck | None:
        return next((a for a in self.atoms if not a.equal), None)

    @property
    def passed(self) -> bool:
        return (
            self.first_violation is None
            and self.identity_holds is not False
            and self.symbolic_identity is not False
        )

    def as_record(self) -> dict:
        bad = self.first_violation
        return {
            "model": self.model.value,
            "alpha": str(self.alpha),
            "p": str(self.p),
            "alpha_star": str(self.alpha_star),
            "truncation": self.truncation,
            "atoms_checked": len(self.atoms),
            "identity_holds": self.identity_holds,
            "symbolic_identity": self.symbolic_identity,
            "first_violation": None if bad is None else {
                "atom": list(bad.atom), "expected": str(bad.expected), "got": str(bad.got)},
            "atoms": [
                {"atom": list(a.atom), "expected": str(a.expected), "got": str(a.got), "equal": a.equal}
                for a in self.atoms
            ],
            "passed": self.passed,
        }


def pushforward_check(model, alpha, p, K: int = DEFAULT_TRUNCATION, star=None) -> PushforwardReport:
    """Push the product input law through ``vertex_update`` in exact rationals.

    The output law must equal Ber(alpha) x (sink law). ``star`` replaces the
    stationary sink parameter, which turns the check into a negative control.
    Model 2 inputs with Y <= K + 1 are enumerated, which determines every
    output atom with Y' <= K exactly.
    """
    model = ModelKind.parse(model)
    alpha, p = parse_rational(alpha), parse_rational(p)
    if not (0 < alpha < 1 and 0 < p < 1):
        raise ValueError("alpha and p must lie in (0, 1)")
    stationary = alpha_star(model, alpha, p)
    star = stationary if star is None else parse_rational(star)
    report = PushforwardReport(model, alpha, p, star, None if model is ModelKind.MODEL1 else K)

    if model is ModelKind.MODEL1:
        ys = range(2)
        sink_law = _bernoulli
    else:
        ys = range(K + 2)
        sink_law = _geometric0

    out: dict[tuple[int, int], Fraction] = {}
    for X in (0, 1):
        for Y in ys:
            for xi in (0, 1):
                w = _bernoulli(alpha, X) * sink_law(star, Y) * _bernoulli(p, xi)
                report.input_law[(X, Y, xi)] = w
                key = vertex_update(model, X, Y, xi)
                out[key] = out.get(key, Fraction(0)) + w

    out_ys = range(2) if model is ModelKind.MODEL1 else range(K + 1)
    for Xo in (0, 1):
        for Yo in out_ys:
            expected = _bernoulli(alpha, Xo) * sink_law(star, Yo)
            report.atoms.append(AtomCheck((Xo, Yo), expected, out.get((Xo, Yo), Fraction(0))))

    if model is ModelKind.MODEL2:
        report.identity_holds, report.identity_checks = _geometric_identity(alpha, p, star, K)
        report.symbolic_identity = geometric_identity_symbolic()
    return report


def _geometric_identity(alpha: Fraction, p: Fraction, star: Fraction, K: int):
    """P(X'=1, Y'=k) against P(X=1, Y=k) for k >= 1.

    Both sides share the factor star (1 - star)^(k - 1), so the identity for
    every k reduces to the k-free equation
    p [(1 - alpha) + alpha (1 - star)] = alpha (1 - star);
    the per-k forms up to K are checked as well.
    """
    reduced = p * ((1 - alpha) + alpha * (1 - star)) == alpha * (1 - star)
    checks = []
    for k in range(1, K + 1):
        lhs = p * star * (1 - star) ** (k - 1) * ((1 - alpha) + alpha * (1 - star))
        rhs = alpha * star * (1 - star) ** k
        checks.append((k, lhs == rhs))
    return reduced and all(ok for _, ok in checks), checks


def _identity_numerator(a: Fraction, p: Fraction) -> Fraction:
    # alpha* = (a - p) / (a (1 - p)); the k-free identity times a (1 - p),
    # written as a polynomial in (a, p) with integer coefficients
    num, den = a - p, a * (1 - p)
    lhs = p * (1 - a) * den + p * a * (den - num)
    rhs = a * (den - num)
    return lhs - rhs


def geometric_identity_symbolic() -> bool:
    """The Model 2 identity as a polynomial identity in (alpha, p).

    After clearing denominators the difference of the two sides is a
    polynomial of degree at most 3 in each variable; vanishing on a 5 x 5 grid
    of distinct rationals forces it to be identically zero.
    """
    grid = [Fraction(k, 7) for k in range(1, 6)]
    return all(_identity_numerator(a, p) == 0 for a in grid for p in grid)
