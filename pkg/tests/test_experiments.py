import math
from fractions import Fraction as F

import numpy as np
import pytest

from hammersley.core import CrossField, ModelKind, optimal_boundary
from hammersley.experiments import (
    CSV_FIELDS,
    exact_expectation_small,
    limit_value,
    lpp_estimate,
    mc_estimate,
    phi1,
    poisson_points,
    stationarity_test,
    strict_lis,
    ulam_closed_form,
    ulam_estimate,
    window_stationarity,
)
from hammersley.subseq import longest_chain_brute


def test_limit_examples():
    assert limit_value(1, 1, 1, 0.25) == pytest.approx(2 / 3)
    assert limit_value(1, 1, 2, 0.6) == 1
    assert limit_value(2, 1, 1, 0.25) == pytest.approx(math.sqrt(3) / 2)
    assert limit_value(2, 1, 1, 0.6) == 1


def test_limit_continuous_at_regime_boundary():
    # at p = b/a with b < a: sqrt(p) 2 sqrt(ab) = 2b and p (a + b) = (a + b) b / a,
    # so the numerator is b (1 - p) and the formula gives b
    for a, b in [(F(k + 2), F(k + 1)) for k in range(5)] + [(F(9, 4), F(1)), (F(4), F(1, 4)),
                                                           (F(25, 9), F(1)), (F(3), F(4, 3)), (F(7), F(7, 4))]:
        p = b / a
        num = 2 * b - (a + b) * b / a
        assert num / (1 - p) == min(a, b)
        # the float implementation agrees from both sides
        assert limit_value(1, float(a), float(b), float(p) * (1 - 1e-9)) == pytest.approx(float(min(a, b)), rel=1e-4)
    for a, b in [(F(k), F(k + 1, 2)) for k in range(1, 11)]:
        p = a / (a + b)
        # 2 sqrt(ab p (1-p)) = 2ab/(a+b) and (a - b) p = a(a - b)/(a + b)
        assert 2 * a * b / (a + b) + (a - b) * a / (a + b) == a
        assert limit_value(2, float(a), float(b), float(p) * (1 - 1e-9)) == pytest.approx(float(a), rel=1e-4)


def test_phi1():
    assert phi1(1, 1, F(1, 3), F(1, 4)) == F(2, 3)
    assert phi1(1, 1, 1, F(1, 4)) == 1


def test_phi1_minimized_at_optimal_alpha():
    rng = np.random.default_rng(3)
    grid = np.arange(1, 100) / 100
    done = 0
    while done < 20:
        a, b, p = rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.05, 0.9)
        if p >= min(a / b, b / a):
            continue
        alpha = optimal_boundary(1, a, b, p)[0]
        best = grid[np.argmin(phi1(a, b, grid, p))]
        assert abs(best - alpha) <= 0.01
        assert phi1(a, b, alpha, p) == pytest.approx(limit_value(1, a, b, p))
        done += 1


def test_exact_small():
    assert exact_expectation_small(1, 2, 2, F(1, 2)) == F(19, 16)
    assert exact_expectation_small(2, 2, 2, "1/2") == F(23, 16)
    assert exact_expectation_small(1, 3, 2, 1) == 2
    assert exact_expectation_small(2, 2, 3, 1) == 2
    with pytest.raises(ValueError):
        exact_expectation_small(1, 5, 4, F(1, 2))


def test_mc_small_agrees_with_exact():
    rep = mc_estimate(1, 1, 1, 0.5, 2, 20_000, seed=1)
    assert abs(2 * rep.estimate - 19 / 16) <= 5 * 2 * rep.stderr


def test_report_row_schema():
    row = mc_estimate(2, 1, 1, 0.25, 50, 10, seed=2).as_row()
    assert tuple(row) == CSV_FIELDS
    assert row["pass"] == (abs(row["estimate"] - row["target"]) <= row["tolerance"])


def test_mc_is_reproducible():
    a = mc_estimate(1, 1, 1, 0.25, 60, 8, seed=5)
    b = mc_estimate(1, 1, 1, 0.25, 60, 8, seed=5)
    assert a.as_row() == b.as_row()


def test_stationarity_small_and_negative_control():
    good = stationarity_test(1, 20, 20, 1 / 3, 0.25, 2000, seed=3)
    assert good.passed
    bad = stationarity_test(1, 20, 20, 1 / 3, 0.25, 2000, seed=3, star=0.9)
    assert not bad.slices_ok
    assert bad.identity_ok  # the identity is deterministic, whatever the boundary
    m2 = stationarity_test(2, 20, 20, optimal_boundary(2, 1, 1, 0.25)[0], 0.25, 2000, seed=3)
    assert m2.passed


def test_strict_lis_against_brute():
    rng = np.random.default_rng(9)
    for _ in range(300):
        k = int(rng.integers(0, 9))
        # integer coordinates force ties, which must not chain
        pts = rng.integers(1, 5, size=(k, 2)).astype(float)
        field = CrossField.from_points(4, 4, [tuple(map(int, p)) for p in pts]) if k else CrossField.empty(4, 4)
        assert strict_lis(pts) == longest_chain_brute(field, ModelKind.MODEL1)


def test_ulam_pieces():
    assert ulam_closed_form(10) == pytest.approx(1.814, abs=1e-3)
    vals = [ulam_closed_form(k) for k in (2, 5, 10, 20, 50)]
    assert all(b > a for a, b in zip(vals, vals[1:])) and vals[-1] < 2
    rep = ulam_estimate(3, 400, 5, seed=1)
    assert rep.coupling_ok and rep.grid == 60
    assert len(poisson_points(50, np.random.default_rng(0))) > 0


def test_lpp_small():
    rep = lpp_estimate(0.25, 200, 5, seed=1)
    assert abs(rep.estimate - 2) < 0.2


def test_window_stationarity():
    rep = window_stationarity(512, 100, 0.5, 0.25, 20_000, seed=6)
    assert rep.passed, rep
