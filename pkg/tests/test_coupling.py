import numpy as np
import pytest

from hammersley.coupling import (
    CoupledPair,
    coupled_step,
    cross_audit,
    discrepancy,
    event_e,
    forbidden_pattern_scan,
    lemma_inequality_check,
    run_window,
    z_step,
)
from hammersley.experiments import coupling_sweep


def test_z_step_examples():
    # right to left: 5 creates, then the cross at 2 pulls that particle to 2
    assert np.flatnonzero(z_step([0] * 6, [0, 1, 0, 0, 1, 0])).tolist() == [1]
    assert np.flatnonzero(z_step([0, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0])).tolist() == [1, 4]
    assert z_step([0, 0, 1, 0, 0], [1, 0, 0, 0, 0]).tolist() == [1, 0, 0, 0, 0]
    assert z_step([0, 1, 1, 0], [0] * 4).tolist() == [0, 1, 1, 0]


def test_coupled_step():
    rng = np.random.default_rng(1)
    X = (rng.random(30) < 0.5).astype(np.uint8)
    row = (rng.random(30) < 0.3).astype(np.uint8)
    out = coupled_step(CoupledPair(X, X.copy()), row)
    assert np.array_equal(out.X, out.Y)
    pair = CoupledPair([1, 0, 0], [0, 0, 1])
    same = coupled_step(pair, [0, 0, 0])
    assert same.X.tolist() == [1, 0, 0] and same.Y.tolist() == [0, 0, 1]


def test_discrepancy():
    pair = CoupledPair([1, 0, 0], [0, 0, 1])
    assert discrepancy(pair, 3) == 2
    assert [discrepancy(pair, k) for k in range(4)] == [0, 1, 1, 2]
    assert discrepancy(CoupledPair([1, 1], [1, 1]), 2) == 0
    with pytest.raises(ValueError):
        discrepancy(pair, 4)


def test_pattern_scan_examples():
    pair = CoupledPair([1, 0, 0, 0], [0, 0, 0, 1])
    assert forbidden_pattern_scan(pair, 4, [1, 0, 0, 0]) == ([1], 1)
    assert forbidden_pattern_scan(pair, 4, [1, 1, 0, 0]) == ([1], 0)
    mirror = CoupledPair([0, 0, 0, 1], [1, 0, 0, 0])
    assert forbidden_pattern_scan(mirror, 4, [1, 0, 0, 0]) == ([1], 1)
    assert forbidden_pattern_scan(CoupledPair([1, 0], [1, 0]), 2, [1, 0]) == ([], 0)
    assert event_e([0, 1, 0, 0], 2, 3)
    with pytest.raises(ValueError):
        forbidden_pattern_scan(pair, 1, [0] * 4)


def test_inequality_examples():
    same = CoupledPair([1, 0, 1, 0, 0, 1], [1, 0, 1, 0, 0, 1])
    r = lemma_inequality_check(same, [0, 1, 0, 0, 1, 0], 2, 2)
    assert r.holds and r.delta_after == 0 and r.A == 0

    X = [1, 0, 0, 0, 1, 0, 0, 1]
    Y = [0, 0, 0, 1, 1, 0, 0, 1]
    r = lemma_inequality_check(CoupledPair(X, Y), [1, 0, 0, 0, 0, 0, 0, 0], 4, 1)
    assert r.A == 1 and r.patterns == (1,)
    assert r.delta_before == 2 and r.delta_after == 0
    assert r.bound == r.delta_before - 1 and r.holds

    with pytest.raises(ValueError):
        lemma_inequality_check(CoupledPair(X, Y), [0] * 8, 4, 2)


def test_prefix_crosses_never_increase():
    rng = np.random.default_rng(5)
    for _ in range(2000):
        N = 40
        pair = CoupledPair((rng.random(N) < 0.4).astype(np.uint8), (rng.random(N) < 0.6).astype(np.uint8))
        row = (rng.random(N) < 0.3).astype(np.uint8)
        k = int(rng.integers(1, N + 1))
        for x, before, after in cross_audit(pair, row, k):
            if x <= k:
                assert after <= before


def test_total_discrepancy_step_bound():
    rng = np.random.default_rng(6)
    for _ in range(10_000):
        N = 64
        pair = CoupledPair((rng.random(N) < rng.random()).astype(np.uint8),
                           (rng.random(N) < rng.random()).astype(np.uint8))
        row = (rng.random(N) < rng.random()).astype(np.uint8)
        assert discrepancy(coupled_step(pair, row), N) <= discrepancy(pair, N) + 1


def test_run_window_matches_steps():
    rng = np.random.default_rng(7)
    occ = (rng.random(20) < 0.5).astype(np.uint8)
    rows = (rng.random((15, 20)) < 0.3).astype(np.uint8)
    cur = occ
    for row in rows:
        cur = z_step(cur, row)
    assert np.array_equal(run_window(occ, rows), cur)


def test_small_sweep():
    rep = coupling_sweep(3000, seed=4, N=64)
    assert rep.passed and rep.patterns_seen > 0 and rep.audits > 0
