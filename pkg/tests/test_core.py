from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hammersley.core import (
    BoundaryData,
    CrossField,
    ModelKind,
    Params,
    SeedSpec,
    TrivialRegimeError,
    alpha_star,
    format_boundary,
    format_field,
    optimal_boundary,
    parse_boundary,
    parse_field,
    parse_rational,
    sample_boundary,
    sample_cross_field,
    scaled_dims,
)


def test_model_parse_and_order():
    assert ModelKind.parse("model2") is ModelKind.MODEL2
    assert ModelKind.parse(1) is ModelKind.MODEL1
    with pytest.raises(ValueError):
        ModelKind.parse("3")
    assert not ModelKind.MODEL1.precedes((1, 1), (2, 1))
    assert ModelKind.MODEL2.precedes((1, 1), (2, 1))
    assert not ModelKind.MODEL2.precedes((1, 1), (1, 2))


def test_field_extremes():
    assert not sample_cross_field(3, 3, 0, 5).cells.any()
    assert sample_cross_field(3, 3, 1, 5).cells.all()


def test_field_density():
    f = sample_cross_field(100, 100, 0.3, SeedSpec(11))
    sigma = np.sqrt(0.3 * 0.7 / 10_000)
    assert abs(f.cells.mean() - 0.3) <= 5 * sigma


def test_field_rejects_bad_input():
    with pytest.raises(ValueError):
        sample_cross_field(0, 3, 0.5, 1)
    with pytest.raises(ValueError):
        sample_cross_field(3, 3, 1.5, 1)
    with pytest.raises(ValueError):
        CrossField(np.array([[2]]))


def test_seed_determinism_and_independence():
    a = sample_cross_field(20, 30, 0.4, SeedSpec(3, "field", 2))
    b = sample_cross_field(20, 30, 0.4, SeedSpec(3, "field", 2))
    c = sample_cross_field(20, 30, 0.4, SeedSpec(3, "field", 3))
    d = sample_cross_field(20, 30, 0.4, SeedSpec(3, "other", 2))
    assert a == b
    assert a != c and a != d


def test_cell_draw_position_fixed():
    # cell (x, t) uses draw (t-1)*n + (x-1), so a sub-rectangle prefix of rows is shared
    big = sample_cross_field(7, 5, 0.5, 9)
    small = sample_cross_field(7, 3, 0.5, 9)
    assert np.array_equal(big.cells[:3], small.cells)


def test_alpha_star_examples():
    assert alpha_star(1, Fraction(1, 2), Fraction(1, 2)) == Fraction(1, 3)
    assert alpha_star(2, Fraction(1, 2), Fraction(1, 4)) == Fraction(2, 3)
    with pytest.raises(ValueError):
        alpha_star(2, Fraction(1, 4), Fraction(1, 4))


@given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100)),
       st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100)))
def test_alpha_star_involution_and_range(alpha, p):
    s = alpha_star(1, alpha, p)
    assert 0 < s < 1
    assert alpha_star(1, s, p) == alpha
    if alpha > p:
        assert 0 < alpha_star(2, alpha, p) < 1


def test_involution_ten_pairs():
    pairs = [(Fraction(i, 11), Fraction(j, 13)) for i, j in zip(range(1, 11), range(2, 12))]
    assert all(alpha_star(1, alpha_star(1, a, p), p) == a for a, p in pairs)


def test_optimal_boundary():
    a, s = optimal_boundary(1, 1, 1, 0.25)
    assert a == pytest.approx(1 / 3) and s == pytest.approx(1 / 3)
    with pytest.raises(TrivialRegimeError):
        optimal_boundary(1, 1, 4, 0.25)
    a2, s2 = optimal_boundary(2, 1, 1, 0.25)
    assert a2 == pytest.approx(0.25 + np.sqrt(3) / 4)
    assert 0 < s2 < 1
    with pytest.raises(TrivialRegimeError):
        optimal_boundary(2, 1, 1, 0.5)


def test_boundary_alpha_one():
    bd = sample_boundary(1, 50, 50, 1.0, 0.5, 4)
    assert bd.sources.all() and not bd.sinks.any()


def test_boundary_laws():
    geo = sample_boundary(2, 1, 10_000, 0.5, 0.25, 8).sinks
    # Geo(2/3) - 1 has mean 1/2 and variance (1/3) / (4/9) = 3/4
    assert abs(geo.mean() - 0.5) <= 5 * np.sqrt(0.75 / 10_000)
    assert geo.min() >= 0

    bd = sample_boundary(1, 10_000, 10_000, 1 / 3, 0.25, 5)
    sigma = np.sqrt((1 / 3) * (2 / 3) / 10_000)
    assert abs(bd.sources.mean() - 1 / 3) <= 5 * sigma
    assert abs(bd.sinks.mean() - 1 / 3) <= 5 * sigma


def test_boundary_validation():
    with pytest.raises(ValueError):
        BoundaryData(1, [0, 1], [2])
    BoundaryData(2, [0, 1], [2])
    with pytest.raises(ValueError):
        BoundaryData(2, [0, 2], [0])


def test_params_and_dims():
    assert scaled_dims(1, 2, 7) == (7, 14)
    assert scaled_dims(0.5, 1, 5) == (2, 5)
    with pytest.raises(ValueError):
        scaled_dims(0.1, 1, 5)
    with pytest.raises(ValueError):
        Params(p=1.0)
    assert Params(a=1, b=2).dims(3) == (3, 6)


def test_text_round_trip():
    f = sample_cross_field(6, 4, 0.5, 2)
    assert parse_field(format_field(f)) == f
    bd = sample_boundary(2, 6, 4, 0.6, 0.25, 2)
    assert parse_boundary(format_boundary(bd), 2) == bd
    assert format_field(CrossField.from_points(3, 2, [(1, 1), (3, 2)])) == "3 2\nx..\n..x\n"


def test_parse_rational():
    assert parse_rational("1/3") == Fraction(1, 3)
    assert parse_rational(0.25) == Fraction(1, 4)
    assert parse_rational("0.1") == Fraction(1, 10)
