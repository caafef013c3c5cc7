import numpy as np

from hammersley.core import BoundaryData, CrossField, ModelKind, SeedSpec, sample_boundary, sample_cross_field
from hammersley.lines import (
    build_lines,
    build_lines_boundary,
    consumed_sink_units,
    edge_occupancy,
    occupancy_matrix,
    top_exit_count,
)
from hammersley.subseq import boundary_chain_length, longest_chain
from hammersley.svg import render_svg

M1, M2 = ModelKind.MODEL1, ModelKind.MODEL2
STATIONARY_ALPHA = {M1: 0.4, M2: 0.6}


def random_instances(count, n, m, p=0.3, seed=0):
    for r in range(count):
        rep = SeedSpec(seed, replica=r)
        f = sample_cross_field(n, m, p, rep.child("field"))
        for model in (M1, M2):
            bd = sample_boundary(model, n, m, STATIONARY_ALPHA[model], p, rep.child("boundary"))
            yield model, f, bd


def test_empty_field():
    for model in (M1, M2):
        d = build_lines(CrossField.empty(4, 3), model)
        assert len(d) == 0
        assert top_exit_count(d) == 0
        assert not edge_occupancy(d, 2).any()


def test_single_cross():
    f = CrossField.from_points(3, 3, [(2, 3)])
    d = build_lines(f, M1)
    assert len(d) == 1
    line = d.lines[0]
    assert line.entry == ("top", 2) and line.exit == ("right", 3)
    assert edge_occupancy(d, 3).tolist() == [0, 1, 0]
    assert edge_occupancy(d, 2).tolist() == [0, 0, 0]


def test_sink_multiplicity_lines():
    bd = BoundaryData(M2, [0, 0], [2, 0])
    d = build_lines_boundary(CrossField.empty(2, 2), bd, M2)
    assert len(d) == 2
    assert all(line.entry == ("sink", 1) for line in d.lines)
    # with no crosses and no sources each unit runs straight along row 1 to the right side
    assert all(line.exit == ("right", 1) for line in d.lines)
    assert consumed_sink_units(d) == 2


def test_source_line_drops_to_bottom():
    d = build_lines_boundary(CrossField.empty(3, 2), BoundaryData(M1, [0, 1, 0], [0, 0]), M1)
    assert [ln.exit for ln in d.lines] == [("source", 2)]
    assert [ln.entry for ln in d.lines] == [("top", 2)]
    assert edge_occupancy(d, 0).tolist() == [0, 1, 0]


def test_zero_boundary_matches_plain():
    for r in range(50):
        f = sample_cross_field(6, 6, 0.35, SeedSpec(3, replica=r))
        for model in (M1, M2):
            assert build_lines(f, model) == build_lines_boundary(f, BoundaryData.zero(model, 6, 6), model)


def test_count_equals_boundary_chain():
    for model, f, bd in random_instances(1000, 6, 6, seed=1):
        assert len(build_lines_boundary(f, bd, model)) == boundary_chain_length(f, bd, model)


def test_count_equals_chain_large():
    for r in range(10):
        f = sample_cross_field(50, 50, 0.2, SeedSpec(8, replica=r))
        for model in (M1, M2):
            assert len(build_lines(f, model)) == longest_chain(f, model)


def test_lines_minus_top_exits_is_sink_units():
    for model, f, bd in random_instances(1000, 8, 8, seed=2):
        d = build_lines_boundary(f, bd, model)
        assert len(d) - top_exit_count(d) == consumed_sink_units(d) == int(bd.sinks.sum())
        assert int(edge_occupancy(d, d.m).sum()) == top_exit_count(d)


def test_edge_and_point_invariants():
    for model, f, bd in random_instances(300, 7, 7, seed=3):
        d = build_lines_boundary(f, bd, model)
        assert max(d.vertical_edges().values(), default=0) <= 1
        if model is M1:
            assert max(d.horizontal_edges().values(), default=0) <= 1
        pts = [p for line in d.lines for p in line.points]
        assert sorted(pts) == sorted(f.points())
        assert sum(1 for line in d.lines if line.exit[0] == "source") == int(bd.sources.sum())
        for line in d.lines:
            v = line.vertices
            # south and east steps only
            assert all(b[0] >= a[0] and b[1] <= a[1] for a, b in zip(v, v[1:]))


def test_restriction_consistency():
    for r in range(100):
        f = sample_cross_field(8, 8, 0.35, SeedSpec(4, replica=r))
        for model in (M1, M2):
            full = build_lines(f, model)
            occ = occupancy_matrix(full)
            hfull = full.horizontal_edges()
            for n2, m2 in [(8, 5), (4, 8), (5, 3), (1, 1)]:
                sub = build_lines(f.restrict(n2, m2), model)
                assert np.array_equal(occupancy_matrix(sub), occ[:m2 + 1, :n2])
                hsub = sub.horizontal_edges()
                keep = {k: v for k, v in hfull.items() if k[0] <= n2 and k[1] <= m2}
                assert {k: v for k, v in hsub.items()} == keep


def test_particle_count_is_chain_length():
    for r in range(200):
        f = sample_cross_field(8, 8, 0.3, SeedSpec(6, replica=r))
        for model in (M1, M2):
            occ = occupancy_matrix(build_lines(f, model))
            for t in range(1, 9):
                assert occ[t].sum() == longest_chain(f.restrict(8, t), model)


def test_svg_is_deterministic():
    f = sample_cross_field(6, 5, 0.4, 7)
    bd = sample_boundary(M2, 6, 5, 0.6, 0.4, 7)
    d = build_lines_boundary(f, bd, M2)
    a, b = render_svg(d, f), render_svg(build_lines_boundary(f, bd, M2), f)
    assert a == b
    assert a.count("<polyline") == len(d)
    assert a.count("<path") == len(f.points())
    assert a.count("data-source") == int(bd.sources.sum())
