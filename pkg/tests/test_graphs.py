"""Tests for graph carriers, fat graphs and graph-induced transfunctions."""

import numpy as np
import pytest

from aech_cli_transfunction.errors import SpaceMismatchError
from aech_cli_transfunction.geometry import MetricSpace, PointSet, ball
from aech_cli_transfunction.graphs import (
    GraphCarrier,
    base_balls,
    carries,
    exact_graph,
    fat_graph,
    graph_transfunction,
)
from aech_cli_transfunction.localization import estimate_E, is_localized_via
from aech_cli_transfunction.measures import Measure
from aech_cli_transfunction.transfunctions import check_strong_sigma_additive, random_measure

H = 0.1


def test_exact_graph_carries_its_pushforward(heaviside, line):
    report = carries(exact_graph(heaviside.mapping, line, line), heaviside)
    assert report.passed
    assert report.violations == 0
    assert report.rectangles_checked > 0


def test_empty_graph_carries_nothing_nonzero(identity, line):
    report = carries(GraphCarrier.empty(line, line), identity)
    assert not report.passed
    assert report.violation is not None
    assert report.violation.a_members and report.violation.b_members


def test_fat_graph_extremes(line):
    assert not fat_graph(line.ids, 0.0, line, line).relation.any()
    assert fat_graph(line.ids, line.diameter + 0.5, line, line).relation.all()


def test_fat_graph_band(line):
    band = fat_graph(line.ids, 0.15, line, line)
    assert (5, 6) in band and (5, 4) in band and (5, 5) in band
    assert (5, 7) not in band
    assert exact_graph(line.ids, line, line).issubset(band)


def test_fat_graph_forward_and_reverse(convolution, line):
    epsilon = 0.4
    assert is_localized_via(convolution, line.ids, epsilon) == []
    report = carries(fat_graph(line.ids, epsilon, line, line), convolution)
    assert report.passed
    assert estimate_E(convolution).max_e <= epsilon + 2 * H + 1e-9


def test_fat_graph_of_the_identity(identity, line):
    epsilon = 2 * H
    assert is_localized_via(identity, line.ids, epsilon) == []
    assert carries(fat_graph(line.ids, epsilon, line, line), identity).passed
    assert estimate_E(identity).max_e <= epsilon + 2 * H + 1e-9


def test_fat_graph_of_the_heaviside_witnesses(heaviside, line, at):
    report = estimate_E(heaviside)
    witnesses = np.array([p.witness_y for p in report.points])
    assert witnesses[at(line, 0.0)] == at(line, 0.5)

    epsilon = 0.6
    assert is_localized_via(heaviside, witnesses, epsilon) == []
    assert carries(fat_graph(witnesses, epsilon, line, line), heaviside).passed
    assert report.max_e <= epsilon + 2 * H + 1e-9

    # The jump at 0 needs a band wider than 1/2 around the witness 0.5.
    assert is_localized_via(heaviside, witnesses, 0.4) == [at(line, 0.0)]
    narrow = carries(fat_graph(witnesses, 0.4, line, line), heaviside)
    assert not narrow.passed
    assert at(line, 0.0) in narrow.violation.a_members
    assert at(line, 1.0) in narrow.violation.b_members


def test_user_rectangles_only(heaviside, line, at):
    graph = exact_graph(heaviside.mapping, line, line)
    left = PointSet.from_mask(line, line.coords[:, 0] < 0.0)
    one = PointSet(line, (at(line, 1.0),))
    report = carries(graph, heaviside, rectangles=[(left, one)], include_base=False)
    assert report.passed
    assert report.rectangles_checked == 1
    assert report.rectangles_missing_graph == 1

    zero = PointSet(line, (at(line, 0.0),))
    report = carries(GraphCarrier.empty(line, line), heaviside, rectangles=[(left, zero)], include_base=False)
    assert not report.passed
    assert report.violation.b_members == [at(line, 0.0)]


def test_base_balls_include_singletons_and_the_whole_space(line):
    balls = list(base_balls(line))
    sizes = [int(mask.sum()) for _, _, mask in balls]
    assert min(sizes) == 1
    assert max(sizes) == line.size
    assert len({mask.tobytes() for _, _, mask in balls}) == len(balls)
    for center, radius, mask in balls:
        assert np.array_equal(mask, ball(line, center, radius).mask)


def test_base_balls_skip_repeated_sets():
    cloud = MetricSpace([[0.0], [1.0], [3.0]])
    balls = list(base_balls(cloud))
    assert [(c, r) for c, r, _ in balls] == [(0, 1.0), (0, 2.0), (0, 4.0), (1, 1.0), (2, 1.0), (2, 3.0)]
    assert {frozenset(np.flatnonzero(mask).tolist()) for _, _, mask in balls} == {
        frozenset({0}),
        frozenset({0, 1}),
        frozenset({0, 1, 2}),
        frozenset({1}),
        frozenset({2}),
        frozenset({1, 2}),
    }


def test_base_balls_are_streamed():
    space = MetricSpace.line(0.0, 99.9, H)
    first = next(iter(base_balls(space)))
    assert first[0] == 0
    assert first[2].sum() == 1


def test_full_relation_spreads_the_norm(line, rng):
    lam = Measure.uniform(line, 1.0 / line.size)
    phi = graph_transfunction(GraphCarrier.full(line, line), lam)
    for _ in range(20):
        mu = random_measure(line, rng)
        assert np.allclose(phi(mu).weights, mu.norm * lam.weights, rtol=0, atol=1e-12)


def test_diagonal_relation_scales_point_masses(line):
    phi = graph_transfunction(GraphCarrier.diagonal(line), Measure.uniform(line, 0.5))
    assert phi(Measure.dirac(line, 4)) == Measure.dirac(line, 4, 0.5)


def test_empty_relation_is_zero(line, rng):
    phi = graph_transfunction(GraphCarrier.empty(line, line), Measure.uniform(line))
    assert phi(random_measure(line, rng)).is_zero()


def test_graph_transfunction_is_strongly_additive(line):
    phi = graph_transfunction(fat_graph(line.ids, 0.3, line, line), Measure.uniform(line, 0.2))
    report = check_strong_sigma_additive(phi, trials=200)
    assert report.passed
    assert report.stats["max_gap"] <= 1e-12


def test_spaces_must_match(identity, line):
    other = MetricSpace.line(0.0, 1.0, 0.5, space_id="Y")
    with pytest.raises(SpaceMismatchError):
        carries(GraphCarrier.empty(other, other), identity)
    with pytest.raises(SpaceMismatchError):
        graph_transfunction(GraphCarrier.diagonal(line), Measure.uniform(other))


def test_union_of_graphs(line):
    a = GraphCarrier.from_pairs(line, line, [(0, 1)])
    b = GraphCarrier.from_pairs(line, line, [(2, 3)])
    assert (a | b).pairs() == [(0, 1), (2, 3)]


def test_graph_csv(line, tmp_path):
    graph = fat_graph(line.ids, 0.15, line, line)
    path = graph.to_csv(tmp_path / "graph.csv")
    assert GraphCarrier.read_csv(path, line, line).pairs() == graph.pairs()
