"""Tests for finite metric spaces, balls, covers and Chebyshev centers."""

import numpy as np
import pytest

from aech_cli_transfunction.errors import EmptySupportError, TransfunctionError, UnknownPointError
from aech_cli_transfunction.geometry import (
    MetricSpace,
    PointSet,
    ball,
    chebyshev,
    chebyshev_radius,
    closed_ball,
    greedy_cover,
)


def test_line_grid_shape(line):
    assert line.size == 21
    assert line.dimension == 1
    assert line.resolution == pytest.approx(0.1)
    assert line.diameter == pytest.approx(2.0)
    assert line.coords[10, 0] == 0.0
    assert line.triangle_violations() == []


def test_two_dimensional_grid():
    grid = MetricSpace.grid_space([0.0, 0.0], [1.0, 1.0], [0.5, 0.5])
    assert grid.size == 9
    assert grid.resolution == pytest.approx(0.5)
    assert grid.grid.shape == (3, 3)


def test_custom_table_is_validated():
    with pytest.raises(TransfunctionError):
        MetricSpace([[0.0], [1.0]], distances=[[0.0, 1.0], [2.0, 0.0]])
    with pytest.raises(TransfunctionError):
        MetricSpace([[0.0], [1.0]], distances=[[0.0, 0.0], [0.0, 0.0]])


def test_custom_table_must_satisfy_the_triangle_inequality():
    table = [[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]]
    with pytest.raises(TransfunctionError, match=r"triangle inequality: d\(0, 2\) > d\(0, 1\) \+ d\(1, 2\)"):
        MetricSpace([[0.0], [1.0], [2.0]], distances=table)


def test_custom_table_with_a_valid_metric():
    table = [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]
    space = MetricSpace([[0.0], [1.0], [2.0]], distances=table)
    assert space.metric == "custom"
    assert space.triangle_violations() == []


def test_unknown_point(line):
    with pytest.raises(UnknownPointError):
        line.check_point(21)


def test_ball_examples(line, at):
    got = ball(line, at(line, 0.0), 0.15)
    assert got.members == (at(line, -0.1), at(line, 0.0), at(line, 0.1))
    assert ball(line, 3, 0.0).is_empty()
    assert len(ball(line, at(line, 0.0), 10.0)) == 21


def test_open_and_closed_balls_differ_on_the_boundary(line, at):
    x = at(line, 0.0)
    assert len(ball(line, x, 0.1)) == 1
    assert len(closed_ball(line, x, 0.1)) == 3


def test_ball_is_monotone_in_radius(line, rng):
    for _ in range(200):
        x = int(rng.integers(line.size))
        r1, r2 = sorted(rng.uniform(0.0, 2.5, size=2))
        assert ball(line, x, r1).issubset(ball(line, x, r2))


def test_greedy_cover_takes_every_other_point(line):
    assert greedy_cover(line, 0.15) == list(range(0, 21, 2))


def test_greedy_cover_edge_cases(line):
    assert greedy_cover(line, line.diameter + 0.1) == [0]
    single = MetricSpace([[0.0]])
    assert greedy_cover(single, 0.5) == [0]
    with pytest.raises(TransfunctionError):
        greedy_cover(line, 0.0)


@pytest.mark.parametrize("radius", [0.05, 0.15, 0.25, 0.7, 3.0])
def test_greedy_cover_is_sound(line, radius):
    covered = np.zeros(line.size, dtype=bool)
    for c in greedy_cover(line, radius):
        covered |= ball(line, c, radius).mask
        covered[c] = True
    assert covered.all()


def test_chebyshev_examples(line, at):
    everywhere = line.all_points()
    pair = PointSet(line, (at(line, 0.0), at(line, 1.0)))
    center, radius = chebyshev(line, pair, everywhere)
    assert center == at(line, 0.5)
    assert radius == pytest.approx(0.5)

    center, radius = chebyshev(line, PointSet(line, (4,)), everywhere)
    assert (center, radius) == (4, 0.0)

    center, radius = chebyshev(line, everywhere, everywhere)
    assert center == at(line, 0.0)
    assert radius == pytest.approx(1.0)


def test_chebyshev_rejects_empty_sets(line):
    with pytest.raises(EmptySupportError):
        chebyshev(line, line.empty(), line.all_points())
    assert chebyshev_radius(line, line.empty()) == 0.0


def test_chebyshev_radius_bounds(line, rng):
    for _ in range(200):
        s = PointSet.from_mask(line, rng.random(line.size) < 0.3)
        if s.is_empty():
            continue
        radius = chebyshev_radius(line, s)
        diameter = line.distances[np.ix_(s.members, s.members)].max()
        assert (radius == 0.0) == (len(s) == 1)
        assert radius <= diameter + line.tol


def test_nearest_breaks_ties_toward_the_lowest_id(line, at):
    assert line.nearest([0.05])[0] == at(line, 0.0)
    assert line.nearest([7.0])[0] == at(line, 1.0)
