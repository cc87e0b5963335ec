"""Tests for localization witnesses, the E estimate and D_eps."""

import numpy as np
import pytest

from aech_cli_transfunction.errors import LocalizationError
from aech_cli_transfunction.geometry import MetricSpace, PointSet
from aech_cli_transfunction.localization import (
    check_uniform,
    estimate_D_eps,
    estimate_E,
    floor_ball,
    is_localized_at,
    is_localized_via,
    probe_ball,
    resolve_delta_min,
    semicontinuity_violations,
)
from aech_cli_transfunction.measures import Measure
from aech_cli_transfunction.transfunctions import Projection, Pushforward, RankOne, build_grid_map

H = 0.1


def test_heaviside_is_half_localized_at_zero(heaviside, line, at):
    report = estimate_E(heaviside)
    e = report.e_values()
    assert e[at(line, 0.0)] == pytest.approx(0.5)
    for x in range(line.size):
        if x != at(line, 0.0):
            assert e[x] == 0.0
    assert e[at(line, -H)] == 0.0
    assert e[at(line, H)] == 0.0
    assert report.points[at(line, 0.0)].witness_coords == pytest.approx([0.5])
    assert not report.probe_based_lower_bound


def test_sum_of_heavisides():
    x_space = MetricSpace.line(-1.0, 3.0, H, space_id="X")
    y_space = MetricSpace.line(0.0, 7.0, H, space_id="Y")
    mapping = build_grid_map("heaviside_sum", {"centers": [0.0, 1.0, 2.0]}, x_space, y_space)
    report = estimate_E(Pushforward(x_space, y_space, mapping))
    for n, expected in enumerate([0.5, 1.0, 2.0]):
        x = int(x_space.nearest([float(n)])[0])
        assert report.points[x].e_est == pytest.approx(expected)


def test_heaviside_witnesses_at_zero(heaviside, line, at):
    zero = at(line, 0.0)
    assert is_localized_at(heaviside, zero, H, 0.4) is None
    assert is_localized_at(heaviside, zero, H, 0.5) is None
    assert is_localized_at(heaviside, zero, H, 0.51) == at(line, 0.5)
    assert is_localized_at(heaviside, at(line, -H), H, 0.01) == at(line, 0.0)
    assert is_localized_at(heaviside, at(line, -H), 2 * H, 0.5) is None


def test_floor_ball_looks_backward(identity, line, at):
    zero = at(line, 0.0)
    assert floor_ball(identity, zero, H).members == (at(line, -H), zero)
    assert floor_ball(identity, 0, H).members == (0,)
    assert probe_ball(identity, zero, 2 * H, H).members == (at(line, -H), zero, at(line, H))


def test_identity_spreads_by_one_step(identity):
    e = np.asarray(estimate_E(identity).e_values())
    assert e[0] == 0.0
    assert np.allclose(e[1:], H)


def test_convolution_is_localized_at_its_radius(convolution, line):
    report = estimate_E(convolution)
    for p in report.points:
        if abs(p.coords[0]) <= 0.7 + 1e-9:
            assert p.e_est == pytest.approx(0.3)
        assert 0.3 - H - 1e-9 <= p.e_est <= 0.3 + 2 * H + 1e-9
    assert report.max_e == pytest.approx(0.3)


def test_projection_vanishes_outside_its_set(line):
    a = PointSet.from_mask(line, np.abs(line.coords[:, 0]) <= 0.5 + 1e-9)
    report = estimate_E(Projection(a))
    for p in report.points:
        if abs(p.coords[0]) >= 0.7 - 1e-9:
            assert p.e_est == 0.0


def test_rank_one_is_flagged_non_local(line):
    phi = RankOne(line, Measure.from_sparse(line, {0: 0.5, 20: 0.5}))
    report = estimate_E(phi)
    assert all(p.non_local for p in report.points)
    assert report.max_e == pytest.approx(1.0)
    assert report.probe_based_lower_bound


def test_localization_is_monotone(convolution, line, rng):
    for _ in range(200):
        x = int(rng.integers(line.size))
        delta = float(rng.choice([0.1, 0.2, 0.3, 0.5]))
        epsilon = float(rng.uniform(0.2, 0.8))
        if is_localized_at(convolution, x, delta, epsilon) is None:
            continue
        smaller = max(H, delta - 0.1)
        assert is_localized_at(convolution, x, smaller, epsilon + 0.1) is not None


def test_delta_radius_is_validated(identity):
    with pytest.raises(LocalizationError):
        is_localized_at(identity, 3, 0.0, 0.5)
    with pytest.raises(LocalizationError):
        is_localized_at(identity, 3, 0.05, 0.5)
    with pytest.raises(LocalizationError):
        resolve_delta_min(identity, -1.0)


def test_zero_images_are_localized_anywhere(line):
    phi = Projection(line.empty())
    assert is_localized_at(phi, 5, 0.5, 0.0) == 0


def test_d_eps_of_identity(identity, line):
    report = estimate_D_eps(identity, 0.25)
    assert all(p.localizable for p in report.points)
    for p in report.points:
        if abs(p.coords[0]) <= 0.7 + 1e-9:
            assert p.d_value == pytest.approx(0.3)


def test_uniform_delta_of_identity(identity):
    assert check_uniform(identity, H) is None
    assert check_uniform(identity, 2 * H) == pytest.approx(2 * H)


def test_heaviside_is_not_uniformly_localized(heaviside, line, at):
    assert check_uniform(heaviside, 0.4) is None
    report = estimate_D_eps(heaviside, 0.4)
    assert not report.points[at(line, 0.0)].localizable
    assert report.points[at(line, 0.0)].d_value == 0.0


@pytest.mark.parametrize("name", ["identity", "convolution"])
def test_d_eps_is_lipschitz_up_to_one_step(name, request):
    phi = request.getfixturevalue(name)
    report = estimate_D_eps(phi, 0.5)
    d = np.asarray(report.d_values())
    ok = np.array([p.localizable for p in report.points])
    assert ok.all()
    gap = np.abs(d[:, None] - d[None, :]) - phi.domain.distances
    assert gap.max() <= H + 1e-9


def test_localized_via_identity(identity, line):
    assert is_localized_via(identity, line.ids, 2 * H) == []
    assert is_localized_via(identity, line.ids, H) == list(range(1, line.size))
    assert is_localized_via(identity, line.ids, 0.0) == list(range(line.size))
    skipped = np.full(line.size, -1)
    assert is_localized_via(identity, skipped, 0.0) == []


def test_report_frames(convolution):
    report = estimate_E(convolution, epsilon=0.5)
    assert report.uniform is not None
    assert list(report.to_frame().columns) == [
        "id", "x0", "e_est", "witness_y", "y0", "witness_delta", "non_local"
    ]
    frame = estimate_D_eps(convolution, 0.5).to_frame()
    assert list(frame.columns) == ["id", "x0", "d_eps", "localizable"]
    assert len(frame) == 21


@pytest.mark.parametrize("name", ["identity", "heaviside", "convolution"])
def test_reported_e_is_upper_semicontinuous(name, request):
    phi = request.getfixturevalue(name)
    e = estimate_E(phi).e_values()
    assert semicontinuity_violations(phi, e) == []
    assert semicontinuity_violations(phi, e, reach=3 * H) == []


def test_a_spike_in_e_breaks_semicontinuity(identity, line, at):
    e = np.asarray(estimate_E(identity).e_values())
    zero = at(line, 0.0)
    e[zero] = 0.5
    bad = semicontinuity_violations(identity, e)
    assert bad
    assert {q for _, q in bad} == {zero}
    assert (at(line, H), zero) in bad


def test_semicontinuity_needs_one_value_per_point(identity):
    with pytest.raises(LocalizationError):
        semicontinuity_violations(identity, [0.0, 0.1])
