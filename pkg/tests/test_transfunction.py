"""Tests for transfunction kinds, sampling checks and the null space."""

import itertools

import numpy as np
import pytest

from aech_cli_transfunction.errors import SpaceMismatchError, TransfunctionError
from aech_cli_transfunction.geometry import MetricSpace, PointSet, ball, greedy_cover
from aech_cli_transfunction.measures import Measure, is_carried, project
from aech_cli_transfunction.transfunctions import (
    Composition,
    Convolution,
    DensityScale,
    GraphInduced,
    Kernel,
    MatrixTransfunction,
    Projection,
    Pushforward,
    RankOne,
    build_grid_map,
    check_monotone,
    check_norm_preserving,
    check_strong_sigma_additive,
    check_weak_sigma_additive,
    compose,
    random_measure,
    relative_gap,
    restrict,
    support_and_null,
)
from aech_cli_transfunction.graphs import fat_graph


def test_identity_returns_its_input(identity, rng):
    for _ in range(50):
        mu = random_measure(identity.domain, rng)
        assert identity.apply(mu) == mu


def test_heaviside_point_masses(line, heaviside, at):
    assert heaviside(Measure.dirac(line, at(line, -0.5))) == Measure.dirac(line, at(line, 0.0))
    assert heaviside(Measure.dirac(line, at(line, 0.3))) == Measure.dirac(line, at(line, 1.0))


def test_rank_one_spreads_every_measure_over_nu(line, rng):
    nu = Measure.from_sparse(line, {0: 0.5, 20: 0.5})
    phi = RankOne(line, nu)
    for _ in range(50):
        mu = random_measure(line, rng)
        image = phi(mu)
        assert image.norm == pytest.approx(mu.norm)
        assert image.support == nu.support


@pytest.mark.parametrize("name", ["identity", "heaviside", "reflect"])
def test_pushforwards_pass_the_additivity_samplers(line, name):
    phi = Pushforward(line, line, build_grid_map(name, {}, line, line))
    assert check_weak_sigma_additive(phi, trials=100).passed
    assert check_strong_sigma_additive(phi, trials=100).passed
    assert check_norm_preserving(phi, trials=100).passed
    assert check_monotone(phi, trials=100).passed


def test_graph_induced_is_strongly_additive(line):
    phi = GraphInduced(fat_graph(line.ids, 0.3, line, line), Measure.uniform(line, 0.2))
    report = check_strong_sigma_additive(phi, trials=100)
    assert report.passed
    assert report.tolerance == 1e-12


def test_rank_one_passes_on_positive_measures(line):
    phi = RankOne(line, Measure.dirac(line, 3))
    assert check_weak_sigma_additive(phi, trials=100).passed
    assert check_strong_sigma_additive(phi, trials=100).passed
    assert phi.weakly_additive is None


def test_density_scale_halves_the_norm(identity):
    phi = DensityScale(identity, np.full(identity.codomain.size, 0.5))
    report = check_norm_preserving(phi, trials=20)
    assert not report.passed
    assert report.counterexample.discrepancy == pytest.approx(0.5)


def test_unit_kernel_convolution_preserves_norm(convolution, line):
    assert convolution.norm_preserving is True
    assert check_norm_preserving(convolution).passed
    assert convolution(Measure.uniform(line)).norm == pytest.approx(21.0, abs=1e-12)


def test_uniform_kernel_offsets(line):
    kernel = Kernel.uniform(line, 0.3)
    assert sorted(kernel.offsets[:, 0].tolist()) == [-2, -1, 0, 1, 2]
    assert kernel.mass == pytest.approx(1.0)
    assert kernel.radius == pytest.approx(0.2)


def test_truncating_convolution_loses_mass_at_the_edge(line):
    phi = Convolution(line, Kernel.uniform(line, 0.3), boundary="truncate")
    image = phi(Measure.dirac(line, 0))
    assert image.norm == pytest.approx(0.6)
    assert phi.norm_preserving is None


def test_convolution_needs_a_grid():
    cloud = MetricSpace([[0.0], [1.0], [3.0]])
    line = MetricSpace.line(0.0, 1.0, 0.5)
    with pytest.raises(TransfunctionError):
        Convolution(cloud, Kernel.dirac(line))


def test_null_space_and_support(line, identity):
    a = PointSet(line, tuple(range(5, 16)))
    support, null = support_and_null(Projection(a))
    assert support == a
    assert null == a.complement()

    support, null = support_and_null(identity)
    assert support == line.all_points()
    assert null.is_empty()

    g = np.where(line.coords[:, 0] < 0.0, 0.0, 1.0)
    _, null = support_and_null(DensityScale(identity, g))
    assert null == PointSet.from_mask(line, line.coords[:, 0] < 0.0)


def test_composition_examples(line, identity, convolution, heaviside, rng):
    a = PointSet(line, tuple(range(0, 12)))
    b = PointSet(line, tuple(range(8, 21)))
    both = compose(Projection(a), Projection(b))
    meet = Projection(a.intersection(b))
    psi = compose(heaviside, convolution)
    for _ in range(50):
        mu = random_measure(line, rng)
        assert relative_gap(compose(identity, convolution)(mu), convolution(mu)) <= 1e-12
        assert both(mu) == meet(mu)
        assert relative_gap(psi(mu), convolution(heaviside(mu))) <= 1e-12
    assert len(compose(psi, identity).stages) == 3


def test_composition_checks_spaces(line):
    other = MetricSpace.line(0.0, 1.0, 0.5, space_id="Y")
    with pytest.raises(SpaceMismatchError):
        Composition([Pushforward.identity(line), Pushforward.identity(other)])


def test_apply_checks_the_domain(identity):
    other = MetricSpace.line(0.0, 1.0, 0.5, space_id="Y")
    with pytest.raises(SpaceMismatchError):
        identity(Measure.uniform(other))


def test_matrix_transfunctions_are_positive(line):
    with pytest.raises(TransfunctionError):
        MatrixTransfunction(line, line, -np.eye(line.size))
    phi = MatrixTransfunction(line, line, np.eye(line.size))
    assert phi.norm_preserving is True


def test_spatial_relationship_by_enumeration(rng):
    space = MetricSpace.line(0.0, 0.4, 0.1)
    maps = [rng.integers(0, space.size, size=space.size) for _ in range(4)]
    phis = [Pushforward(space, space, m) for m in maps] + [Convolution(space, Kernel.uniform(space, 0.2))]
    subsets = [PointSet(space, c) for r in range(space.size + 1) for c in itertools.combinations(space.ids, r)]
    for phi in phis:
        for a1, a2 in itertools.combinations(subsets[::3], 2):
            union = a1.union(a2)
            image = phi.image_of(union)
            b1 = image.union(PointSet(space, (0,)))
            b2 = image.union(PointSet(space, (space.size - 1,)))
            mu = random_measure(space, rng)
            out = phi(project(mu, union))
            assert is_carried(out, b1.intersection(b2))
            assert is_carried(out, b1.union(b2))


def test_cover_lemma(line, convolution, rng):
    u = PointSet(line, tuple(range(3, 14)))
    target = convolution.image_of(u)
    for _ in range(50):
        mu = random_measure(line, rng)
        for c in greedy_cover(line, 0.25):
            piece = ball(line, c, 0.25).intersection(u)
            assert is_carried(convolution(project(mu, piece)), target)
        assert is_carried(convolution(project(mu, u)), target)


def test_restriction_identities(line, identity, rng):
    a = PointSet(line, tuple(range(4, 9)))
    phi = compose(Projection(a), identity)
    support, null = support_and_null(phi)
    for _ in range(50):
        mu = random_measure(line, rng)
        assert restrict(phi, support)(mu) == phi(mu)
        assert restrict(phi, null)(mu).is_zero()


def test_pushforward_carrier_law(line, heaviside, rng):
    for _ in range(200):
        mu = random_measure(line, rng)
        a = PointSet.from_mask(line, rng.random(line.size) < 0.5)
        assert is_carried(mu, heaviside.preimage(a)) == is_carried(heaviside(mu), a)


def test_unknown_map_name(line):
    with pytest.raises(TransfunctionError):
        build_grid_map("spiral", {}, line, line)
