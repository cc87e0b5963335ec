"""Tests for the Markov operator, transfunction and transport plan correspondence."""

import numpy as np
import pandas as pd
import pytest

from aech_cli_transfunction.errors import MarkovError
from aech_cli_transfunction.geometry import MetricSpace
from aech_cli_transfunction.markov import (
    MARKOV_TOLERANCE,
    MarkovMatrix,
    TransportPlan,
    b_mu,
    b_mu_inv,
    markov_from_plan,
    markov_suite,
    markov_to_transfunction,
    metric_cost,
    mk_cost,
    plan_from_markov,
    plan_relation_report,
    read_cost_csv,
    rebase,
    transfunction_to_markov,
)
from aech_cli_transfunction.measures import Measure
from aech_cli_transfunction.transfunctions import DensityScale, Pushforward


def points(n: int, space_id: str) -> MetricSpace:
    return MetricSpace(np.arange(n, dtype=float), space_id=space_id)


def random_plan(rng: np.random.Generator, n_x: int, n_y: int) -> TransportPlan:
    """A strictly positive plan whose marginals are its own row and column sums."""
    kappa = rng.uniform(0.1, 1.0, size=(n_x, n_y))
    kappa /= kappa.sum()
    x, y = points(n_x, "X"), points(n_y, "Y")
    return TransportPlan(kappa, Measure(x, kappa.sum(axis=1)), Measure(y, kappa.sum(axis=0)))


@pytest.mark.parametrize("n_x,n_y", [(2, 2), (3, 4), (5, 3), (6, 6)])
def test_roundtrip_suite(rng, n_x, n_y):
    t = markov_from_plan(random_plan(rng, n_x, n_y))
    report = markov_suite(t)
    assert report.valid
    assert report.passed
    assert report.roundtrip_error <= MARKOV_TOLERANCE
    assert report.plan_marginal_error <= MARKOV_TOLERANCE
    assert report.relation.exhaustive
    assert report.relation.pairs_checked == 2**n_x * 2**n_y


def test_sampled_relation_on_larger_spaces(rng):
    t = markov_from_plan(random_plan(rng, 8, 7))
    report = plan_relation_report(t, trials=100)
    assert not report.exhaustive
    assert report.pairs_checked == 100
    assert report.passed


def test_identity_operator():
    x = points(4, "X")
    mu = Measure(x, [0.1, 0.2, 0.3, 0.4])
    phi = markov_to_transfunction(MarkovMatrix(mu, mu, np.eye(4)))
    assert np.allclose(phi.matrix, np.eye(4), atol=1e-15)


def test_constant_rows_give_a_rank_one_map():
    x, y = points(3, "X"), points(2, "Y")
    mu = Measure(x, [0.5, 0.25, 0.25])
    nu = Measure(y, [0.75, 0.25])
    m = np.tile(mu.weights, (2, 1))
    phi = markov_to_transfunction(MarkovMatrix(mu, nu, m))
    image = phi(Measure.dirac(x, 1, 2.0))
    assert np.allclose(image.weights, 2.0 * nu.weights)


def test_permutation_pushforward_gives_a_permutation_matrix():
    x = points(3, "X")
    sigma = np.array([2, 0, 1])
    mu = Measure(x, [0.2, 0.3, 0.5])
    phi = Pushforward(x, x, sigma)
    t = transfunction_to_markov(phi, mu, phi(mu))
    expected = np.zeros((3, 3))
    expected[sigma, np.arange(3)] = 1.0
    assert np.allclose(t.matrix, expected, atol=1e-15)


def test_mass_losing_transfunctions_are_rejected():
    x = points(3, "X")
    mu = Measure(x, [0.2, 0.3, 0.5])
    phi = DensityScale(Pushforward.identity(x), np.full(3, 0.5))
    with pytest.raises(MarkovError, match="total-measure-preserving"):
        transfunction_to_markov(phi, mu, phi(mu))


def test_swap_plan():
    x = points(2, "X")
    half = Measure(x, [0.5, 0.5])
    plan = TransportPlan(np.array([[0.0, 0.5], [0.5, 0.0]]), half, half)
    t = markov_from_plan(plan)
    assert np.array_equal(t.matrix, [[0.0, 1.0], [1.0, 0.0]])
    assert np.array_equal(plan_from_markov(t).kappa, plan.kappa)


def test_monge_kantorovich_cost():
    x = points(2, "X")
    half = Measure(x, [0.5, 0.5])
    cost = metric_cost(x, x)
    diagonal = TransportPlan(np.diag([0.5, 0.5]), half, half)
    product = TransportPlan(np.full((2, 2), 0.25), half, half)
    assert mk_cost(diagonal, np.zeros((2, 2))) == 0.0
    assert mk_cost(diagonal, cost) == 0.0
    assert mk_cost(product, cost) == pytest.approx(0.5)


def test_metric_cost_between_spaces():
    cost = metric_cost(points(2, "X"), MetricSpace([[0.5], [3.0]], space_id="Y"))
    assert np.allclose(cost, [[0.5, 3.0], [0.5, 2.0]])


def test_cost_csv(tmp_path):
    x, y = points(2, "X"), points(3, "Y")
    pd.DataFrame([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0]], index=[0, 1], columns=[0, 1, 2]).to_csv(tmp_path / "c.csv")
    cost = read_cost_csv(tmp_path / "c.csv", x, y)
    assert cost.shape == (2, 3)
    assert cost[1, 2] == 1.0


def test_density_isometry(rng):
    x = points(5, "X")
    mu = Measure(x, rng.uniform(0.1, 1.0, size=5))
    f = rng.uniform(-1.0, 1.0, size=5)
    rho = b_mu(f, mu)
    assert rho.norm == pytest.approx(float(np.sum(np.abs(f) * mu.weights)))
    assert np.allclose(b_mu_inv(rho, mu), f)


def test_density_needs_a_positive_base():
    x = points(3, "X")
    with pytest.raises(MarkovError, match="density undefined"):
        b_mu_inv(Measure.uniform(x), Measure.dirac(x, 0))


def test_violations_name_the_row():
    x = points(2, "X")
    half = Measure(x, [0.5, 0.5])
    t = MarkovMatrix(half, half, np.array([[0.5, 0.25], [0.5, 0.5]]))
    problems = t.violations()
    assert any(p.startswith("row y=0") for p in problems)
    assert any(p.startswith("column x=1") for p in problems)
    report = markov_suite(t)
    assert not report.valid and not report.passed
    with pytest.raises(MarkovError):
        t.validate()


def test_rebase_keeps_the_transfunction(rng):
    t = markov_from_plan(random_plan(rng, 4, 3))
    phi = markov_to_transfunction(t)
    raw = rng.uniform(0.1, 1.0, size=4)
    mu_new = Measure(t.mu.space, raw / raw.sum())
    t_new, plan_new = rebase(phi, mu_new)
    assert np.allclose(markov_to_transfunction(t_new).matrix, phi.matrix, rtol=0, atol=1e-12)
    assert max(plan_new.marginal_errors()) <= MARKOV_TOLERANCE


def test_plans_must_match_their_marginals():
    x = points(2, "X")
    half = Measure(x, [0.5, 0.5])
    with pytest.raises(MarkovError):
        markov_from_plan(TransportPlan(np.array([[0.5, 0.25], [0.0, 0.25]]), half, half))
