"""Tests for the carrier, projection and orthogonal-sum calculus.

The randomized laws run 1000 cases each on spaces of at most 12 points and
compare weights exactly.
"""

import numpy as np
import pytest

from aech_cli_transfunction.errors import NotOrthogonalError, SignedMeasureError, TransfunctionError
from aech_cli_transfunction.geometry import MetricSpace, PointSet
from aech_cli_transfunction.measures import (
    AmpleFamily,
    Measure,
    check_ample,
    disjoint_carriers,
    is_carried,
    measure_from_record,
    measure_to_record,
    orthogonal,
    orthogonal_sum,
    project,
    read_measure_csv,
    write_measure_csv,
)

CASES = 1000


def small_space(rng: np.random.Generator) -> MetricSpace:
    n = int(rng.integers(1, 13))
    return MetricSpace(np.arange(n, dtype=float))


def random_measure(space: MetricSpace, rng: np.random.Generator) -> Measure:
    w = np.where(rng.random(space.size) < 0.5, rng.uniform(0.1, 1.0, size=space.size), 0.0)
    return Measure(space, w)


def random_set(space: MetricSpace, rng: np.random.Generator) -> PointSet:
    return PointSet.from_mask(space, rng.random(space.size) < 0.5)


def test_carrier_examples(line):
    p = 4
    assert is_carried(Measure.dirac(line, p), PointSet(line, (p,)))
    assert not is_carried(Measure.dirac(line, p), line.empty())
    assert is_carried(Measure.uniform(line), line.all_points())


def test_projection_examples(line):
    mu = Measure.uniform(line)
    a = PointSet(line, (0, 1, 2, 3, 4))
    assert project(mu, a).norm == 5.0
    assert project(mu, line.empty()).is_zero()


def test_orthogonal_examples(line):
    p, q = 3, 8
    assert orthogonal(Measure.dirac(line, p), Measure.dirac(line, q)).members == (p,)
    mu = Measure.uniform(line)
    assert orthogonal(mu, mu) is None
    assert orthogonal(mu, Measure.zero(line)) == mu.support


def test_disjoint_carriers_examples():
    space = MetricSpace(np.arange(5, dtype=float))
    carriers = disjoint_carriers([Measure.dirac(space, 0), Measure.dirac(space, 1), Measure.dirac(space, 2)])
    assert [c.members for c in carriers] == [(0, 3, 4), (1,), (2,)]
    assert disjoint_carriers([Measure.dirac(space, 1)])[0] == space.all_points()
    with pytest.raises(NotOrthogonalError):
        disjoint_carriers([Measure.uniform(space), Measure.dirac(space, 2)])


def test_orthogonal_sum_examples(line):
    total = orthogonal_sum([Measure.dirac(line, 2, 2.0), Measure.dirac(line, 5, 3.0)])
    assert total.norm == 5.0
    assert total.weights[2] == 2.0 and total.weights[5] == 3.0
    assert orthogonal_sum([], line).is_zero()
    with pytest.raises(TransfunctionError):
        orthogonal_sum([])
    mu = Measure.uniform(line)
    assert orthogonal_sum([mu]) == mu


def test_signed_measures_are_rejected(line):
    with pytest.raises(SignedMeasureError):
        Measure(line, -np.ones(line.size))
    signed = Measure(line, -np.ones(line.size), signed=True)
    with pytest.raises(SignedMeasureError):
        project(signed, line.all_points())
    with pytest.raises(SignedMeasureError):
        is_carried(signed, line.all_points())


def test_weight_count_must_match_the_space(line):
    with pytest.raises(TransfunctionError):
        Measure(line, [1.0, 2.0])


def test_carrier_is_upward_closed(rng):
    for _ in range(CASES):
        space = small_space(rng)
        mu = random_measure(space, rng)
        a = mu.support.union(random_set(space, rng))
        b = a.union(random_set(space, rng))
        assert is_carried(mu, a)
        assert is_carried(mu, b)


def test_carriers_are_closed_under_intersection(rng):
    for _ in range(CASES):
        space = small_space(rng)
        mu = random_measure(space, rng)
        carriers = [mu.support.union(random_set(space, rng)) for _ in range(3)]
        common = carriers[0].intersection(carriers[1]).intersection(carriers[2])
        assert all(is_carried(mu, c) for c in carriers)
        assert is_carried(mu, common)


def test_dominated_measures_share_carriers(rng):
    for _ in range(CASES):
        space = small_space(rng)
        nu = random_measure(space, rng)
        mu = Measure(space, nu.weights * rng.uniform(0.0, 1.0, size=space.size))
        a = nu.support.union(random_set(space, rng))
        assert mu.dominated_by(nu)
        assert is_carried(mu, a)


def test_sums_keep_a_common_carrier(rng):
    for _ in range(CASES):
        space = small_space(rng)
        a = random_set(space, rng)
        parts = [project(random_measure(space, rng), a) for _ in range(3)]
        total = parts[0] + parts[1] + parts[2]
        assert is_carried(total, a)


def test_projection_laws(rng):
    for _ in range(CASES):
        space = small_space(rng)
        mu = random_measure(space, rng)
        a = random_set(space, rng)
        once = project(mu, a)
        assert project(once, a) == once
        assert once + project(mu, a.complement()) == mu
        assert is_carried(mu, a) == (once == mu)


def test_orthogonal_sums_project_back(rng):
    for _ in range(CASES):
        space = small_space(rng)
        mu = random_measure(space, rng)
        labels = rng.integers(0, 3, size=space.size)
        parts = [project(mu, PointSet.from_mask(space, labels == k)) for k in range(3)]
        parts = [p for p in parts if not p.is_zero()] or [mu]
        total = orthogonal_sum(parts)
        assert total == mu
        for part, carrier in zip(parts, disjoint_carriers(parts)):
            assert project(total, carrier) == part


def test_ample_family_axioms(rng):
    for _ in range(CASES):
        space = small_space(rng)
        family = AmpleFamily(Measure(space, rng.uniform(0.1, 1.0, size=space.size)))
        subsets = [random_set(space, rng) for _ in range(3)]
        assert check_ample(family, subsets) == []
        for s in subsets:
            if not s.is_empty():
                assert not Measure.indicator(s).is_zero()


def test_ample_family_needs_positive_base(line):
    with pytest.raises(TransfunctionError):
        AmpleFamily(Measure.dirac(line, 0))


def test_sparse_record_keeps_nonzero_weights(line):
    mu = Measure.from_sparse(line, {3: 0.5, 7: 1.5})
    record = measure_to_record(mu)
    assert record == {"space_id": "X", "weights": {"3": 0.5, "7": 1.5}}
    assert measure_from_record(record, line) == mu


def test_measure_csv(line, tmp_path):
    mu = Measure.from_sparse(line, {0: 0.25, 20: 0.75})
    path = write_measure_csv(mu, tmp_path / "mu.csv")
    assert read_measure_csv(path, line) == mu
