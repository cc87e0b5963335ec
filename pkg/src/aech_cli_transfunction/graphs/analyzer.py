"""The carrier predicate and graph-induced transfunctions."""

import logging
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..errors import SpaceMismatchError, TransfunctionError
from ..geometry import MetricSpace, PointSet
from ..measures import Measure
from ..transfunctions import GraphInduced, Transfunction
from .carrier import GraphCarrier
from .models import CarrierReport, Rectangle

logger = logging.getLogger(__name__)

# Balls per block on either side of a rectangle scan.
BLOCK_ROWS = 512

Label = tuple[int, float]


def base_balls(space: MetricSpace) -> Iterator[tuple[int, float, np.ndarray]]:
    """Distinct open balls ball(x, r) over every point and candidate radius.

    Candidate radii are the distinct pairwise distances plus one radius
    beyond the diameter, so singletons and the whole space both appear.
    Balls are built one center at a time as prefixes of the sorted distance
    row; a ball already produced by an earlier center is skipped.

    Yields:
        (center, smallest radius giving the ball, membership mask)
    """
    radii = np.concatenate([space.distinct_distances(), [space.diameter + max(space.resolution, 1.0)]])
    seen: set[bytes] = set()
    for x in range(space.size):
        row = space.distances[x]
        order = np.argsort(row, kind="stable")
        counts = np.searchsorted(row[order], radii - space.tol, side="left")
        sizes, first = np.unique(counts, return_index=True)
        for k, i in zip(sizes, first):
            if k == 0:
                continue
            mask = np.zeros(space.size, dtype=bool)
            mask[order[:k]] = True
            key = np.packbits(mask).tobytes()
            if key in seen:
                continue
            seen.add(key)
            yield x, float(radii[i]), mask


def _blocks(balls: Iterator[tuple[int, float, np.ndarray]]) -> Iterator[tuple[np.ndarray, list[Label]]]:
    rows: list[np.ndarray] = []
    labels: list[Label] = []
    for center, radius, mask in balls:
        rows.append(mask)
        labels.append((center, radius))
        if len(rows) == BLOCK_ROWS:
            yield np.asarray(rows), labels
            rows, labels = [], []
    if rows:
        yield np.asarray(rows), labels


@dataclass
class _Tally:
    checked: int = 0
    missing: int = 0
    violations: int = 0
    first: Rectangle | None = None

    def add(
        self,
        empty: np.ndarray,
        bad: list[tuple[int, int]],
        a_rows: np.ndarray,
        b_rows: np.ndarray,
        a_labels: list[Label] | None = None,
        b_labels: list[Label] | None = None,
    ) -> None:
        self.checked += empty.size
        self.missing += int(np.count_nonzero(empty))
        self.violations += len(bad)
        if bad and self.first is None:
            i, j = bad[0]
            self.first = Rectangle(
                a_members=np.flatnonzero(a_rows[i]).tolist(),
                b_members=np.flatnonzero(b_rows[j]).tolist(),
                a_ball=a_labels[i] if a_labels else None,
                b_ball=b_labels[j] if b_labels else None,
            )


def carries(
    graph: GraphCarrier,
    phi: Transfunction,
    rectangles: Sequence[tuple[PointSet, PointSet]] = (),
    include_base: bool = True,
) -> CarrierReport:
    """Check (A x B) cap Gamma empty implies Phi(A) carried by the complement of B.

    Point-mass probing: the check reads the supports of Phi(delta_p).

    Args:
        graph: Candidate carrier
        phi: Weakly sigma-additive transfunction
        rectangles: Extra user-supplied rectangles (A, B)
        include_base: Also check every base-ball rectangle

    Returns:
        CarrierReport with the first violating rectangle, if any
    """
    if graph.domain is not phi.domain or graph.codomain is not phi.codomain:
        raise SpaceMismatchError("graph and transfunction live on different spaces")
    rel = graph.relation.astype(float)
    supp = phi.impulse_supports.astype(float)
    tally = _Tally()

    if include_base:
        m = phi.codomain.size
        # Codomain balls are kept bit-packed and unpacked per block.
        b_blocks = [(np.packbits(rows, axis=1), labels) for rows, labels in _blocks(base_balls(phi.codomain))]
        for a_rows, a_labels in _blocks(base_balls(phi.domain)):
            a = a_rows.astype(float)
            related, image = a @ rel, a @ supp
            for packed, b_labels in b_blocks:
                b_rows = np.unpackbits(packed, axis=1, count=m).astype(bool)
                b = b_rows.T.astype(float)
                empty = related @ b == 0
                bad_i, bad_j = np.nonzero(empty & (image @ b > 0))
                tally.add(empty, list(zip(bad_i.tolist(), bad_j.tolist())), a_rows, b_rows, a_labels, b_labels)

    if rectangles:
        a_list, b_list = [], []
        for a_set, b_set in rectangles:
            if a_set.space is not phi.domain or b_set.space is not phi.codomain:
                raise SpaceMismatchError("rectangle sides must live on the domain and codomain")
            a_list.append(a_set.mask)
            b_list.append(b_set.mask)
        a_rows, b_rows = np.asarray(a_list), np.asarray(b_list)
        a, b = a_rows.astype(float), b_rows.astype(float)
        empty = np.einsum("ij,jk,ik->i", a, rel, b) == 0
        bad = np.flatnonzero(empty & (np.einsum("ij,jk,ik->i", a, supp, b) > 0))
        tally.add(empty, [(int(i), int(i)) for i in bad], a_rows, b_rows)

    logger.debug("carrier check on %s: %d rectangles, %d violations", phi.kind, tally.checked, tally.violations)
    return CarrierReport(
        transfunction=phi.kind,
        passed=tally.violations == 0,
        rectangles_checked=tally.checked,
        rectangles_missing_graph=tally.missing,
        violations=tally.violations,
        violation=tally.first,
    )


def graph_transfunction(graph: GraphCarrier, lam: Measure, verify: bool = True) -> GraphInduced:
    """Phi(mu)(B) = (mu x lam)(Gamma cap (X x B)).

    Raises:
        SpaceMismatchError: lam does not live on the codomain
        TransfunctionError: The graph fails to carry the result
    """
    phi = GraphInduced(graph, lam)
    if verify:
        report = carries(graph, phi)
        if not report.passed:
            raise TransfunctionError("graph-induced transfunction is not carried by its graph")
    return phi
