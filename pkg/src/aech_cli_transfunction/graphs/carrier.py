"""Graph carriers: relations Gamma in X x Y."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import SpaceMismatchError, TransfunctionError
from ..geometry import MetricSpace


@dataclass
class GraphCarrier:
    """A dense boolean relation on X x Y."""

    domain: MetricSpace
    codomain: MetricSpace
    relation: np.ndarray

    def __post_init__(self) -> None:
        rel = np.asarray(self.relation, dtype=bool)
        if rel.shape != (self.domain.size, self.codomain.size):
            raise TransfunctionError(
                f"relation must have shape {(self.domain.size, self.codomain.size)}, got {rel.shape}"
            )
        rel.setflags(write=False)
        self.relation = rel

    @classmethod
    def empty(cls, domain: MetricSpace, codomain: MetricSpace) -> "GraphCarrier":
        return cls(domain, codomain, np.zeros((domain.size, codomain.size), dtype=bool))

    @classmethod
    def full(cls, domain: MetricSpace, codomain: MetricSpace) -> "GraphCarrier":
        return cls(domain, codomain, np.ones((domain.size, codomain.size), dtype=bool))

    @classmethod
    def diagonal(cls, space: MetricSpace) -> "GraphCarrier":
        return cls(space, space, np.eye(space.size, dtype=bool))

    @classmethod
    def from_pairs(cls, domain: MetricSpace, codomain: MetricSpace, pairs) -> "GraphCarrier":
        rel = np.zeros((domain.size, codomain.size), dtype=bool)
        for p, q in pairs:
            domain.check_point(int(p))
            codomain.check_point(int(q))
            rel[int(p), int(q)] = True
        return cls(domain, codomain, rel)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        p, q = pair
        return bool(self.relation[p, q])

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(p), int(q)) for p, q in zip(*np.nonzero(self.relation))]

    def to_frame(self) -> pd.DataFrame:
        pairs = self.pairs()
        return pd.DataFrame(pairs, columns=["p", "q"]) if pairs else pd.DataFrame(columns=["p", "q"])

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path

    @classmethod
    def read_csv(cls, path: str | Path, domain: MetricSpace, codomain: MetricSpace) -> "GraphCarrier":
        frame = pd.read_csv(path)
        return cls.from_pairs(domain, codomain, zip(frame["p"].astype(int), frame["q"].astype(int)))

    def __or__(self, other: "GraphCarrier") -> "GraphCarrier":
        if other.domain is not self.domain or other.codomain is not self.codomain:
            raise SpaceMismatchError("graph carriers live on different spaces")
        return GraphCarrier(self.domain, self.codomain, self.relation | other.relation)

    def issubset(self, other: "GraphCarrier") -> bool:
        return not np.any(self.relation & ~other.relation)


def _assignment(f, domain: MetricSpace) -> np.ndarray:
    """Id array of a PiecewiseMap or raw grid map (-1 where undefined)."""
    mapping = np.asarray(getattr(f, "assignment", f), dtype=int)
    if mapping.shape != (domain.size,):
        raise TransfunctionError("map needs one entry per domain point")
    return mapping


def exact_graph(f, domain: MetricSpace, codomain: MetricSpace) -> GraphCarrier:
    """{(p, f(p))}."""
    mapping = _assignment(f, domain)
    ok = mapping >= 0
    rel = np.zeros((domain.size, codomain.size), dtype=bool)
    rel[domain.ids[ok], mapping[ok]] = True
    return GraphCarrier(domain, codomain, rel)


def fat_graph(f, epsilon: float, domain: MetricSpace, codomain: MetricSpace) -> GraphCarrier:
    """Union over x of {x} x B(f(x), eps) with open balls: d(f(p), q) < eps."""
    if epsilon < 0:
        raise TransfunctionError("fat graph radius must be nonnegative")
    mapping = _assignment(f, domain)
    ok = mapping >= 0
    rel = np.zeros((domain.size, codomain.size), dtype=bool)
    rel[ok] = codomain.distances[mapping[ok]] < epsilon - codomain.tol
    return GraphCarrier(domain, codomain, rel)
