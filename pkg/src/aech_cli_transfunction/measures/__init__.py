"""Finite measures and the carrier, projection and orthogonal-sum calculus."""

from .ample import AmpleFamily, check_ample
from .io import (
    measure_from_record,
    measure_to_frame,
    measure_to_record,
    read_measure_csv,
    write_measure_csv,
)
from .measure import (
    Measure,
    disjoint_carriers,
    is_carried,
    orthogonal,
    orthogonal_sum,
    project,
    require_unsigned,
)

__all__ = [
    "AmpleFamily",
    "Measure",
    "check_ample",
    "disjoint_carriers",
    "is_carried",
    "measure_from_record",
    "measure_to_frame",
    "measure_to_record",
    "orthogonal",
    "orthogonal_sum",
    "project",
    "read_measure_csv",
    "require_unsigned",
    "write_measure_csv",
]
