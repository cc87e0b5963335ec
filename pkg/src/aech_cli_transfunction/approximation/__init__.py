"""Constructive approximation of localized transfunctions by functions."""

from .construct import nonuniform_approx, recover_zero_localized, sigma_simple_approx
from .models import UNDEFINED, AbsContinuityReport, Cell, MollifierReport, PiecewiseMap, SampledFunction
from .mollifier import check_mollified, lipschitz_bound, mollify
from .verification import check_abs_continuity, verify_pushforward_equal

__all__ = [
    "UNDEFINED",
    "AbsContinuityReport",
    "Cell",
    "MollifierReport",
    "PiecewiseMap",
    "SampledFunction",
    "check_abs_continuity",
    "check_mollified",
    "lipschitz_bound",
    "mollify",
    "nonuniform_approx",
    "recover_zero_localized",
    "sigma_simple_approx",
    "verify_pushforward_equal",
]
