"""Property suite: registered checks over scenario objects."""

from .models import CheckResult, SuiteReport
from .registry import CHECKS, Check, CheckOptions, checks_for, register
from .suite import run_suite

__all__ = ["CHECKS", "Check", "CheckOptions", "CheckResult", "SuiteReport", "checks_for", "register", "run_suite"]
