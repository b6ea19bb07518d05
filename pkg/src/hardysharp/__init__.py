"""Numerical verification of sharp Hardy-type inequalities and their constants."""

__version__ = "0.1.0"

from .catalog import (
    CASES, InequalityCase, ProbeResult, case_ids, equality_check, equivalence_check, get_case,
    random_step, safe_verify, scan, sharpness_probe, verify,
)
from .domain import INF, Domain, Kind, Measure
from .errors import (
    ConeError, DivergenceError, DomainError, HardyError, NumericalFailure, ParameterError,
    RegimeError, UnsupportedCase,
)
from .funcspace import (
    BlissProfile, Cone, Exponents, FuncExpr, Indicator, LogPower, Power, Sampled, Sum,
    format_func, parse_func,
)
from .lorentz import StepFunction, compare, norm_doublestar, norm_star, parse_step, rearrange
from .report import Direction, VerificationReport
from .special import ConstantId, sharp_constant

__all__ = [
    "CASES", "InequalityCase", "ProbeResult", "case_ids", "equality_check", "equivalence_check",
    "get_case", "random_step", "safe_verify", "scan", "sharpness_probe", "verify",
    "INF", "Domain", "Kind", "Measure",
    "ConeError", "DivergenceError", "DomainError", "HardyError", "NumericalFailure",
    "ParameterError", "RegimeError", "UnsupportedCase",
    "BlissProfile", "Cone", "Exponents", "FuncExpr", "Indicator", "LogPower", "Power", "Sampled",
    "Sum", "format_func", "parse_func",
    "StepFunction", "compare", "norm_doublestar", "norm_star", "parse_step", "rearrange",
    "Direction", "VerificationReport", "ConstantId", "sharp_constant",
]
