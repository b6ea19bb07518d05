"""Verification report shared by the catalog, the Lorentz comparisons and the CLI."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class Direction(str, enum.Enum):
    LEQ = "LEQ"
    GEQ = "GEQ"
    EQ = "EQ"


DEFAULT_TOL = 1e-5

REPORT_FIELDS = (
    "case_id", "regime", "params", "function", "direction", "lhs", "rhs", "constant",
    "ratio", "margin", "pass", "tol", "quad_error", "error",
)


@dataclass
class VerificationReport:
    case_id: str
    params: dict
    direction: Direction | None = None
    lhs: float = math.nan
    rhs: float = math.nan
    constant: float = math.nan
    ratio: float = math.nan
    margin: float = math.nan
    passed: bool = False
    tol: float = DEFAULT_TOL
    quad_error: float = 0.0
    regime: str | None = None
    function: str | None = None
    error: str | None = None
    # sandwich inequalities carry their lower constant here (not serialised)
    lower_constant: float | None = field(default=None, repr=False)

    def as_dict(self):
        data = {
            "case_id": self.case_id,
            "regime": self.regime,
            "params": dict(self.params),
            "function": self.function,
            "direction": self.direction.value if self.direction else None,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant,
            "ratio": self.ratio,
            "margin": self.margin,
            "pass": bool(self.passed),
            "tol": self.tol,
            "quad_error": self.quad_error,
            "error": self.error,
        }
        return {k: data[k] for k in REPORT_FIELDS}


def _rel(num, den):
    den = abs(den)
    if den == 0.0:
        return 0.0 if num == 0.0 else math.copysign(math.inf, num)
    return num / den


def single_margin(direction: Direction, lhs: float, bound: float) -> float:
    """Signed relative slack of ``lhs (<=|>=|=) bound``; negative means violated."""
    scale = bound if bound != 0.0 else lhs
    if direction is Direction.LEQ:
        return _rel(bound - lhs, scale)
    if direction is Direction.GEQ:
        return _rel(lhs - bound, scale)
    return -abs(_rel(lhs - bound, scale))


def sandwich_margin(direction: Direction, lhs: float, low: float, high: float) -> float:
    """Slack of ``low <= lhs <= high`` (or the reverse for GEQ)."""
    if direction is Direction.EQ:
        return min(single_margin(Direction.EQ, lhs, low), single_margin(Direction.EQ, lhs, high))
    if direction is Direction.LEQ:
        return min(single_margin(Direction.GEQ, lhs, low), single_margin(Direction.LEQ, lhs, high))
    return min(single_margin(Direction.LEQ, lhs, low), single_margin(Direction.GEQ, lhs, high))


def finish(report: VerificationReport) -> VerificationReport:
    """Fill ratio, margin and pass from lhs, rhs and the constant(s)."""
    bound = report.constant * report.rhs
    report.ratio = report.lhs / bound if bound != 0 else (1.0 if report.lhs == 0 else math.inf)
    if report.lower_constant is None:
        report.margin = single_margin(report.direction, report.lhs, bound)
    else:
        report.margin = sandwich_margin(
            report.direction, report.lhs, report.lower_constant * report.rhs, bound
        )
    report.passed = report.margin >= -report.tol
    return report
