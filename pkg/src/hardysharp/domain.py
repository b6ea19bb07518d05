"""Integration domains: (0, l) or (l, inf), with Lebesgue or Haar measure."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ParameterError

INF = math.inf


class Measure(str, enum.Enum):
    LEBESGUE = "lebesgue"  # dx
    HAAR = "haar"  # dx/x


class Kind(str, enum.Enum):
    LOWER = "lower"  # (0, l), 0 < l <= inf
    UPPER = "upper"  # (l, inf), 0 <= l < inf


@dataclass(frozen=True)
class Domain:
    kind: Kind
    ell: float
    measure: Measure = Measure.HAAR

    def __post_init__(self):
        kind = Kind(self.kind)
        measure = Measure(self.measure)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "measure", measure)
        ell = float(self.ell)
        if math.isnan(ell):
            raise ParameterError("domain endpoint is NaN")
        if kind is Kind.LOWER and not 0.0 < ell <= INF:
            raise ParameterError(f"lower interval (0, l) needs 0 < l <= inf, got l={ell}")
        if kind is Kind.UPPER and not 0.0 <= ell < INF:
            raise ParameterError(f"upper interval (l, inf) needs 0 <= l < inf, got l={ell}")
        object.__setattr__(self, "ell", ell)

    @classmethod
    def lower(cls, ell=INF, measure=Measure.HAAR):
        return cls(Kind.LOWER, ell, measure)

    @classmethod
    def upper(cls, ell=0.0, measure=Measure.HAAR):
        return cls(Kind.UPPER, ell, measure)

    @property
    def bounds(self):
        if self.kind is Kind.LOWER:
            return 0.0, self.ell
        return self.ell, INF

    @property
    def is_lower(self):
        return self.kind is Kind.LOWER

    def contains(self, x):
        lo, hi = self.bounds
        return lo < x < hi or (x == hi and hi < INF)

    def with_measure(self, measure):
        return Domain(self.kind, self.ell, measure)

    def __str__(self):
        lo, hi = self.bounds
        tag = "dx/x" if self.measure is Measure.HAAR else "dx"
        return f"({lo:g}, {hi:g}) [{tag}]"
