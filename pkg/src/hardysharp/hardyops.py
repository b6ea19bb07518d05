"""Weighted functionals forming the two sides of each inequality."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import quad
from .domain import INF, Domain, Measure
from .errors import DivergenceError, ParameterError
from .funcspace import Exponents, FuncExpr
from .special import beta, trunc_beta_array


class TargetKind(str, enum.Enum):
    ONE = "one"
    ONE_MINUS_LINEAR = "one_minus_linear"
    ONE_MINUS_POWER = "one_minus_power"
    TRUNC_BETA_T = "trunc_beta_T"
    TRUNC_BETA_T0 = "trunc_beta_T0"
    DUAL_ONE_MINUS_POWER = "dual_one_minus_power"
    LOG_BENNETT = "log_bennett"


class LogVariant(str, enum.Enum):
    CORRECTED = "corrected"
    AS_PRINTED = "as-printed"


@dataclass(frozen=True)
class TargetWeight:
    kind: TargetKind = TargetKind.ONE
    kappa: float | None = None
    variant: LogVariant = LogVariant.CORRECTED
    exponent: float = 1.0
    # divide T0 by its l = 0 value alpha * B(alpha, p)
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", TargetKind(self.kind))
        object.__setattr__(self, "variant", LogVariant(self.variant))
        if self.kind in (TargetKind.ONE_MINUS_POWER, TargetKind.DUAL_ONE_MINUS_POWER):
            if self.kappa is None or not self.kappa > 0:
                raise ParameterError(f"{self.kind.value} needs kappa > 0")

    def __call__(self, x, params: Exponents, dom: Domain):
        x = np.asarray(x, dtype=float)
        ell = dom.ell
        kind = self.kind
        if kind is TargetKind.ONE:
            return np.ones_like(x)
        if kind is TargetKind.ONE_MINUS_LINEAR:
            return np.ones_like(x) if ell == INF else 1.0 - x / ell
        if kind is TargetKind.ONE_MINUS_POWER:
            return np.ones_like(x) if ell == INF else 1.0 - np.power(x / ell, self.kappa)
        if kind is TargetKind.DUAL_ONE_MINUS_POWER:
            return np.ones_like(x) if ell == 0 else 1.0 - np.power(ell / x, self.kappa)
        if kind is TargetKind.TRUNC_BETA_T:
            p, alpha = params.p, _alpha(params)
            if not alpha >= p > 0:
                raise ParameterError("target T needs alpha >= p > 0")
            # inner Fubini integral: int_{x/l}^1 t^(alpha-p) (1-t)^(p-1) dt
            u, v = alpha - p + 1.0, p
            if ell == INF:
                return np.full_like(x, alpha * beta(u, v))
            return alpha * trunc_beta_array(np.clip(x / ell, 0.0, 1.0), u, v)
        if kind is TargetKind.TRUNC_BETA_T0:
            p, alpha = params.p, _alpha(params)
            if not (alpha > 0 and p > 0):
                raise ParameterError("target T0 needs alpha > 0 and p > 0")
            # inner Fubini integral: int_{l/x}^1 t^(alpha-1) (1-t)^(p-1) dt
            u, v = alpha, p
            scale = 1.0 / beta(u, v) if self.normalized else alpha
            if ell == 0:
                return np.full_like(x, scale * beta(u, v))
            return scale * trunc_beta_array(np.clip(ell / x, 0.0, 1.0), u, v)
        if kind is TargetKind.LOG_BENNETT:
            return np.power(bennett_log(x, dom, self.variant), self.exponent)
        raise ParameterError(f"unknown target {kind}")  # pragma: no cover


def bennett_log(x, dom: Domain, variant=LogVariant.CORRECTED):
    """``log(e l/x)`` on ``(0, l)`` and ``log(x e/l)`` on ``(l, inf)``; the
    as-printed variant drops the factor ``e``."""
    shift = 1.0 if LogVariant(variant) is LogVariant.CORRECTED else 0.0
    ell = dom.ell
    if not 0 < ell < INF:
        raise ParameterError("logarithmic weights need a finite positive l")
    if dom.is_lower:
        return shift - np.log(x / ell)
    return shift + np.log(x / ell)


class FunctionalKind(str, enum.Enum):
    LHS_AVG = "lhs_avg"  # int (F(x)/x)^p x^a dmu
    LHS_CUM = "lhs_cum"  # int F^p x^-alpha dx/x
    LHS_DUAL = "lhs_dual"  # int (int_x^inf f)^p x^alpha dx/x
    RHS_WEIGHTED = "rhs_weighted"  # int (x f)^p x^(-+alpha) w dx/x
    RHS_LEBESGUE = "rhs_lebesgue"  # int f^p x^a w dx
    RHS_PLAIN = "rhs_plain"  # int f^p x^a w dmu
    BENNETT_LHS_PAIR = "bennett_lhs_pair"
    BENNETT_RHS = "bennett_rhs"


def _alpha(params):
    if params.alpha is None:
        raise ParameterError("parameter 'alpha' is required")
    return params.alpha


def hardy_avg(f: FuncExpr) -> quad.Integrand:
    """``x -> (1/x) int_0^x f``."""
    def avg(x):
        x = np.asarray(x, dtype=float)
        return f._cum(x) / x

    return quad.Integrand(avg, breakpoints=f.breakpoints)


def dual_hardy(f: FuncExpr) -> quad.Integrand:
    """``x -> int_x^inf f``."""
    return quad.Integrand(lambda x: f._tail(np.asarray(x, dtype=float)), breakpoints=f.breakpoints)


def _powp(v, p):
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.power(v, p)
    if p > 0:
        out = np.where(v == 0, 0.0, out)
    return out


def _term(v, p, x, e):
    """``v**p * x**e``, zero wherever ``v`` vanishes (for p > 0)."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        out = np.power(v, p) * np.power(x, e)
        bad = ~np.isfinite(out) & (v > 0)
        if np.any(bad):
            # 0 * inf from separate under/overflow: combine in log space
            out = np.where(bad, np.exp(p * np.log(np.where(bad, v, 1.0)) + e * np.log(x)), out)
    if p > 0:
        out = np.where(v == 0, 0.0, out)
    return out


def _local_exponent(func, x1, x2):
    with np.errstate(all="ignore"):
        g1, g2 = float(func(np.array([x1]))[0]), float(func(np.array([x2]))[0])
    if not (g1 > 0 and g2 > 0 and math.isfinite(g1) and math.isfinite(g2)):
        return None
    return math.log(g2 / g1) / math.log(x2 / x1)


def haar_integral(func, lo, hi, breakpoints=(), rtol=None, what="functional"):
    """``int_lo^hi func dx/x`` with a power-law divergence test at 0 and inf."""
    if lo == 0.0:
        scale = min(hi, 1.0) if hi < INF else 1.0
        e = _local_exponent(func, 1e-13 * scale, 1e-12 * scale)
        if e is not None and e <= 1e-6:
            raise DivergenceError(f"{what} diverges at 0 (local exponent {e:.3g})")
    if hi == INF:
        scale = max(lo, 1.0)
        e = _local_exponent(func, 1e12 * scale, 1e13 * scale)
        if e is not None and e >= -1e-6:
            raise DivergenceError(f"{what} diverges at infinity (local exponent {e:.3g})")
    g = quad.Integrand(func, breakpoints=tuple(breakpoints))
    return quad.integrate_between(g, lo, hi, Measure.HAAR, rtol=rtol)


def _check_positive(f, params):
    if params.p < 0 and not f.positive:
        raise ParameterError("p < 0 requires a strictly positive function (positivity=True)")


def weighted_functional(kind, f: FuncExpr, params: Exponents, dom: Domain,
                        target: TargetWeight | None = None, rtol=None, full=False):
    """Value of one side of an inequality.

    ``BENNETT_LHS_PAIR`` returns the two LHS terms without their constants.
    With ``full=True`` the :class:`~hardysharp.quad.QuadResult` is returned
    instead of a float (a pair of them for the Bennett pair).
    """
    kind = FunctionalKind(kind)
    target = target or TargetWeight()
    _check_positive(f, params)
    p = params.p
    lo, hi = dom.bounds
    bps = f.breakpoints
    name = kind.value

    def w(x):
        return target(x, params, dom)

    if kind is FunctionalKind.LHS_AVG:
        a = params.a
        if dom.measure is Measure.HAAR:
            func = lambda x: _term(f._cum(x) / x, p, x, a) * w(x)
        else:
            func = lambda x: _term(f._cum(x) / x, p, x, a + 1.0) * w(x)
        res = haar_integral(func, lo, hi, bps, rtol, name)
    elif kind is FunctionalKind.LHS_CUM:
        alpha = _alpha(params)
        res = haar_integral(lambda x: _term(f._cum(x), p, x, -alpha) * w(x),
                            lo, hi, bps, rtol, name)
    elif kind is FunctionalKind.LHS_DUAL:
        alpha = _alpha(params)
        res = haar_integral(lambda x: _term(f._tail(x), p, x, alpha) * w(x),
                            lo, hi, bps, rtol, name)
    elif kind is FunctionalKind.RHS_WEIGHTED:
        alpha = _alpha(params)
        sign = -1.0 if dom.is_lower else 1.0
        res = haar_integral(lambda x: _term(x * f(x), p, x, sign * alpha) * w(x),
                            lo, hi, bps, rtol, name)
    elif kind in (FunctionalKind.RHS_LEBESGUE, FunctionalKind.RHS_PLAIN):
        a = params.a
        shift = 1.0 if (kind is FunctionalKind.RHS_LEBESGUE or dom.measure is Measure.LEBESGUE) else 0.0
        res = haar_integral(lambda x: _term(f(x), p, x, a + shift) * w(x),
                            lo, hi, bps, rtol, name)
    elif kind is FunctionalKind.BENNETT_LHS_PAIR:
        alpha = _alpha(params)
        variant = target.variant if target.kind is TargetKind.LOG_BENNETT else LogVariant.CORRECTED
        if dom.is_lower:
            mass = f._cum(np.array([hi]))[0]
            inner = f._cum
        else:
            mass = f._tail(np.array([lo]))[0]
            inner = f._tail
        first = quad.QuadResult(float(_powp(np.array(mass), p)), 0.0, 1)
        second = haar_integral(
            lambda x: _term(inner(x), p, bennett_log(x, dom, variant), alpha * p - 1.0),
            lo, hi, bps, rtol, name)
        return (first, second) if full else (first.value, second.value)
    elif kind is FunctionalKind.BENNETT_RHS:
        alpha = _alpha(params)
        variant = target.variant if target.kind is TargetKind.LOG_BENNETT else LogVariant.CORRECTED
        res = haar_integral(
            lambda x: _term(x * f(x), p, bennett_log(x, dom, variant), (1.0 + alpha) * p - 1.0),
            lo, hi, bps, rtol, name)
    else:  # pragma: no cover
        raise ParameterError(f"unknown functional {kind}")
    return res if full else res.value
