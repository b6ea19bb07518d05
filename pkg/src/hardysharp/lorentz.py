"""Non-increasing rearrangement and Lorentz quasi-norms of step functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quad
from .domain import INF, Domain, Measure
from .errors import DivergenceError, ParameterError
from .funcspace import Exponents, Indicator, Sampled
from .hardyops import FunctionalKind, TargetKind, TargetWeight, weighted_functional
from .report import DEFAULT_TOL, Direction, VerificationReport, finish
from .special import beta


@dataclass(frozen=True)
class StepFunction:
    """Finitely-valued function given as consecutive ``(measure, value)`` pieces.

    An infinite measure is allowed only for a final piece of value 0.
    """

    pieces: tuple

    def __post_init__(self):
        merged = []
        for i, (m, v) in enumerate(self.pieces):
            m, v = float(m), float(v)
            if not m > 0:
                raise ParameterError("piece measures must be positive")
            if not (v >= 0 and math.isfinite(v)):
                raise ParameterError("piece values must be finite and non-negative")
            if m == INF and (v != 0.0 or i != len(self.pieces) - 1):
                raise ParameterError("an infinite piece must be the last one and vanish")
            if merged and merged[-1][1] == v:
                merged[-1] = (merged[-1][0] + m, v)
            else:
                merged.append((m, v))
        object.__setattr__(self, "pieces", tuple(merged))

    @classmethod
    def from_values(cls, measures, values):
        return cls(tuple(zip(measures, values)))

    @property
    def total_measure(self):
        return sum(m for m, _ in self.pieces)

    @property
    def measures(self):
        return np.array([m for m, _ in self.pieces])

    @property
    def values(self):
        return np.array([v for _, v in self.pieces])

    def is_non_increasing(self):
        vals = self.values
        return bool(np.all(np.diff(vals) <= 0))

    def distribution(self, lam):
        """Measure of ``{f > lam}``."""
        return float(sum(m for m, v in self.pieces if v > lam))

    def integral_power(self, p):
        return float(sum(m * v**p for m, v in self.pieces if v > 0))

    def scaled(self, factor):
        return StepFunction(tuple((m, v * factor) for m, v in self.pieces))

    def to_sampled(self) -> Sampled:
        """Left-continuous step function on (0, inf), zero past the support."""
        edges, vals, t = [], [], 0.0
        for m, v in self.pieces:
            if m == INF:
                break
            t += m
            edges.append(t)
            vals.append(v)
        return Sampled(tuple(edges), tuple(vals))

    @classmethod
    def from_func(cls, f):
        if isinstance(f, Indicator):
            if f.c2 == INF:
                raise ParameterError("indicator of an unbounded set has no finite step form")
            pieces = ((f.c1, 0.0),) if f.c1 > 0 else ()
            return cls(pieces + ((f.c2 - f.c1, f.A),))
        if isinstance(f, Sampled):
            edges = np.concatenate(([0.0], f.grid))
            return cls(tuple(zip(np.diff(edges), f.values)))
        raise ParameterError(f"no step-function form for {type(f).__name__}")


def parse_step(text: str) -> StepFunction:
    """``step:[m1:v1;m2:v2;...]``."""
    text = text.strip()
    if not (text.startswith("step:[") and text.endswith("]")):
        raise ParameterError(f"malformed step literal {text!r}")
    pieces = []
    for item in text[len("step:["):-1].split(";"):
        item = item.strip()
        if not item:
            continue
        m, sep, v = item.partition(":")
        if not sep:
            raise ParameterError(f"malformed step piece {item!r}")
        m = m.strip()
        pieces.append((INF if m.lower() == "inf" else float(m), float(v)))
    if not pieces:
        raise ParameterError("empty step literal")
    return StepFunction(tuple(pieces))


def format_step(f: StepFunction) -> str:
    def num(x):
        return "inf" if x == INF else repr(float(x))
    return "step:[" + ";".join(f"{num(m)}:{num(v)}" for m, v in f.pieces) + "]"


def rearrange(f: StepFunction) -> StepFunction:
    """Non-increasing rearrangement; zero pieces (and any infinite tail) last."""
    finite = [(m, v) for m, v in f.pieces if m < INF]
    tail = [(m, v) for m, v in f.pieces if m == INF]
    ordered = sorted(finite, key=lambda mv: -mv[1])
    return StepFunction(tuple(ordered + tail))


def _require_decreasing(fstar):
    if not fstar.is_non_increasing():
        raise ParameterError("Lorentz norms take a non-increasing rearrangement f*")


def _conj(p):
    if p == 1:
        raise ParameterError("p = 1 has no conjugate exponent")
    return p / (p - 1.0)


def norm_star(fstar: StepFunction, params: Exponents, ell: float = INF, target: bool = False) -> float:
    """``(int_0^l (f*(t) t^(1/p))^q [1 - (t/l)^(q/p')] dt/t)^(1/q)`` in closed form."""
    _require_decreasing(fstar)
    p, q = params.p, params.q
    if not (p > 0 and q is not None and q > 0):
        raise ParameterError("Lorentz norms need p, q > 0")
    total, t0 = 0.0, 0.0
    for m, v in fstar.pieces:
        t1 = min(t0 + m, ell)
        if v > 0:
            if t1 == INF:
                raise DivergenceError("f* does not vanish at infinity")
            piece = (p / q) * (t1 ** (q / p) - t0 ** (q / p))
            if target and ell < INF:
                kappa = q / _conj(p)
                piece -= ell ** (-kappa) * (t1**q - t0**q) / q
            total += v**q * piece
        t0 = t1
        if t0 >= ell:
            break
    return total ** (1.0 / q)


def norm_doublestar(fstar: StepFunction, params: Exponents, variant: str = "forward",
                    ell: float = INF) -> float:
    """``(int_0^l (H f*)^q t^(-q/p') dt/t)^(1/q)`` with ``H`` the primitive
    (forward) or the tail integral (dual), piece by piece."""
    _require_decreasing(fstar)
    p, q = params.p, params.q
    if not (p > 0 and q is not None and q > 0):
        raise ParameterError("Lorentz norms need p, q > 0")
    kappa = q / _conj(p)
    meas, vals = fstar.measures, fstar.values
    support = sum(m for m, v in fstar.pieces if v > 0 and m < INF)
    if any(m == INF and v > 0 for m, v in fstar.pieces):
        raise DivergenceError("f* does not vanish at infinity")
    meas = np.where(np.isinf(meas), 0.0, meas)
    edges = np.concatenate(([0.0], np.cumsum(meas)))
    prim = np.concatenate(([0.0], np.cumsum(meas * vals)))
    mass = prim[-1]
    if mass == 0.0:
        return 0.0
    total = 0.0
    for i in range(len(vals)):
        t0, t1 = edges[i], min(edges[i + 1], ell)
        if t1 <= t0:
            break
        v, f0 = vals[i], prim[i]
        if variant == "forward":
            inner = lambda t, v=v, f0=f0, t0=t0: f0 + v * (t - t0)
        elif variant == "dual":
            inner = lambda t, v=v, f0=f0, t0=t0: mass - f0 - v * (t - t0)
        else:
            raise ParameterError(f"unknown variant {variant!r}")
        g = lambda t, inner=inner: np.power(np.maximum(inner(t), 0.0), q) * np.power(t, -kappa)
        total += quad.integrate_between(g, t0, t1, Measure.HAAR).value
    if variant == "forward" and ell > support:
        # past the support the primitive is constant
        if kappa <= 0:
            if ell == INF:
                raise DivergenceError("forward ** norm diverges at infinity for p < 1")
        if kappa == 0:
            total += mass**q * math.log(ell / support)
        elif ell == INF:
            total += mass**q * support ** (-kappa) / kappa
        else:
            total += mass**q * (support ** (-kappa) - ell ** (-kappa)) / kappa
    return total ** (1.0 / q)


def _functional_norms(fstar, p, q, ell, dual):
    """Both quasi-norms through the generic weighted functionals (second route)."""
    f = fstar.to_sampled()
    kappa = q / _conj(p)
    dom = Domain.lower(ell, Measure.HAAR)
    star_params = Exponents(q, alpha=kappa)
    tw = TargetWeight(TargetKind.ONE_MINUS_POWER, kappa=kappa) if ell < INF else TargetWeight()
    istar = weighted_functional(FunctionalKind.RHS_WEIGHTED, f, star_params, dom, tw) ** (1 / q)
    if dual:
        istar2 = weighted_functional(FunctionalKind.LHS_DUAL, f, Exponents(q, alpha=-kappa), dom)
    else:
        istar2 = weighted_functional(FunctionalKind.LHS_CUM, f, star_params, dom)
    return istar2 ** (1 / q), istar


def _direction(q):
    if q > 1:
        return Direction.LEQ
    if q < 1:
        return Direction.GEQ
    return Direction.EQ


def compare(f: StepFunction, params: Exponents, which: str, ell: float = INF,
            tol: float = DEFAULT_TOL) -> VerificationReport:
    """Two-sided comparison of ``||f||**`` with ``||f||*``.

    ``eq43``: p > 1, l = inf, closed-form route; ``eq44``: p > 1, any l,
    through the target-weighted functionals; ``eq45``: 0 < p < 1, dual Hardy
    operator.  The lhs of the report is the ``**`` quantity, rhs the ``*`` one.
    """
    p, q = params.p, params.q
    if q is None or not q > 0:
        raise ParameterError("Lorentz comparison needs q > 0")
    fstar = rearrange(f)
    pc = None
    if which in ("eq43", "eq44"):
        if not p > 1:
            raise ParameterError(f"{which} needs p > 1 (p={p})")
        pc = _conj(p)
        low, high = pc ** (1.0 / q), pc
        if which == "eq43":
            if ell != INF:
                raise ParameterError("eq43 is the l = inf statement; use eq44 for finite l")
            lhs, rhs = norm_doublestar(fstar, params, "forward"), norm_star(fstar, params)
        else:
            lhs, rhs = _functional_norms(fstar, p, q, ell, dual=False)
    elif which == "eq45":
        if not 0 < p < 1:
            raise ParameterError(f"eq45 needs 0 < p < 1 (p={p})")
        pc = _conj(p)
        low, high = (q * beta(q, -q / pc)) ** (1.0 / q), -pc
        lhs, rhs = norm_doublestar(fstar, params, "dual", ell), norm_star(fstar, params, ell)
    else:
        raise ParameterError(f"unknown comparison {which!r}")
    report = VerificationReport(
        case_id={"eq43": "LZ1", "eq44": "LZ2", "eq45": "LZ3"}[which],
        params={"p": p, "q": q, "ell": ell},
        direction=_direction(q),
        lhs=lhs, rhs=rhs, constant=high, tol=tol,
        regime="q>1" if q > 1 else ("q<1" if q < 1 else "q=1"),
        function=format_step(f),
        lower_constant=low,
    )
    return finish(report)
