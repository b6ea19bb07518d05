"""Non-negative functions on the half-line and their cumulative/tail integrals.

Functions are small immutable expression trees (:class:`Power`,
:class:`Indicator`, :class:`LogPower`, :class:`Sampled`, :class:`Sum`, plus the
two-parameter :class:`BlissProfile` used by sharpness probes).  All of them
evaluate vectorised on numpy arrays and know their own breakpoints, so that
quadrature can split at discontinuities.

Sampled functions (and Indicator) are piecewise constant and left-continuous:
``Sampled(grid, values)`` equals ``values[i]`` on ``(grid[i-1], grid[i]]``
(with ``grid[-1] = 0``) and vanishes beyond ``grid[-1]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import special as sp

from .domain import INF, Domain, Kind, Measure
from .errors import ConeError, DivergenceError, DomainError, ParameterError
from . import quad

__all__ = [
    "Cone", "Exponents", "FuncExpr", "Power", "Indicator", "LogPower", "Sampled",
    "Sum", "BlissProfile", "evaluate", "cumulative", "tail", "integral_between",
    "transform_obs21", "transform_inverse", "cone_check", "parse_func", "format_func",
    "Domain", "Measure", "Kind", "INF",
]


class Cone(str, enum.Enum):
    NON_INCREASING = "non-increasing"
    NON_DECREASING = "non-decreasing"
    UNRESTRICTED = "unrestricted"


@dataclass(frozen=True)
class Exponents:
    """Exponent bundle shared by all inequalities.

    ``a`` is the power weight of the Lebesgue-measure Hardy inequality.
    """

    p: float
    q: float | None = None
    alpha: float | None = None
    beta: float | None = None
    a: float = 0.0

    def __post_init__(self):
        if self.p == 0:
            raise ParameterError("p must be non-zero")

    @property
    def p_conj(self):
        if self.p == 1:
            raise ParameterError("conjugate exponent undefined for p = 1")
        return self.p / (self.p - 1.0)

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise ParameterError(f"parameter '{name}' is required")

    def replace(self, **changes):
        data = {k: getattr(self, k) for k in ("p", "q", "alpha", "beta", "a")}
        data.update(changes)
        return Exponents(**data)


# -- expression tree ------------------------------------------------------------


@dataclass(frozen=True)
class FuncExpr:
    """Base class. Subclasses implement ``_eval``, ``_cum`` and ``breakpoints``."""

    cone: Cone = field(default=Cone.UNRESTRICTED, kw_only=True)
    positive: bool = field(default=False, kw_only=True)

    def __post_init__(self):
        object.__setattr__(self, "cone", Cone(self.cone))
        if self.cone is not Cone.UNRESTRICTED and not cone_check(self, self.cone):
            raise ConeError(f"{format_func(self)} is not {self.cone.value} on (0, inf)")

    def __call__(self, x):
        return self._eval(np.asarray(x, dtype=float))

    # support of the function as (lo, hi); outside it the function vanishes
    @property
    def support(self):
        return 0.0, INF

    @property
    def breakpoints(self):
        return ()

    @property
    def closed_form(self):
        return False

    def _cum(self, x):
        """F(x) = int_0^x f, vectorised; default via quadrature per point."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(x)
        for i, xi in enumerate(x):
            out[i] = quad.integrate_between(
                quad.Integrand(self._eval, breakpoints=self.breakpoints), 0.0, xi
            ).value
        return out

    def _total(self):
        lo, hi = self.support
        if hi == INF:
            return quad.integrate_between(
                quad.Integrand(self._eval, breakpoints=self.breakpoints), lo, INF
            ).value
        return float(self._cum(np.array([hi]))[0])

    def _tail(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        total = self._total()
        if not math.isfinite(total):
            raise DivergenceError(f"{format_func(self)} is not integrable at infinity")
        return np.maximum(total - self._cum(x), 0.0)

    def scaled(self, factor):
        raise NotImplementedError


@dataclass(frozen=True)
class Power(FuncExpr):
    """``A * x**a`` on the support ``(lo, hi]`` (the whole half-line by default)."""

    A: float = 1.0
    a: float = 0.0
    lo: float = 0.0
    hi: float = INF

    def __post_init__(self):
        if self.A < 0:
            raise ParameterError("Power coefficient must be non-negative")
        if not 0.0 <= self.lo < self.hi:
            raise ParameterError("Power support needs 0 <= lo < hi")
        super().__post_init__()

    @property
    def support(self):
        return self.lo, self.hi

    @property
    def breakpoints(self):
        return tuple(b for b in (self.lo, self.hi) if 0.0 < b < INF)

    @property
    def closed_form(self):
        return True

    def _eval(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = self.A * np.power(x, self.a)
        return np.where((x > self.lo) & (x <= self.hi), vals, 0.0)

    def _prim(self, x):
        # antiderivative of A x^a, normalised to vanish at 0 when a > -1
        if self.a == -1.0:
            return self.A * np.log(x)
        return self.A * np.power(x, self.a + 1.0) / (self.a + 1.0)

    def _cum(self, x):
        x = np.asarray(x, dtype=float)
        if self.lo == 0.0 and self.a <= -1.0 and self.A > 0:
            raise DivergenceError(f"x^{self.a} is not integrable near 0")
        top = np.clip(x, self.lo, self.hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.lo == 0.0:
                out = self._prim(top)
            else:
                out = self._prim(top) - self._prim(np.array(self.lo))
        return np.where(x > self.lo, out, 0.0)

    def _tail(self, x):
        x = np.asarray(x, dtype=float)
        if self.A == 0:
            return np.zeros_like(x)
        if self.hi == INF and self.a >= -1.0:
            raise DivergenceError(f"x^{self.a} is not integrable at infinity")
        bottom = np.clip(x, self.lo, self.hi)
        if np.any(bottom == 0.0) and self.a <= -1.0:
            raise DivergenceError(f"x^{self.a} is not integrable near 0")
        with np.errstate(divide="ignore", invalid="ignore"):
            top = 0.0 if self.hi == INF else self._prim(np.array(self.hi))
            low = np.where(bottom > 0, self._prim(np.where(bottom > 0, bottom, 1.0)), 0.0)
            out = top - low
        return np.where(x < self.hi, out, 0.0)

    def _total(self):
        if self.hi == INF and self.lo == 0.0:
            raise DivergenceError("pure power is not integrable over (0, inf)")
        return float(self._tail(np.array([self.lo]))[0])

    def scaled(self, factor):
        return Power(self.A * factor, self.a, self.lo, self.hi, cone=self.cone, positive=self.positive)


@dataclass(frozen=True)
class Indicator(FuncExpr):
    """``A`` times the indicator of ``(c1, c2]``."""

    c1: float = 0.0
    c2: float = 1.0
    A: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.c1 < self.c2 <= INF):
            raise ParameterError(f"Indicator needs 0 <= c1 < c2 <= inf, got ({self.c1}, {self.c2})")
        if not self.A > 0:
            raise ParameterError("Indicator amplitude must be positive")
        if self.positive:
            raise ParameterError("an indicator is not strictly positive")
        super().__post_init__()

    @property
    def support(self):
        return self.c1, self.c2

    @property
    def breakpoints(self):
        return tuple(b for b in (self.c1, self.c2) if 0.0 < b < INF)

    @property
    def closed_form(self):
        return True

    def _eval(self, x):
        return np.where((x > self.c1) & (x <= self.c2), self.A, 0.0)

    def _cum(self, x):
        x = np.asarray(x, dtype=float)
        return self.A * np.clip(x - self.c1, 0.0, self.c2 - self.c1)

    def _tail(self, x):
        if self.c2 == INF:
            raise DivergenceError("indicator of an unbounded interval is not integrable")
        x = np.asarray(x, dtype=float)
        return self.A * np.clip(self.c2 - np.maximum(x, self.c1), 0.0, None)

    def _total(self):
        return self.A * (self.c2 - self.c1)

    def scaled(self, factor):
        return Indicator(self.c1, self.c2, self.A * factor, cone=self.cone)


_LOG_FORMS = ("el", "l", "dual")


@dataclass(frozen=True)
class LogPower(FuncExpr):
    """``A x^a L(x)^b`` with ``L`` one of ``log(e l/x)`` (``el``),
    ``log(l/x)`` (``l``) or ``log(x e/l)`` (``dual``)."""

    A: float = 1.0
    a: float = 0.0
    b: float = 0.0
    form: str = "el"
    ell: float = 1.0

    def __post_init__(self):
        if self.form not in _LOG_FORMS:
            raise ParameterError(f"log form must be one of {_LOG_FORMS}")
        if self.A < 0:
            raise ParameterError("LogPower coefficient must be non-negative")
        if not 0.0 < self.ell < INF:
            raise ParameterError("LogPower needs a finite positive l")
        super().__post_init__()

    @property
    def support(self):
        if self.form == "el":
            return 0.0, math.e * self.ell
        if self.form == "l":
            return 0.0, self.ell
        return self.ell / math.e, INF

    def log_factor(self, x):
        if self.form == "el":
            return 1.0 - np.log(x / self.ell)
        if self.form == "l":
            return -np.log(x / self.ell)
        return 1.0 + np.log(x / self.ell)

    def _eval(self, x):
        lo, hi = self.support
        if np.any((x <= lo) | (x > hi)):
            bad = x[(x <= lo) | (x > hi)][0]
            raise DomainError(f"log factor of {format_func(self)} is negative at x={bad:g}")
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.A * np.power(x, self.a) * np.power(self.log_factor(x), self.b)

    def _cum(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        if self.form == "dual":
            return super()._cum(x)
        if self.a <= -1.0:
            raise DivergenceError("LogPower with a <= -1 is not integrable near 0")
        if self.b <= -1.0:
            return super()._cum(x)
        if np.any(x > hi):
            raise DomainError("cumulative requested beyond the support of the log factor")
        # y = c e^{-s}: int_0^x A y^a log(c/y)^b dy = A c^{a+1} Gamma(b+1, (a+1) s0)/(a+1)^{b+1}
        c = hi
        k = self.a + 1.0
        s0 = np.log(c / x)
        return self.A * c**k * sp.gammaincc(self.b + 1.0, k * s0) * sp.gamma(self.b + 1.0) / k ** (self.b + 1.0)

    def _tail(self, x):
        x = np.asarray(x, dtype=float)
        if self.form != "dual":
            lo, hi = self.support
            total = float(self._cum(np.array([hi]))[0])
            return np.where(x < hi, total - self._cum(np.minimum(x, hi)), 0.0)
        if self.a >= -1.0:
            raise DivergenceError("LogPower with a >= -1 is not integrable at infinity")
        if self.b <= -1.0 or np.any(x < self.ell / math.e):
            return super()._tail(x)
        c = self.ell / math.e
        k = -(self.a + 1.0)
        s0 = np.log(x / c)
        return self.A * c ** (self.a + 1.0) * sp.gammaincc(self.b + 1.0, k * s0) * sp.gamma(self.b + 1.0) / k ** (self.b + 1.0)

    def _total(self):
        lo, hi = self.support
        if self.form == "dual":
            return float(self._tail(np.array([lo]))[0]) if self.b > -1 else super()._total()
        return float(self._cum(np.array([hi]))[0])

    def scaled(self, factor):
        return LogPower(self.A * factor, self.a, self.b, self.form, self.ell, cone=self.cone, positive=self.positive)


@dataclass(frozen=True)
class Sampled(FuncExpr):
    """Left-continuous step function through ``(grid[i], values[i])``."""

    grid: tuple = ()
    values: tuple = ()
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        grid = tuple(float(g) for g in self.grid)
        values = tuple(float(v) for v in self.values)
        if not grid or len(grid) != len(values):
            raise ParameterError("sampled function needs equally many abscissae and values")
        if grid[0] <= 0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ParameterError("sampled abscissae must be positive and strictly increasing")
        if any(v < 0 or not math.isfinite(v) for v in values):
            raise ParameterError("sampled values must be finite and non-negative")
        if self.positive and min(values) <= 0:
            raise ParameterError("positivity claimed but a sampled value is zero")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        super().__post_init__()

    @property
    def support(self):
        return 0.0, self.grid[-1]

    @property
    def breakpoints(self):
        return self.grid

    @property
    def closed_form(self):
        return True

    @property
    def _edges(self):
        return np.concatenate(([0.0], self.grid))

    def _eval(self, x):
        idx = np.searchsorted(np.asarray(self.grid), x, side="left")
        vals = np.append(np.asarray(self.values), 0.0)
        return vals[np.minimum(idx, len(self.values))]

    def _cum(self, x):
        x = np.asarray(x, dtype=float)
        edges = self._edges
        vals = np.asarray(self.values)
        n = len(vals)
        acc = np.concatenate(([0.0], np.cumsum(vals * np.diff(edges))))
        idx = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, n)
        inside = idx < n
        j = np.minimum(idx, n - 1)
        return np.where(inside, acc[j] + vals[j] * (x - edges[j]), acc[n])

    def _total(self):
        return float(np.sum(np.asarray(self.values) * np.diff(self._edges)))

    def _tail(self, x):
        # summed from the right so that the tail is exactly 0 past the grid
        x = np.asarray(x, dtype=float)
        edges = self._edges
        vals = np.asarray(self.values)
        n = len(vals)
        rest = np.concatenate((np.cumsum((vals * np.diff(edges))[::-1])[::-1], [0.0]))
        idx = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, n)
        inside = idx < n
        j = np.minimum(idx, n - 1)
        return np.where(inside, rest[j + 1] + vals[j] * (edges[j + 1] - x), 0.0)

    def scaled(self, factor):
        return Sampled(self.grid, tuple(v * factor for v in self.values), cone=self.cone, positive=self.positive)

    @classmethod
    def from_csv(cls, path, **kw):
        try:
            data = np.loadtxt(Path(path), delimiter=",", ndmin=2, comments="#")
        except ValueError:
            # one header line
            data = np.loadtxt(Path(path), delimiter=",", ndmin=2, comments="#", skiprows=1)
        if data.shape[1] != 2:
            raise ParameterError("sampled CSV must have exactly two columns: x,value")
        return cls(tuple(data[:, 0]), tuple(data[:, 1]), source=str(path), **kw)


@dataclass(frozen=True)
class Sum(FuncExpr):
    parts: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ParameterError("empty sum")
        super().__post_init__()

    @property
    def support(self):
        lows, highs = zip(*(p.support for p in self.parts))
        return min(lows), max(highs)

    @property
    def breakpoints(self):
        return tuple(sorted({b for p in self.parts for b in p.breakpoints}))

    @property
    def closed_form(self):
        return all(p.closed_form for p in self.parts)

    def _eval(self, x):
        return sum(p._eval(x) for p in self.parts)

    def _cum(self, x):
        return sum(p._cum(x) for p in self.parts)

    def _tail(self, x):
        return sum(p._tail(x) for p in self.parts)

    def _total(self):
        return sum(p._total() for p in self.parts)

    def scaled(self, factor):
        return Sum(tuple(p.scaled(factor) for p in self.parts), cone=self.cone, positive=self.positive)


@dataclass(frozen=True)
class BlissProfile(FuncExpr):
    """``A (1 + x^b)^(-c)``: smooth, positive, non-increasing probe family."""

    A: float = 1.0
    b: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not (self.A > 0 and self.b > 0 and self.c > 0):
            raise ParameterError("BlissProfile needs A, b, c > 0")
        super().__post_init__()

    @property
    def closed_form(self):
        return True

    def _eval(self, x):
        return self.A * np.exp(-self.c * np.log1p(np.power(x, self.b)))

    def _cum(self, x):
        # int_0^x (1+y^b)^-c dy = x 2F1(c, 1/b; 1 + 1/b; -x^b)
        x = np.asarray(x, dtype=float)
        small = np.minimum(x, 1.0)
        out = self.A * small * sp.hyp2f1(self.c, 1.0 / self.b, 1.0 + 1.0 / self.b, -np.power(small, self.b))
        big = x > 1.0
        if np.any(big):
            if self.b * self.c > 1:
                # the series argument leaves the unit disc: use total minus tail
                out = np.where(big, self._total() - self._tail(np.maximum(x, 1.0)), out)
            else:
                out = np.where(big, self.A * x * sp.hyp2f1(
                    self.c, 1.0 / self.b, 1.0 + 1.0 / self.b, -np.power(np.maximum(x, 1.0), self.b)), out)
        return out

    def _total(self):
        if self.b * self.c <= 1:
            raise DivergenceError("BlissProfile with b*c <= 1 is not integrable")
        return self.A * sp.beta(1.0 / self.b, self.c - 1.0 / self.b) / self.b

    def _tail(self, x):
        # substitution t = 1/(1+y^b) gives an incomplete Beta function
        x = np.asarray(x, dtype=float)
        u, v = self.c - 1.0 / self.b, 1.0 / self.b
        if u <= 0:
            raise DivergenceError("BlissProfile with b*c <= 1 is not integrable at infinity")
        with np.errstate(over="ignore"):
            t = 1.0 / (1.0 + np.power(x, self.b))
        out = self.A * sp.beta(u, v) * sp.betainc(u, v, t) / self.b
        small = x < 1.0
        if np.any(small):
            # betainc near t = 1 cancels; the primitive is accurate there
            out = np.where(small, self._total() - self._cum(np.minimum(x, 1.0)), out)
        return out

    def scaled(self, factor):
        return BlissProfile(self.A * factor, self.b, self.c, cone=self.cone, positive=self.positive)


# -- operations -----------------------------------------------------------------


def _check_point(dom, x):
    if dom is not None and not dom.contains(x):
        raise DomainError(f"x={x:g} outside {dom}")
    if not x > 0:
        raise DomainError(f"x={x:g} must be positive")


def evaluate(f: FuncExpr, x: float, dom: Domain | None = None) -> float:
    _check_point(dom, x)
    return float(f(np.array([x]))[0])


def cumulative(f: FuncExpr, x: float) -> float:
    """``int_0^x f(y) dy``."""
    if x < 0:
        raise DomainError("cumulative needs x >= 0")
    if x == 0:
        return 0.0
    return float(f._cum(np.array([float(x)]))[0])


def tail(f: FuncExpr, x: float) -> float:
    """``int_x^inf f(y) dy``."""
    if x < 0:
        raise DomainError("tail needs x >= 0")
    return float(f._tail(np.array([float(x)]))[0])


def integral_between(f: FuncExpr, a: float, b: float) -> float:
    """``int_a^b f``; finite ``a < b``."""
    return cumulative(f, b) - cumulative(f, a)


def transform_obs21(g: FuncExpr, p: float) -> FuncExpr:
    """``f(x) = g(x^(1-1/p)) x^(-1/p)``: turns the Haar-measure Hardy inequality
    into the classical Lebesgue one."""
    if not p > 1:
        raise ParameterError("transform_obs21 needs p > 1")
    s = 1.0 - 1.0 / p
    pc = p / (p - 1.0)

    def go(h):
        if isinstance(h, Indicator):
            return Power(h.A, -1.0 / p, h.c1**pc, h.c2**pc)
        if isinstance(h, Power):
            return Power(h.A, h.a * s - 1.0 / p, h.lo**pc, h.hi**pc)
        if isinstance(h, Sum):
            return Sum(tuple(go(part) for part in h.parts))
        raise ParameterError(f"transform_obs21 is implemented for Power/Indicator sums, not {type(h).__name__}")

    return go(g)


def _recip(v):
    if v == 0.0:
        return INF
    if v == INF:
        return 0.0
    return 1.0 / v


def _power_or_indicator(A, a, lo, hi):
    if a == 0.0 and hi < INF and A > 0:
        return Indicator(lo, hi, A)
    return Power(A, a, lo, hi)


def transform_inverse(f: FuncExpr) -> FuncExpr:
    """``g(x) = f(1/x) x^(-2)``; an involution preserving the total integral."""
    if isinstance(f, Indicator):
        return _power_or_indicator(f.A, -2.0, _recip(f.c2), _recip(f.c1))
    if isinstance(f, Power):
        return _power_or_indicator(f.A, -f.a - 2.0, _recip(f.hi), _recip(f.lo))
    if isinstance(f, Sum):
        return Sum(tuple(transform_inverse(part) for part in f.parts))
    raise ParameterError(f"transform_inverse is implemented for Power/Indicator sums, not {type(f).__name__}")


def _interval(dom):
    if dom is None:
        return 0.0, INF
    return dom.bounds


def cone_check(f: FuncExpr, cone: Cone, dom: Domain | None = None, weight_power: float = 0.0,
               n: int = 512) -> bool:
    """Monotonicity of ``f(x) * x**weight_power`` on the domain interior.

    Exact for Indicator and Power; otherwise sampled on a log-spaced grid plus
    both sides of every breakpoint.
    """
    cone = Cone(cone)
    if cone is Cone.UNRESTRICTED:
        return True
    lo, hi = _interval(dom)
    if isinstance(f, LogPower):
        # undefined past the zero of its log factor
        lo, hi = max(lo, f.support[0]), min(hi, f.support[1])
    sign = 1.0 if cone is Cone.NON_DECREASING else -1.0
    if weight_power == 0.0 and isinstance(f, Indicator):
        a, b = max(f.c1, lo), min(f.c2, hi)
        if a >= b:
            return True
        # rising edge at c1 inside the domain, falling edge at c2 inside it
        rises = f.c1 > lo
        falls = f.c2 < hi
        return not falls if cone is Cone.NON_DECREASING else not rises
    if isinstance(f, Power) and f.lo <= lo and f.hi >= hi:
        e = f.a + weight_power
        return f.A == 0 or e * sign >= 0
    try:
        xs = _sample_grid(f, lo, hi, n)
        vals = f(xs) * xs**weight_power
    except (DomainError, FloatingPointError):
        return False
    diffs = np.diff(vals) * sign
    scale = np.maximum(np.abs(vals[:-1]), np.abs(vals[1:]))
    return bool(np.all(diffs >= -1e-12 * scale))


def _sample_grid(f, lo, hi, n):
    a = lo if lo > 0 else (hi * 1e-8 if hi < INF else 1e-8)
    b = hi if hi < INF else max(1e8, 10 * a)
    xs = list(np.geomspace(max(a, 1e-300), b, n))
    for bp in f.breakpoints:
        if lo < bp < hi:
            xs += [bp * (1 - 1e-9), bp, bp * (1 + 1e-9)]
    xs = np.unique(np.asarray(xs))
    xs = xs[(xs > lo) & (xs <= hi)]
    return xs


# -- mini-language ----------------------------------------------------------------


_FORM_NAMES = {"el": "el", "l": "l", "dual": "dual"}


def _num(tok):
    tok = tok.strip()
    if tok.lower() in ("inf", "+inf", "infinity"):
        return INF
    try:
        return float(tok)
    except ValueError:
        raise ParameterError(f"not a number: {tok!r}") from None


def _split_top(body):
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ParameterError("unbalanced brackets in function spec")
    parts.append("".join(cur))
    return [p for p in (s.strip() for s in parts) if p]


def parse_func(text: str, ell: float = 1.0, base_dir=None, **meta) -> FuncExpr:
    """Parse ``pow:A,a | ind:c1,c2,A | logpow:A,a,b,form | sum:[e;e;...] |
    sampled:@file.csv``.  ``ell`` binds the ``l`` of log forms."""
    text = text.strip()
    head, sep, body = text.partition(":")
    if not sep:
        raise ParameterError(f"malformed function spec {text!r}")
    head = head.strip().lower()
    if head == "pow":
        args = [_num(t) for t in body.split(",")]
        if len(args) != 2:
            raise ParameterError("pow needs A,a")
        return Power(args[0], args[1], **meta)
    if head == "ind":
        args = [_num(t) for t in body.split(",")]
        if len(args) != 3:
            raise ParameterError("ind needs c1,c2,A")
        return Indicator(*args, **meta)
    if head == "logpow":
        toks = body.split(",")
        if len(toks) != 4:
            raise ParameterError("logpow needs A,a,b,form")
        form = toks[3].strip()
        if form not in _FORM_NAMES:
            raise ParameterError(f"unknown log form {form!r}")
        return LogPower(_num(toks[0]), _num(toks[1]), _num(toks[2]), form, ell, **meta)
    if head == "sum":
        body = body.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ParameterError("sum needs [expr;expr;...]")
        parts = tuple(parse_func(p, ell, base_dir) for p in _split_top(body[1:-1]))
        return Sum(parts, **meta)
    if head == "sampled":
        ref = body.strip()
        if not ref.startswith("@"):
            raise ParameterError("sampled needs @file.csv")
        path = Path(ref[1:])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return Sampled.from_csv(path, **meta)
    raise ParameterError(f"unknown function kind {head!r}")


def _fmt(v):
    if v == INF:
        return "inf"
    return repr(float(v))


def format_func(f: FuncExpr) -> str:
    """Inverse of :func:`parse_func` (Power with restricted support and
    BlissProfile have no literal and render descriptively)."""
    if isinstance(f, Indicator):
        return f"ind:{_fmt(f.c1)},{_fmt(f.c2)},{_fmt(f.A)}"
    if isinstance(f, Power):
        base = f"pow:{_fmt(f.A)},{_fmt(f.a)}"
        if (f.lo, f.hi) != (0.0, INF):
            base += f"@({_fmt(f.lo)},{_fmt(f.hi)}]"
        return base
    if isinstance(f, LogPower):
        return f"logpow:{_fmt(f.A)},{_fmt(f.a)},{_fmt(f.b)},{f.form}"
    if isinstance(f, Sum):
        return "sum:[" + ";".join(format_func(p) for p in f.parts) + "]"
    if isinstance(f, Sampled):
        return f"sampled:@{f.source}" if f.source else f"sampled:<{len(f.grid)} steps>"
    if isinstance(f, BlissProfile):
        return f"bliss:{_fmt(f.A)},{_fmt(f.b)},{_fmt(f.c)}"
    return repr(f)
