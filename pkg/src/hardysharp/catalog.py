"""Registry of the sharp Hardy-type inequalities and the checks run against it.

Every entry knows its admissible parameter regimes, the monotonicity cone it
needs, how to evaluate both sides, its sharp constant and (where one exists)
a family of functions giving equality.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import lorentz
from .domain import INF, Domain, Kind, Measure
from .errors import (
    ConeError, DivergenceError, DomainError, HardyError, NumericalFailure, ParameterError,
    RegimeError, UnsupportedCase,
)
from .funcspace import (
    BlissProfile, Cone, Exponents, FuncExpr, Indicator, Power, Sampled, cone_check, format_func,
    parse_func, transform_inverse, transform_obs21,
)
from .hardyops import (
    FunctionalKind as FK, LogVariant, TargetKind as TK, TargetWeight, haar_integral, _term,
    weighted_functional,
)
from .report import DEFAULT_TOL, Direction, VerificationReport, finish
from .special import ConstantId, sharp_constant

LEQ, GEQ, EQ = Direction.LEQ, Direction.GEQ, Direction.EQ

EQUALITY_TOL_CLOSED = 1e-8
EQUALITY_TOL_QUAD = 1e-6


@dataclass
class Sides:
    lhs: float
    rhs: float
    constant: float
    lower_constant: float | None = None
    quad_error: float = 0.0
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class InequalityCase:
    """One catalog entry.

    ``regime`` maps exponents to ``(regime name, direction)`` or raises
    :class:`RegimeError`; ``evaluate`` returns both sides and the constant(s).
    ``family(c, params, dom)`` builds the equality (or probe) function.
    """

    id: str
    paper_eq: str
    kind: Kind
    measure: Measure
    cone: Cone
    uses: tuple
    regime: Callable
    evaluate: Callable
    constant_id: str | None = None
    family: Callable | None = None
    family_text: str | None = None
    family_exact: bool = True
    probe: str | None = None
    cone_weight: float = 0.0
    fixed_ell: float | None = None
    finite_ell: bool = False
    optional: tuple = ()

    def domain(self, ell: float | None = None) -> Domain:
        if self.fixed_ell is not None:
            if ell is not None and ell != self.fixed_ell:
                raise DomainError(f"{self.id} is stated only for l = {self.fixed_ell:g}")
            ell = self.fixed_ell
        if ell is None:
            ell = INF if self.kind is Kind.LOWER else 0.0
        if self.finite_ell and not 0 < ell < INF:
            raise DomainError(f"{self.id} needs a finite positive l (got {ell:g})")
        return Domain(self.kind, ell, self.measure)

    def regime_of(self, params: Exponents):
        for name in ("q", "alpha", "beta"):
            if getattr(params, name) is not None and name not in self.uses:
                raise RegimeError(f"{self.id} takes no parameter '{name}'")
        if params.a != 0.0 and "a" not in self.uses:
            raise RegimeError(f"{self.id} takes no parameter 'a'")
        for name in self.uses:
            if name != "a" and name not in self.optional and getattr(params, name) is None:
                raise RegimeError(f"{self.id} needs parameter '{name}'")
        return self.regime(params)

    def direction(self, params: Exponents) -> Direction:
        return self.regime_of(params)[1]


# -- regimes --------------------------------------------------------------------------


def _fail(case_id, why):
    raise RegimeError(f"{case_id}: {why}")


def _regime_h1(P):
    p = P.p
    if p > 1:
        return "p>1", LEQ
    if p < 0:
        return "p<0", LEQ
    if 0 < p < 1:
        return "0<p<1", GEQ
    _fail("H1", "p = 1 has no finite constant")


def _regime_h2(P):
    p, a = P.p, P.a
    if p > 1 and a < p - 1:
        return "p>1,a<p-1", LEQ
    if 0 < p < 1 and a > p - 1:
        return "0<p<1,a>p-1", GEQ
    _fail("H2", f"needs p>1, a<p-1 or 0<p<1, a>p-1 (p={p}, a={a})")


def _regime_h3(P):
    if P.p > 1 and P.a < P.p - 1:
        return "p>1,a<p-1", LEQ
    _fail("H3", f"needs p>1 and a<p-1 (p={P.p}, a={P.a})")


def _regime_c1(P):
    p = P.p
    if p == 1:
        return "p=1", EQ
    if p > 1:
        return "p>1", LEQ
    if p < 0:
        return "p<0", LEQ
    return "0<p<1", GEQ


def _regime_c2(P):
    if P.p >= 1 or P.p < 0:
        return "a", LEQ
    return "b", GEQ


def _regime_e(labels, case_id):
    def regime(P):
        p, al = P.p, P.alpha
        if p >= 1 and al > 0:
            return labels[0], LEQ
        if p < 0 and al < 0:
            return labels[1], LEQ
        if 0 < p < 1 and al > 0:
            return labels[2], GEQ
        _fail(case_id, f"needs p>=1, alpha>0 / p<0, alpha<0 / 0<p<1, alpha>0 (p={p}, alpha={al})")
    return regime


def _regime_ab(case_id, cond, why):
    """Cases that hold for p >= 1 and reverse for 0 < p < 1 (``a`` / ``b``)."""
    def regime(P):
        if not (P.p > 0 and cond(P)):
            _fail(case_id, why.format(p=P.p, alpha=P.alpha))
        return ("a", GEQ) if P.p >= 1 else ("b", LEQ)
    return regime


def _regime_lemma(case_id):
    def regime(P):
        if not P.p > 0:
            _fail(case_id, f"needs p>0 (p={P.p})")
        return ("p>=1", GEQ) if P.p >= 1 else ("0<p<1", LEQ)
    return regime


def _regime_ts(P):
    if not (P.p > 0 and 0 < P.alpha < P.p):
        _fail("TS", f"needs 0<alpha<p (p={P.p}, alpha={P.alpha})")
    return ("p>1", LEQ) if P.p > 1 else ("0<p<=1", GEQ)


def _regime_dp(P):
    if not 0 < P.p < 1:
        _fail("DP", f"needs 0<p<1 (p={P.p})")
    return "0<p<1", LEQ


def _regime_bennett(eq_at_one):
    def regime(P):
        if not (P.p > 0 and P.alpha > 0):
            _fail("B1" if eq_at_one else "B2", f"needs p>0, alpha>0 (p={P.p}, alpha={P.alpha})")
        if P.p > 1:
            return "a", LEQ
        if P.p == 1 and eq_at_one:
            return "c", EQ
        return "b", GEQ
    return regime


def _pq_alpha(P, case_id):
    p, q, b = P.p, P.q, P.beta
    alpha = q * b / p
    if P.alpha is not None and not math.isclose(P.alpha, alpha, rel_tol=1e-12):
        _fail(case_id, f"alpha/q must equal beta/p (alpha={P.alpha}, expected {alpha})")
    return alpha


def _regime_pq(case_id):
    def regime(P):
        if not (1 < P.p <= P.q < INF and P.beta > 0):
            _fail(case_id, f"needs 1<p<=q<inf and beta>0 (p={P.p}, q={P.q}, beta={P.beta})")
        _pq_alpha(P, case_id)
        return ("p=q" if P.p == P.q else "p<q"), LEQ
    return regime


def _regime_lz(case_id, which):
    def regime(P):
        p, q = P.p, P.q
        if not q > 0:
            _fail(case_id, f"needs q>0 (q={q})")
        if which == "eq45":
            if not 0 < p < 1:
                _fail(case_id, f"needs 0<p<1 (p={p})")
        elif not p > 1:
            _fail(case_id, f"needs p>1 (p={p})")
        if q > 1:
            return "q>1", LEQ
        if q < 1:
            return "q<1", GEQ
        return "q=1", EQ
    return regime


# -- side evaluators ----------------------------------------------------------------


def _rel_err(*results):
    out = 0.0
    for r in results:
        if r.value != 0:
            out = max(out, r.abs_error_estimate / abs(r.value))
    return out


def _pair(lhs_kind, rhs_kind, target=None, constant=None, lhs_params=None, power=None):
    """Evaluator for cases of the plain form ``lhs <= C rhs``."""
    def evaluate(f, P, dom, opts):
        fp = lhs_params(P) if lhs_params else P
        tw = target(P) if target else TargetWeight()
        left = weighted_functional(lhs_kind, f, fp, dom, full=True)
        right = weighted_functional(rhs_kind, f, fp, dom, tw, full=True)
        return Sides(left.value, right.value, constant(P), quad_error=_rel_err(left, right))
    return evaluate


def _omp(kappa):
    return TargetWeight(TK.ONE_MINUS_POWER, kappa=kappa)


def _domp(kappa):
    return TargetWeight(TK.DUAL_ONE_MINUS_POWER, kappa=kappa)


def _hardy_constant(P):
    if P.p > 1:
        return sharp_constant(ConstantId.HARDY_WEIGHTED, P)
    if P.p < 0:
        return sharp_constant(ConstantId.HARDY_CLASSIC, P)
    return sharp_constant(ConstantId.HARDY_REVERSED_FRAC, P)


def _lemma_eval(non_decreasing):
    def evaluate(f, P, dom, opts):
        p, ell = P.p, dom.ell
        bs = ell * np.arange(1, 11) / 10.0
        worst, pick = None, None
        for b in bs:
            left = float(f._cum(np.array([b]))[0]) ** p
            if non_decreasing:
                bps = tuple(b - x for x in f.breakpoints if 0 < x < b)
                func = lambda s, b=b: _term(f(b - s), p, s, p)
                right = haar_integral(func, 0.0, b, bps, what="lemma rhs")
            else:
                bps = tuple(x for x in f.breakpoints if 0 < x < b)
                right = haar_integral(lambda y: _term(f(y), p, y, p), 0.0, b, bps, what="lemma rhs")
            rhs = p * right.value
            if left == 0.0 and rhs == 0.0 and b < ell:
                continue  # f vanishes on (0, b): nothing to compare
            # GEQ for p >= 1: slack lhs - rhs; keep the tightest b
            slack = (left - rhs) / max(abs(rhs), abs(left), 1e-300)
            slack = slack if p >= 1 else -slack
            if worst is None or slack < worst:
                worst, pick = slack, (b, left, rhs, _rel_err(right))
        b, left, rhs, err = pick
        return Sides(left, rhs, 1.0, quad_error=err, extra={"b": b})
    return evaluate


def _ts_eval(f, P, dom, opts):
    p, al = P.p, P.alpha
    left = weighted_functional(FK.LHS_CUM, f, P, dom, full=True)
    right = weighted_functional(FK.RHS_WEIGHTED, f, P, dom, _omp(al), full=True)
    i2, i1 = left.value ** (1.0 / p), right.value ** (1.0 / p)
    return Sides(i2, i1, p / al, lower_constant=(p / al) ** (1.0 / p), quad_error=_rel_err(left, right))


def _bennett_eval(f, P, dom, opts):
    variant = opts.get("log_variant", LogVariant.CORRECTED)
    tw = TargetWeight(TK.LOG_BENNETT, variant=variant)
    c1, c2 = sharp_constant(ConstantId.BENNETT_PAIR, P)
    first, second = weighted_functional(FK.BENNETT_LHS_PAIR, f, P, dom, tw, full=True)
    right = weighted_functional(FK.BENNETT_RHS, f, P, dom, tw, full=True)
    lhs = float(c1) * first.value + float(c2) * second.value
    return Sides(lhs, right.value, 1.0, quad_error=_rel_err(second, right),
                 extra={"log_weight": LogVariant(variant).value})


def _pq_eval(dual):
    def evaluate(f, P, dom, opts):
        alpha = _pq_alpha(P, "PQd" if dual else "PQ")
        p, q = P.p, P.q
        lp = Exponents(q, alpha=alpha)
        lkind = FK.LHS_DUAL if dual else FK.LHS_CUM
        left = weighted_functional(lkind, f, lp, dom, full=True)
        right = weighted_functional(FK.RHS_WEIGHTED, f, Exponents(p, alpha=P.beta), dom, full=True)
        if p == q:
            const = p / P.beta
        elif opts.get("pq_constant", "corrected") == "as-printed":
            const = sharp_constant(ConstantId.BLISS_STAR, P)
        else:
            const = sharp_constant(ConstantId.BLISS_STAR_CORRECTED, P)
        return Sides(left.value ** (1.0 / q), right.value ** (1.0 / p), const,
                     quad_error=_rel_err(left, right), extra={"alpha": alpha})
    return evaluate


def _lz_eval(which):
    def evaluate(f, P, dom, opts):
        step = f if isinstance(f, lorentz.StepFunction) else lorentz.StepFunction.from_func(f)
        ell = dom.ell if which != "eq43" else INF
        rep = lorentz.compare(step, P, which, ell=ell)
        return Sides(rep.lhs, rep.rhs, rep.constant, lower_constant=rep.lower_constant)
    return evaluate


# -- equality families ----------------------------------------------------------------


def _ind_from_zero(c, P, dom):
    return Indicator(0.0, c, 1.0)


def _ind_to_ell(c, P, dom):
    return Indicator(c, dom.ell, 1.0)


def _ind_from_ell(c, P, dom):
    return Indicator(dom.ell, c, 1.0)


def _inverse_square_tail(c, P, dom):
    return Power(1.0, -2.0, c, INF)


def _bliss(b, c):
    return BlissProfile(1.0, b, c)


# -- registry --------------------------------------------------------------------------


def _p_over_alpha(P):
    return P.p / P.alpha


_CASES = [
    InequalityCase(
        "H1", "Eq (1.1)", Kind.LOWER, Measure.LEBESGUE, Cone.UNRESTRICTED, (),
        _regime_h1, _pair(FK.LHS_AVG, FK.RHS_LEBESGUE, constant=_hardy_constant),
        constant_id="hardy_classic", probe="power"),
    InequalityCase(
        "H2", "Eq (1.2)", Kind.LOWER, Measure.LEBESGUE, Cone.UNRESTRICTED, ("a",),
        _regime_h2, _pair(FK.LHS_AVG, FK.RHS_LEBESGUE, constant=_hardy_constant),
        constant_id="hardy_weighted", probe="power"),
    InequalityCase(
        "H3", "Eq (1.3)", Kind.LOWER, Measure.LEBESGUE, Cone.UNRESTRICTED, ("a",),
        _regime_h3,
        _pair(FK.LHS_AVG, FK.RHS_LEBESGUE, target=lambda P: _omp((P.p - 1 - P.a) / P.p),
              constant=_hardy_constant),
        constant_id="hardy_weighted"),
    InequalityCase(
        "C1", "Eq (2.1)", Kind.LOWER, Measure.HAAR, Cone.UNRESTRICTED, (),
        _regime_c1, _pair(FK.LHS_AVG, FK.RHS_PLAIN, constant=lambda P: 1.0),
        fixed_ell=INF),
    InequalityCase(
        "C2", "Eq (2.3)", Kind.LOWER, Measure.HAAR, Cone.UNRESTRICTED, (),
        _regime_c2,
        _pair(FK.LHS_AVG, FK.RHS_PLAIN, target=lambda P: TargetWeight(TK.ONE_MINUS_LINEAR),
              constant=lambda P: 1.0),
        probe="power"),
    InequalityCase(
        "E1", "Eq (2.4)", Kind.LOWER, Measure.HAAR, Cone.UNRESTRICTED, ("alpha",),
        _regime_e(("a1", "a2", "b"), "E1"),
        _pair(FK.LHS_CUM, FK.RHS_WEIGHTED, target=lambda P: _omp(P.alpha / P.p),
              constant=lambda P: (P.p / P.alpha) ** P.p),
        probe="power"),
    InequalityCase(
        "E2", "Eq (2.5)", Kind.UPPER, Measure.HAAR, Cone.UNRESTRICTED, ("alpha",),
        _regime_e(("c1", "c2", "d"), "E2"),
        _pair(FK.LHS_DUAL, FK.RHS_WEIGHTED, target=lambda P: _domp(P.alpha / P.p),
              constant=lambda P: (P.p / P.alpha) ** P.p),
        probe="power"),
    InequalityCase(
        "L1", "Eq (3.1)", Kind.LOWER, Measure.LEBESGUE, Cone.NON_INCREASING, (),
        _regime_lemma("L1"), _lemma_eval(non_decreasing=False),
        family=_ind_from_zero, family_text="A chi_(0,c)", probe="equality", finite_ell=True),
    InequalityCase(
        "L2", "Eq (3.2)", Kind.LOWER, Measure.LEBESGUE, Cone.NON_DECREASING, (),
        _regime_lemma("L2"), _lemma_eval(non_decreasing=True),
        family=_ind_to_ell, family_text="A chi_(c,l)", probe="equality", finite_ell=True),
    InequalityCase(
        "R1", "Eq (3.3)", Kind.LOWER, Measure.HAAR, Cone.NON_INCREASING, ("alpha",),
        _regime_ab("R1", lambda P: 0 < P.alpha < P.p, "needs 0<alpha<p (p={p}, alpha={alpha})"),
        _pair(FK.LHS_CUM, FK.RHS_WEIGHTED, target=lambda P: _omp(P.alpha), constant=_p_over_alpha),
        constant_id="p/alpha", family=_ind_from_zero, family_text="A chi_(0,c)", probe="equality"),
    InequalityCase(
        "R2", "Eq (3.4)", Kind.LOWER, Measure.HAAR, Cone.NON_DECREASING, ("alpha",),
        _regime_ab("R2", lambda P: P.alpha >= P.p, "needs alpha>=p>0 (p={p}, alpha={alpha})"),
        _pair(FK.LHS_CUM, FK.RHS_WEIGHTED, target=lambda P: TargetWeight(TK.TRUNC_BETA_T),
              constant=lambda P: sharp_constant(ConstantId.TRUNC_TARGET_T, P)),
        constant_id="trunc_target_T", family=_ind_to_ell, family_text="A chi_(c,l)",
        family_exact=False, probe="equality", finite_ell=True),
    InequalityCase(
        "R3", "Eq (3.5)", Kind.UPPER, Measure.HAAR, Cone.NON_INCREASING, ("alpha",),
        _regime_ab("R3", lambda P: P.alpha > 0, "needs p>0, alpha>0 (p={p}, alpha={alpha})"),
        _pair(FK.LHS_DUAL, FK.RHS_WEIGHTED, target=lambda P: TargetWeight(TK.TRUNC_BETA_T0),
              constant=lambda P: sharp_constant(ConstantId.TRUNC_TARGET_T0, P)),
        constant_id="trunc_target_T0", family=_ind_from_ell, family_text="A chi_(l,c)",
        family_exact=False, probe="equality"),
    InequalityCase(
        "R3∞", "Example 3.6", Kind.UPPER, Measure.HAAR, Cone.NON_INCREASING, ("alpha",),
        _regime_ab("R3∞", lambda P: P.alpha > 0, "needs p>0, alpha>0 (p={p}, alpha={alpha})"),
        _pair(FK.LHS_DUAL, FK.RHS_WEIGHTED,
              constant=lambda P: sharp_constant(ConstantId.BETA_FULL, P)),
        constant_id="beta_full", family=_ind_from_ell, family_text="A chi_(0,c)",
        family_exact=False, probe="equality", fixed_ell=0.0),
    InequalityCase(
        "TS", "Eq (4.1)", Kind.LOWER, Measure.HAAR, Cone.NON_INCREASING, ("alpha",),
        _regime_ts, _ts_eval, constant_id="p/alpha",
        family=_ind_from_zero, family_text="A chi_(0,c) (lower bound)", probe="equality"),
    InequalityCase(
        "LZ1", "Eq (4.3)", Kind.LOWER, Measure.LEBESGUE, Cone.UNRESTRICTED, ("q",),
        _regime_lz("LZ1", "eq43"), _lz_eval("eq43"), constant_id="lorentz_upper",
        family=_ind_from_zero, family_text="A chi_(0,c) (lower bound)", fixed_ell=INF),
    InequalityCase(
        "LZ2", "Eq (4.4)", Kind.LOWER, Measure.LEBESGUE, Cone.UNRESTRICTED, ("q",),
        _regime_lz("LZ2", "eq44"), _lz_eval("eq44"), constant_id="lorentz_upper",
        family=_ind_from_zero, family_text="A chi_(0,c) (lower bound)", family_exact=False),
    InequalityCase(
        "LZ3", "Eq (4.5)", Kind.LOWER, Measure.LEBESGUE, Cone.UNRESTRICTED, ("q",),
        _regime_lz("LZ3", "eq45"), _lz_eval("eq45"), constant_id="lorentz_upper",
        family=_ind_from_zero, family_text="A chi_(0,c) (lower bound)", family_exact=False),
    InequalityCase(
        "DP", "Eq (4.6)", Kind.UPPER, Measure.LEBESGUE, Cone.NON_INCREASING, (),
        _regime_dp,
        _pair(FK.LHS_DUAL, FK.RHS_WEIGHTED,
              target=lambda P: TargetWeight(TK.TRUNC_BETA_T0, normalized=True),
              constant=lambda P: sharp_constant(ConstantId.DUAL_PI, P),
              lhs_params=lambda P: P.replace(alpha=1.0 - P.p)),
        constant_id="dual_pi", family=_ind_from_ell, family_text="A chi_(l,c)",
        family_exact=False, probe="equality"),
    InequalityCase(
        "B1", "Eq (5.1)", Kind.LOWER, Measure.HAAR, Cone.UNRESTRICTED, ("alpha",),
        _regime_bennett(True), _bennett_eval, constant_id="bennett_pair", finite_ell=True),
    InequalityCase(
        "B2", "Eq (5.2)", Kind.UPPER, Measure.HAAR, Cone.UNRESTRICTED, ("alpha",),
        _regime_bennett(False), _bennett_eval, constant_id="bennett_pair", finite_ell=True),
    InequalityCase(
        "PQ", "Eq (5.3)+(5.4)+(5.5a)", Kind.LOWER, Measure.HAAR, Cone.UNRESTRICTED,
        ("q", "alpha", "beta"), _regime_pq("PQ"), _pq_eval(dual=False),
        constant_id="bliss_star_corrected", probe="bliss", fixed_ell=INF, optional=("alpha",)),
    InequalityCase(
        "PQd", "Eq (5.5)", Kind.UPPER, Measure.HAAR, Cone.UNRESTRICTED,
        ("q", "alpha", "beta"), _regime_pq("PQd"), _pq_eval(dual=True),
        constant_id="bliss_star_corrected", probe="bliss", fixed_ell=0.0, optional=("alpha",)),
    InequalityCase(
        "D1", "Eq (5.6)", Kind.UPPER, Measure.HAAR, Cone.NON_DECREASING, ("alpha",),
        _regime_ab("D1", lambda P: 0 < P.alpha < P.p, "needs 0<alpha<p (p={p}, alpha={alpha})"),
        _pair(FK.LHS_DUAL, FK.RHS_WEIGHTED, target=lambda P: _domp(P.alpha), constant=_p_over_alpha),
        constant_id="p/alpha", family=_inverse_square_tail, family_text="A x^-2 chi_(c,inf)",
        probe="equality", cone_weight=2.0),
]

CASES = {c.id: c for c in _CASES}
_ALIASES = {"R3inf": "R3∞", "R3INF": "R3∞", "R3oo": "R3∞"}


def case_ids():
    return [c.id for c in _CASES]


def get_case(case_id) -> InequalityCase:
    if isinstance(case_id, InequalityCase):
        return case_id
    key = _ALIASES.get(case_id, case_id)
    try:
        return CASES[key]
    except KeyError:
        raise ParameterError(f"unknown case id {case_id!r}; known: {', '.join(case_ids())}") from None


# -- verification ---------------------------------------------------------------------


def _report_params(case, P, dom, extra=None):
    out = {"p": P.p}
    for name in ("q", "alpha", "beta", "a"):
        if name in case.uses:
            out[name] = getattr(P, name)
    out["ell"] = dom.ell
    if extra:
        out.update({k: v for k, v in extra.items() if k in ("alpha", "b", "log_weight")})
    return out


def _describe(f):
    if isinstance(f, lorentz.StepFunction):
        return lorentz.format_step(f)
    return format_func(f)


def _check_cone(case, f, dom):
    if case.cone is Cone.UNRESTRICTED or isinstance(f, lorentz.StepFunction):
        return
    if not cone_check(f, case.cone, dom, case.cone_weight):
        what = f"f(x) x^{case.cone_weight:g}" if case.cone_weight else "f"
        raise ConeError(f"{case.id} requires {what} {case.cone.value} on {dom}")


def verify(case, f, params: Exponents, dom: Domain | None = None, tol: float = DEFAULT_TOL,
           log_variant=LogVariant.CORRECTED, pq_constant: str = "corrected") -> VerificationReport:
    """Evaluate both sides and check the inequality in the regime's direction.

    ``log_variant`` selects the logarithmic weight of B1/B2 and
    ``pq_constant`` (``corrected`` or ``as-printed``) the PQ/PQd constant.

    Raises :class:`RegimeError`, :class:`ConeError`, :class:`DivergenceError`
    (and other package errors); :func:`safe_verify` records them instead.
    """
    case = get_case(case)
    dom = dom if dom is not None else case.domain()
    if dom.kind is not case.kind:
        raise DomainError(f"{case.id} lives on a {case.kind.value} interval")
    case.domain(dom.ell)  # fixed/finite l checks
    regime, direction = case.regime_of(params)
    _check_cone(case, f, dom)
    if pq_constant not in ("corrected", "as-printed"):
        raise ParameterError(f"unknown PQ constant variant {pq_constant!r}")
    sides = case.evaluate(f, params, dom, {"log_variant": log_variant, "pq_constant": pq_constant})
    report = VerificationReport(
        case_id=case.id, params=_report_params(case, params, dom, sides.extra),
        direction=direction, lhs=sides.lhs, rhs=sides.rhs, constant=sides.constant,
        tol=tol, quad_error=sides.quad_error, regime=regime, function=_describe(f),
        lower_constant=sides.lower_constant,
    )
    return finish(report)


def error_report(case_id, params, f, exc, tol=DEFAULT_TOL, ell=None) -> VerificationReport:
    data = {k: getattr(params, k) for k in ("p", "q", "alpha", "beta", "a")} if params else {}
    data = {k: v for k, v in data.items() if v is not None}
    if ell is not None:
        data["ell"] = ell
    return VerificationReport(
        case_id=str(case_id), params=data, tol=tol,
        function=None if f is None else _describe(f),
        error=f"{type(exc).__name__}: {exc}",
    )


def safe_verify(case, f, params, dom=None, tol=DEFAULT_TOL, **kw) -> VerificationReport:
    try:
        return verify(case, f, params, dom, tol, **kw)
    except HardyError as exc:
        cid = case.id if isinstance(case, InequalityCase) else case
        return error_report(cid, params, f, exc, tol, None if dom is None else dom.ell)


def equality_check(case, params: Exponents, dom: Domain | None = None, family_point: float = 0.5,
                   amplitude: float = 1.0, tol: float | None = None) -> VerificationReport:
    """Run the equality family at ``c = family_point``.

    For two-sided cases the lower bound is the one attained; the report's
    margin is then the relative gap to that bound.
    """
    case = get_case(case)
    if case.family is None:
        raise UnsupportedCase(f"{case.id} has no registered equality family")
    dom = dom if dom is not None else case.domain()
    regime, direction = case.regime_of(params)
    if tol is None:
        tol = EQUALITY_TOL_CLOSED if case.family_exact else EQUALITY_TOL_QUAD
    f = case.family(family_point, params, dom)
    if amplitude != 1.0:
        f = f.scaled(amplitude)
    rep = verify(case, f, params, dom, tol)
    bound = rep.lower_constant if rep.lower_constant is not None else rep.constant
    gap = abs(rep.lhs - bound * rep.rhs) / abs(rep.lhs) if rep.lhs else abs(bound * rep.rhs)
    rep.direction = EQ
    rep.constant = bound
    rep.lower_constant = None
    rep.ratio = rep.lhs / (bound * rep.rhs)
    rep.margin = -gap
    rep.passed = gap <= tol
    return rep


# -- sharpness probes -------------------------------------------------------------------


@dataclass
class ProbeResult:
    case_id: str
    params: dict
    family: str
    sup_ratio: float
    argmax: object
    trace: list

    def as_dict(self):
        return {"case_id": self.case_id, "params": self.params, "family": self.family,
                "sup_ratio": self.sup_ratio, "argmax": self.argmax, "trace": self.trace}


_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(fun, lo, hi, xtol=1e-4, max_iter=60):
    """Golden-section search for the maximum of a unimodal ``fun`` on [lo, hi]."""
    a, b = lo, hi
    x1, x2 = b - _GOLD * (b - a), a + _GOLD * (b - a)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLD * (b - a)
            f1 = fun(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLD * (b - a)
            f2 = fun(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _normalize(direction, ratio):
    return 1.0 / ratio if direction is GEQ else ratio


def _power_family(case, P, dom):
    """Closed-form ratio ``lhs / (C rhs)`` along the boundary family, with the
    matching function for a quadrature cross-check (or None)."""
    p = P.p
    cid = case.id
    if cid == "C2":
        sgn = 1.0 if p > 0 else -1.0

        def ratio(eps):
            s = sgn * eps
            return (s * p + 1.0) / (s + 1.0) ** p

        return ratio, (lambda eps: Power(1.0, sgn * eps, positive=True)), "g = x^s, s -> 0 (sign of p)"
    if cid in ("E1", "E2"):
        al = P.alpha

        def ratio(d):
            g = (al + d) / p
            return (d + al / p) / (g**p * (p / al) ** (p - 1.0))

        if cid == "E1":
            build = (lambda d: Power(1.0, (al + d) / p - 1.0, 0.0, dom.ell)) if dom.ell < INF else None
            text = "f = x^((alpha+d)/p - 1) on (0,l), d -> 0"
        else:
            build = (lambda d: Power(1.0, -(al + d) / p - 1.0, dom.ell, INF)) if dom.ell > 0 else None
            text = "f = x^(-(alpha+d)/p - 1) on (l,inf), d -> 0"
        return ratio, build, text
    if cid in ("H1", "H2"):
        if not p > 1:
            raise UnsupportedCase(f"{cid} probe family is registered for p > 1 only")
        a = P.a
        crit = p - 1.0 - a
        const = (p / crit) ** p

        def ratio(d):
            g = (crit + d) / p
            return (1.0 + d / crit) / (g**p * const)

        return ratio, (lambda d: Power(1.0, (crit + d) / p - 1.0, 0.0, 1.0)), \
            "f = x^(sigma - 1 + d/p) chi_(0,1), sigma = (p-1-a)/p, d -> 0"
    raise UnsupportedCase(f"no power family for {cid}")  # pragma: no cover


def _probe_power(case, P, dom, direction):
    ratio, build, text = _power_family(case, P, dom)
    trace, prev, best, arg = [], None, -INF, None
    for k in range(1, 60):
        eps = 2.0 ** (-k)
        r = _normalize(direction, ratio(eps))
        entry = {"param": eps, "ratio": r}
        if k == 1 and build is not None:
            # same family through the quadrature route
            try:
                rep = verify(case, build(eps), P, dom)
                entry["quadrature_ratio"] = _normalize(direction, rep.ratio)
            except HardyError:
                pass
        trace.append(entry)
        if r > best:
            best, arg = r, eps
        if prev is not None and abs(r - prev) < 1e-6:
            break
        prev = r
    return best, arg, trace, text


def _family_range(case, dom):
    ell = dom.ell
    if case.kind is Kind.LOWER:
        if ell < INF:
            return ell * 1e-3, ell * (1.0 - 1e-3)
        return 1e-3, 1e3
    if ell > 0:
        return ell * (1.0 + 1e-3), ell * 1e3
    return 1e-3, 1e3


def _probe_equality(case, P, dom, direction):
    lo, hi = _family_range(case, dom)
    trace = []

    def objective(logc):
        c = math.exp(logc)
        rep = verify(case, case.family(c, P, dom), P, dom)
        bound = rep.lower_constant if rep.lower_constant is not None else rep.constant
        r = rep.lhs / (bound * rep.rhs)
        if rep.lower_constant is not None:
            # lower bound attained: normalise against the lower constant
            r = _normalize(GEQ if direction is LEQ else LEQ, r)
        else:
            r = _normalize(direction, r)
        trace.append({"param": c, "ratio": r})
        return r

    x, best = golden_max(objective, math.log(lo), math.log(hi), xtol=1e-2)
    return best, math.exp(x), trace, case.family_text


def _probe_bliss(case, P, dom, direction):
    trace = []
    _pq_alpha(P, case.id)
    if case.kind is Kind.LOWER and P.beta >= P.p:
        raise UnsupportedCase("the (1 + x^b)^-c family has an infinite right side at 0 when beta >= p")
    # integrability at infinity needs b*c > 1 + beta/p
    need = 1.0 + P.beta / P.p

    def objective(logb, logm):
        b = math.exp(logb)
        c = need * (1.0 + math.exp(logm)) / b
        try:
            rep = verify(case, _bliss(b, c), P, dom)
            r = rep.ratio
        except HardyError:
            r = -INF
        trace.append({"param": [b, c], "ratio": r})
        return r

    logb, logm = math.log(2.0), 0.0
    best = objective(logb, logm)
    for _ in range(4):
        logb, best = golden_max(lambda t: objective(t, logm), math.log(0.01), math.log(20.0), xtol=1e-3)
        logm, best = golden_max(lambda t: objective(logb, t), -8.0, 4.0, xtol=1e-3)
    b = math.exp(logb)
    c = need * (1.0 + math.exp(logm)) / b
    return best, [b, c], trace, "f = (1 + x^b)^(-c)"


def sharpness_probe(case, params: Exponents, dom: Domain | None = None) -> ProbeResult:
    """Supremum of the normalised ratio over the case's fixed probe family.

    The ratio is ``lhs / (C rhs)`` for LEQ and its reciprocal for GEQ, so a
    sharp constant shows up as a supremum of 1 that is never exceeded.
    """
    case = get_case(case)
    if case.probe is None:
        raise UnsupportedCase(f"{case.id} has no registered probe family")
    dom = dom if dom is not None else case.domain()
    regime, direction = case.regime_of(params)
    runner = {"power": _probe_power, "equality": _probe_equality, "bliss": _probe_bliss}[case.probe]
    best, arg, trace, text = runner(case, params, dom, direction)
    return ProbeResult(case.id, _report_params(case, params, dom), text, best, arg, trace)


# -- equivalences -----------------------------------------------------------------------


def _identity_report(name, part, a, b, factor, params, f, tol):
    rep = VerificationReport(
        case_id=f"{name}:{part}", params=params, direction=EQ, lhs=a, rhs=b, constant=factor,
        tol=tol, regime=name, function=_describe(f),
    )
    return finish(rep)


def equivalence_check(which: str, f: FuncExpr, params: Exponents, ell: float | None = None,
                      tol: float = EQUALITY_TOL_QUAD, log_variant=LogVariant.CORRECTED):
    """Numerical identities induced by the substitutions linking two inequalities.

    Returns one EQ report per side (``<which>:lhs`` and ``<which>:rhs``):

    * ``obs21``: classical Hardy sides at ``transform_obs21(g)`` (the right one
      with its constant ``(p')^p``) equal ``(p')^(p+1)`` times the ``dx/x``
      Hardy sides at ``g`` (needs p > 1);
    * ``thm23fg``: weighted ``(0, l)`` sides at ``f`` equal the dual ``(1/l, inf)``
      sides at ``transform_inverse(f)``;
    * ``dual53``: the same for the logarithmic pair.
    """
    p = params.p
    if which == "obs21":
        if not p > 1:
            raise ParameterError("obs21 needs p > 1")
        g = f
        h = transform_obs21(g, p)
        factor = (p / (p - 1.0)) ** (p + 1.0)
        plain = Exponents(p)
        leb = Domain.lower(INF, Measure.LEBESGUE)
        haar = Domain.lower(INF, Measure.HAAR)
        a1 = weighted_functional(FK.LHS_AVG, h, plain, leb)
        a2 = weighted_functional(FK.LHS_AVG, g, plain, haar)
        # the classical side carries its constant (p')^p
        b1 = sharp_constant(ConstantId.HARDY_CLASSIC, plain) * weighted_functional(FK.RHS_LEBESGUE, h, plain, leb)
        b2 = weighted_functional(FK.RHS_PLAIN, g, plain, haar)
        rp = {"p": p}
    elif which in ("thm23fg", "dual53"):
        ell = 1.0 if ell is None else ell
        if not 0 < ell < INF:
            raise ParameterError(f"{which} needs a finite positive l")
        params.require("alpha")
        h = transform_inverse(f)
        lo_dom, up_dom = Domain.lower(ell), Domain.upper(1.0 / ell)
        if which == "thm23fg":
            kappa = params.alpha / p
            a1 = weighted_functional(FK.LHS_CUM, f, params, lo_dom)
            a2 = weighted_functional(FK.LHS_DUAL, h, params, up_dom)
            b1 = weighted_functional(FK.RHS_WEIGHTED, f, params, lo_dom, _omp(kappa))
            b2 = weighted_functional(FK.RHS_WEIGHTED, h, params, up_dom, _domp(kappa))
        else:
            tw = TargetWeight(TK.LOG_BENNETT, variant=log_variant)
            c1, c2 = sharp_constant(ConstantId.BENNETT_PAIR, params)
            t1, t2 = weighted_functional(FK.BENNETT_LHS_PAIR, f, params, lo_dom, tw)
            s1, s2 = weighted_functional(FK.BENNETT_LHS_PAIR, h, params, up_dom, tw)
            a1, a2 = c1 * t1 + c2 * t2, c1 * s1 + c2 * s2
            b1 = weighted_functional(FK.BENNETT_RHS, f, params, lo_dom, tw)
            b2 = weighted_functional(FK.BENNETT_RHS, h, params, up_dom, tw)
        factor = 1.0
        rp = {"p": p, "alpha": params.alpha, "ell": ell}
    else:
        raise ParameterError(f"unknown equivalence {which!r}; use obs21, thm23fg or dual53")
    return [
        _identity_report(which, "lhs", a1, a2, factor, rp, f, tol),
        _identity_report(which, "rhs", b1, b2, factor, rp, f, tol),
    ]


# -- scans and random inputs ----------------------------------------------------------------


_EXPONENT_KEYS = ("p", "q", "alpha", "beta", "a")


def expand_grid(grid):
    """A list of dicts passes through; a dict of lists becomes its Cartesian
    product in key order (last key varying fastest)."""
    if isinstance(grid, dict):
        keys = list(grid)
        values = [list(v) if isinstance(v, (list, tuple)) else [v] for v in grid.values()]
        return [dict(zip(keys, combo)) for combo in itertools.product(*values)]
    return [dict(point) for point in grid]


def _instantiate(template, point, ell):
    if isinstance(template, str):
        return parse_func(template.format(**point), ell=ell if 0 < ell < INF else 1.0)
    if callable(template) and not isinstance(template, FuncExpr):
        return template(point)
    return template


def scan(case, grid, f_template, ell: float | None = None, tol: float = DEFAULT_TOL,
         workers: int = 1, log_variant=LogVariant.CORRECTED) -> list:
    """One report per grid point, in grid order.

    Grid keys the case takes as exponents go into :class:`Exponents`; every
    key is also available to the function template (``"pow:1,{alpha}"``, a
    callable of the point, or a fixed function).  Failures are recorded in
    the row's ``error`` field.
    """
    case = get_case(case)
    points = expand_grid(grid)
    if not points:
        raise ParameterError("scan needs a non-empty grid")

    def run(point):
        point = dict(point)
        point_ell = point.pop("ell", ell)
        exps = {k: point[k] for k in _EXPONENT_KEYS if k in point and (k == "p" or k in case.uses)}
        f = None
        try:
            params = Exponents(**exps)
            dom = case.domain(point_ell)
            f = _instantiate(f_template, point, dom.ell)
            return verify(case, f, params, dom, tol, log_variant=log_variant)
        except HardyError as exc:
            rep = error_report(case.id, None, f, exc, tol, point_ell)
            rep.params = {**exps, **({"ell": point_ell} if point_ell is not None else {})}
            return rep

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, points))
    return [run(point) for point in points]


def random_step(rng: np.random.Generator, cone=Cone.UNRESTRICTED, dom: Domain | None = None,
                pieces: int | None = None, positive: bool = False) -> Sampled:
    """Random step function on the domain, breakpoints uniform in log x and
    values sorted into the cone."""
    cone = Cone(cone)
    dom = dom or Domain.lower(1.0)
    n = int(pieces if pieces is not None else rng.integers(2, 9))
    if dom.is_lower:
        top = dom.ell if dom.ell < INF else 10.0
        lo, hi = top * 1e-3, top
        inner = np.sort(np.exp(rng.uniform(math.log(lo), math.log(hi), n - 1)))
        grid = np.append(inner, top)
    else:
        base = dom.ell if dom.ell > 0 else 1e-2
        lo, hi = base * 1.001, base * 1e3
        grid = np.sort(np.exp(rng.uniform(math.log(lo), math.log(hi), n)))
    grid = np.unique(grid)
    vals = rng.uniform(0.05 if positive else 0.0, 1.0, grid.size)
    if cone is Cone.NON_INCREASING:
        vals = np.sort(vals)[::-1]
    elif cone is Cone.NON_DECREASING:
        vals = np.sort(vals)
    if cone is Cone.NON_DECREASING and not dom.is_lower:
        raise ParameterError("a non-decreasing step function on (l, inf) cannot vanish at infinity")
    if cone is Cone.NON_DECREASING and not positive:
        # keeps weighted integrals finite at 0 for large alpha
        vals[0] = 0.0
    elif not positive and rng.random() < 0.3:
        vals[-1] = 0.0
    if not np.any(vals > 0):
        vals[0] = 1.0
    return Sampled(tuple(grid), tuple(vals), positive=positive)
