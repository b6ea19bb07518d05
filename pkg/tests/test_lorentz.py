import math

import numpy as np
import pytest

from hardysharp.domain import INF
from hardysharp.errors import DivergenceError, ParameterError
from hardysharp.funcspace import Exponents, Indicator, Sampled
from hardysharp.lorentz import (
    StepFunction, compare, format_step, norm_doublestar, norm_star, parse_step, rearrange,
)
from hardysharp.report import Direction

CHI01 = StepFunction(((1.0, 1.0),))


def random_step(rng, pieces=None, tail=False, decreasing=False):
    n = int(pieces or rng.integers(1, 8))
    measures = rng.uniform(0.05, 2.0, n)
    values = rng.uniform(0.0, 3.0, n)
    values[rng.integers(0, n)] += 0.1
    if decreasing:
        values = np.sort(values)[::-1]
    pieces = list(zip(measures, values))
    if tail:
        pieces.append((INF, 0.0))
    return StepFunction(tuple(pieces))


def test_norm_examples():
    P = Exponents(2.0, q=2.0)
    assert norm_doublestar(CHI01, P) == pytest.approx(math.sqrt(2), rel=1e-12)
    assert norm_star(CHI01, P) == pytest.approx(1.0, rel=1e-14)
    assert norm_doublestar(CHI01, Exponents(0.5, q=1.0), "dual") == pytest.approx(0.5, rel=1e-12)
    zero = StepFunction(((1.0, 0.0),))
    assert norm_star(zero, P) == 0.0 and norm_doublestar(zero, P) == 0.0


def test_compare_eq43():
    rep = compare(CHI01, Exponents(2.0, q=2.0), "eq43")
    assert rep.case_id == "LZ1" and rep.direction is Direction.LEQ and rep.passed
    assert rep.lhs == pytest.approx(rep.lower_constant * rep.rhs, rel=1e-8)
    assert rep.lower_constant == pytest.approx(math.sqrt(2))


def test_compare_eq44_finite_ell():
    rep = compare(CHI01, Exponents(2.0, q=2.0), "eq44", ell=1.0)
    star = rep.rhs
    assert star == pytest.approx(1 / math.sqrt(2), rel=1e-8)
    assert rep.lower_constant * star == pytest.approx(1.0, rel=1e-8)
    assert rep.constant * star == pytest.approx(math.sqrt(2), rel=1e-8)
    # the lower bound is attained: int_0^1 t^2 t^-1 dt/t = 1
    assert rep.lhs == pytest.approx(1.0, rel=1e-8)
    assert rep.passed


def test_compare_eq45_forced_equality():
    rep = compare(CHI01, Exponents(0.5, q=1.0), "eq45")
    assert rep.direction is Direction.EQ
    assert rep.constant == pytest.approx(1.0) and rep.lower_constant == pytest.approx(1.0)
    assert rep.lhs == pytest.approx(0.5, rel=1e-10) and rep.rhs == pytest.approx(0.5, rel=1e-12)
    assert rep.passed


@pytest.mark.parametrize("which, p", [("eq43", 0.5), ("eq44", 1.0), ("eq45", 2.0)])
def test_compare_guards(which, p):
    with pytest.raises(ParameterError):
        compare(CHI01, Exponents(p, q=2.0), which)


def test_compare_rejects_finite_ell_for_eq43():
    with pytest.raises(ParameterError):
        compare(CHI01, Exponents(2.0, q=2.0), "eq43", ell=1.0)


def test_doublestar_diverges_for_nonvanishing_tail():
    f = StepFunction(((1.0, 1.0),))
    with pytest.raises(DivergenceError):
        norm_doublestar(f, Exponents(0.5, q=1.0), "forward")


def test_step_validation():
    with pytest.raises(ParameterError):
        StepFunction(((INF, 1.0),))
    with pytest.raises(ParameterError):
        StepFunction(((INF, 0.0), (1.0, 1.0)))
    with pytest.raises(ParameterError):
        StepFunction(((0.0, 1.0),))
    with pytest.raises(ParameterError):
        StepFunction(((1.0, -1.0),))
    assert StepFunction(((1.0, 2.0), (0.5, 2.0))).pieces == ((1.5, 2.0),)


def test_literal_round_trip():
    f = parse_step("step:[0.5:2;1:3;inf:0]")
    assert f.pieces == ((0.5, 2.0), (1.0, 3.0), (INF, 0.0))
    assert parse_step(format_step(f)) == f
    for bad in ("step:[]", "step:[1]", "[1:2]", "step:[1:x]"):
        with pytest.raises((ParameterError, ValueError)):
            parse_step(bad)


def test_conversions():
    assert StepFunction.from_func(Indicator(0.5, 1.5, 2.0)).pieces == ((0.5, 0.0), (1.0, 2.0))
    s = Sampled((1.0, 3.0), (2.0, 1.0))
    f = StepFunction.from_func(s)
    assert f.pieces == ((1.0, 2.0), (2.0, 1.0))
    assert f.to_sampled() == Sampled((1.0, 3.0), (2.0, 1.0))


@pytest.mark.parametrize("seed", range(20))
def test_rearrangement_is_equimeasurable(seed):
    rng = np.random.default_rng(seed)
    f = random_step(rng, tail=bool(seed % 2))
    g = rearrange(f)
    assert g.is_non_increasing()
    for lam in [-1.0, *f.values, *(f.values * 0.999), *(f.values + 1e-9)]:
        assert g.distribution(lam) == pytest.approx(f.distribution(lam), rel=1e-14, abs=0)
    assert norm_star(rearrange(f), Exponents(2.0, q=1.5)) == norm_star(rearrange(rearrange(f)), Exponents(2.0, q=1.5))


@pytest.mark.parametrize("seed", range(10))
def test_scaling(seed):
    rng = np.random.default_rng(100 + seed)
    f = rearrange(random_step(rng))
    P = Exponents(2.0, q=1.5)
    Pd = Exponents(0.5, q=0.75)
    for norm in (lambda g: norm_star(g, P), lambda g: norm_doublestar(g, P),
                 lambda g: norm_star(g, P, ell=1.0, target=True),
                 lambda g: norm_doublestar(g, P, ell=1.0),
                 lambda g: norm_doublestar(g, Pd, "dual")):
        assert norm(f.scaled(3.0)) == pytest.approx(3.0 * norm(f), rel=1e-10)


def _sandwich(p, q, seeds):
    P = Exponents(p, q=q)
    reports = []
    for seed in range(seeds):
        f = random_step(np.random.default_rng(1000 + seed), decreasing=True)
        reports.append(compare(f, P, "eq43"))
    return reports


@pytest.mark.parametrize("p, q, direction", [(2.0, 2.0, Direction.LEQ), (3.0, 1.5, Direction.LEQ),
                                             (2.0, 0.5, Direction.GEQ)])
def test_sandwich(p, q, direction):
    reports = _sandwich(p, q, 100)
    assert all(r.direction is direction for r in reports)
    assert all(r.passed for r in reports), min(r.margin for r in reports)


@pytest.mark.parametrize("seed", range(10))
def test_finite_ell_path_reduces_to_closed_form(seed):
    f = rearrange(random_step(np.random.default_rng(seed)))
    P = Exponents(2.0, q=2.0)
    a, b = compare(f, P, "eq43"), compare(f, P, "eq44")
    assert b.lhs == pytest.approx(a.lhs, rel=1e-8)
    assert b.rhs == pytest.approx(a.rhs, rel=1e-8)


def test_norm_depends_only_on_rearrangement():
    f = StepFunction(((0.5, 1.0), (1.0, 3.0), (0.25, 2.0)))
    P = Exponents(2.0, q=2.0)
    with pytest.raises(ParameterError):
        norm_star(f, P)
    rep = compare(f, P, "eq43")
    assert rep.rhs == pytest.approx(norm_star(rearrange(f), P), rel=1e-15)
