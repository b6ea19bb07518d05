import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardysharp import quad
from hardysharp.errors import ParameterError
from hardysharp.funcspace import Exponents
from hardysharp.special import (
    ConstantId, beta, gamma, log_bliss_star, log_gamma, sharp_constant, trunc_beta, trunc_beta_array,
)

mp.mp.dps = 30


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 1.5, 2.5, 7.3, 20.0, 49.5])
def test_gamma_against_mpmath(x):
    assert gamma(x) == pytest.approx(float(mp.gamma(x)), rel=1e-13)
    assert log_gamma(x) == pytest.approx(float(mp.loggamma(x)), rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("x", np.geomspace(0.5, 25.0, 15))
def test_gamma_recurrence(x):
    assert gamma(x + 1) == pytest.approx(x * gamma(x), rel=1e-12)


@pytest.mark.parametrize("u, v", [(0.5, 0.5), (2.0, 3.0), (0.1, 4.0), (7.5, 1.25)])
def test_beta_against_mpmath_and_symmetric(u, v):
    assert beta(u, v) == pytest.approx(float(mp.beta(u, v)), rel=1e-13)
    assert beta(u, v) == pytest.approx(beta(v, u), rel=1e-12)


@pytest.mark.parametrize("p", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_reflection(p):
    assert beta(p, 1 - p) * math.sin(math.pi * p) == pytest.approx(math.pi, rel=1e-10)


def _mp_trunc_beta(a0, u, v):
    return float(mp.betainc(u, v, a0, 1))


@pytest.mark.parametrize("a0, u, v", [
    (0.0, 2.0, 3.0), (0.3, 2.0, 3.0), (0.9, 0.5, 0.5), (0.01, 1.5, 0.25), (0.5, 3.0, 1.0), (0.75, 0.2, 2.0),
])
def test_trunc_beta_against_mpmath(a0, u, v):
    want = _mp_trunc_beta(a0, u, v)
    assert trunc_beta(a0, u, v) == pytest.approx(want, rel=1e-9)
    assert float(trunc_beta_array(np.array([a0]), u, v)[0]) == pytest.approx(want, rel=1e-9)


def test_trunc_beta_range():
    assert trunc_beta(0.0, 2.0, 3.0) == pytest.approx(beta(2.0, 3.0), rel=1e-12)
    with pytest.raises(ParameterError):
        trunc_beta(1.0, 2.0, 3.0)


@settings(max_examples=30, deadline=None)
@given(a0=st.floats(0.01, 0.99), u=st.floats(0.2, 5.0), v=st.floats(0.2, 5.0))
def test_trunc_beta_complements_the_head(a0, u, v):
    head = quad.integrate_between(lambda t: t ** (u - 1) * (1 - t) ** (v - 1), 0.0, a0).value
    assert trunc_beta(a0, u, v) + head == pytest.approx(beta(u, v), rel=1e-8)


def test_hardy_classic_at_two():
    assert sharp_constant("hardy_classic", Exponents(2.0)) == 4.0


def test_dual_pi_at_half():
    assert sharp_constant(ConstantId.DUAL_PI, Exponents(0.5)) == pytest.approx(math.pi / 2, rel=1e-12)


def _mp_bliss(p, q, b, corrected):
    p, q, b = mp.mpf(p), mp.mpf(q), mp.mpf(b)
    pc = p / (p - 1)
    d = q - p
    ratio = (d / p) * mp.gamma(p * q / d) / (mp.gamma(p / d) * mp.gamma(p * (q - 1) / d))
    return float(((p - 1) / b) ** (1 / pc + 1 / q) * (pc / q) ** (1 / (q if corrected else p))
                 * ratio ** (1 / p - 1 / q))


def test_bliss_star_reference_value():
    value = sharp_constant("bliss_star", Exponents(2.0, q=4.0, beta=1.0))
    assert value == pytest.approx(2**-0.5 * 3**0.25, abs=1e-10)
    assert value == pytest.approx(0.930605, abs=1e-6)


@pytest.mark.parametrize("p, q, b", [(2.0, 4.0, 1.0), (3.0, 5.0, 1.0), (1.5, 3.0, 0.5), (2.0, 9.0, 2.5)])
@pytest.mark.parametrize("corrected", [False, True])
def test_bliss_star_against_mpmath(p, q, b, corrected):
    assert math.exp(log_bliss_star(p, q, b, corrected)) == pytest.approx(_mp_bliss(p, q, b, corrected), rel=1e-10)


def test_bliss_star_continuity_at_q_equal_p():
    assert abs(sharp_constant("bliss_star", Exponents(2.0, q=2.001, beta=1.0)) - 2.0) <= 0.01
    assert abs(sharp_constant("bliss_star_corrected", Exponents(2.0, q=2.001, beta=1.0)) - 2.0) <= 0.01


def test_corrected_bliss_matches_the_classical_extremal():
    # f = (1+x)^-2 at p=2, q=4, beta=1 attains (1/6)^(1/4) * 3^(1/2)
    value = sharp_constant("bliss_star_corrected", Exponents(2.0, q=4.0, beta=1.0))
    assert value == pytest.approx((1 / 6) ** 0.25 * 3**0.5, rel=1e-12)


@pytest.mark.parametrize("cid, params, expected", [
    ("hardy_weighted", Exponents(2.0, a=0.5), (2 / 0.5) ** 2),
    ("hardy_reversed_frac", Exponents(0.5, a=0.5), (0.5 / 1.0) ** 0.5),
    ("trunc_target_T", Exponents(2.0, alpha=4.0), 0.5),
    ("trunc_target_T0", Exponents(2.0, alpha=1.0), 2.0),
    ("beta_full", Exponents(2.0, alpha=1.0), 1.0),
    ("bennett_pair", Exponents(2.0, alpha=3.0), (3.0, 9.0)),
    ("lorentz_upper", Exponents(2.0, q=2.0), 2.0),
    ("lorentz_upper", Exponents(0.5, q=1.0), 1.0),
    ("lorentz_lower", Exponents(2.0, q=2.0), math.sqrt(2)),
    ("lorentz_dual_lower", Exponents(0.5, q=1.0), 1.0),
])
def test_constant_table(cid, params, expected):
    assert sharp_constant(cid, params) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("cid, params", [
    ("hardy_classic", Exponents(0.5)),
    ("dual_pi", Exponents(2.0)),
    ("bliss_star", Exponents(3.0, q=2.0, beta=1.0)),
    ("bliss_star", Exponents(2.0, q=4.0, beta=-1.0)),
    ("beta_full", Exponents(2.0)),
])
def test_constants_reject_bad_parameters(cid, params):
    with pytest.raises(ParameterError):
        sharp_constant(cid, params)
