import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import sici

from charmoment.errors import ParameterError
from charmoment.quadrature import (
    QuadratureConfig,
    integrate_finite,
    integrate_tail_limit,
    integrate_zero_inf,
)

CFG = QuadratureConfig()


def sinc_like(p):
    """``sin t / t**(p+1)`` written to stay finite as ``t -> 0``."""
    def f(t):
        return np.sinc(t / math.pi) * t ** (-p) + 0j
    return f


# frozen oracles: elementary antiderivatives, the sine integral and the
# closed form  int_0^inf sin t / t^{p+1} dt = Gamma(-p) sin(-pi p / 2)
@pytest.mark.parametrize(
    "f, a, b, hint, want",
    [
        (lambda t: np.exp(-t) + 0j, 0.0, 1.0, None, 1 - math.exp(-1)),
        (lambda t: t**-0.5 + 0j, 0.0, 1.0, 0.5, 2.0),
        (lambda t: np.sin(50 * t) + 0j, 0.0, 1.0, None, (1 - math.cos(50)) / 50),
    ],
)
def test_finite_oracles(f, a, b, hint, want):
    res = integrate_finite(f, a, b, hint, CFG)
    assert res.converged
    assert res.value == pytest.approx(want, rel=1e-10)
    assert abs(res.value - want) <= 5 * res.err_estimate + 1e-15


def test_tail_oracles():
    res = integrate_tail_limit(lambda t: np.sin(t) / t + 0j, 1.0, CFG)
    assert res.value.real == pytest.approx(math.pi / 2 - sici(1.0)[0], abs=1e-10)
    res = integrate_tail_limit(lambda t: t**-2.0 + 0j, 1.0, CFG, math.inf, 2.0)
    assert res.value.real == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize(
    "f, hint, period, want",
    [
        (sinc_like(0.0), None, None, math.pi / 2),
        (lambda t: np.sinc(t / math.pi) ** 3 * t**2 + 0j, None, 2 * math.pi, math.pi / 4),
        (lambda t: np.exp(-t) + 0j, None, math.inf, 1.0),
        (sinc_like(0.5), 0.5, None, math.sqrt(2 * math.pi)),
    ],
)
def test_zero_inf_oracles(f, hint, period, want):
    res = integrate_zero_inf(f, hint, CFG, period)
    assert res.converged
    assert res.value.real == pytest.approx(want, abs=1e-8)


@pytest.mark.parametrize("p", [-0.95, -0.5, 0.0, 0.3, 0.5, 0.9])
def test_sine_power_family(p):
    want = math.gamma(-p) * math.sin(-math.pi * p / 2) if p != 0 else math.pi / 2
    res = integrate_zero_inf(sinc_like(p), p if p > 0 else None, CFG)
    assert res.value.real == pytest.approx(want, rel=1e-9)
    assert abs(res.value.real - want) <= 5 * res.err_estimate + 1e-12 * abs(want)


def test_config_validation():
    with pytest.raises(ParameterError):
        QuadratureConfig(rel_tol=0)
    with pytest.raises(ParameterError):
        QuadratureConfig(split_b=-1)
    assert CFG.with_(split_b=2.0).split_b == 2.0
    with pytest.raises(ParameterError):
        integrate_finite(lambda t: t + 0j, 1.0, 0.0)


# ---- invariants ------------------------------------------------------------------


@settings(max_examples=15, deadline=None)
@given(st.floats(0.5, 2.0), st.floats(0.5, 2.0), st.floats(-0.8, 0.8))
def test_split_invariance(b1, b2, p):
    f = sinc_like(p)
    hint = p if p > 0 else None
    one = integrate_zero_inf(f, hint, CFG, split_b=b1).value
    two = integrate_zero_inf(f, hint, CFG, split_b=b2).value
    assert abs(one - two) <= 10 * CFG.rel_tol * abs(one)


@settings(max_examples=15, deadline=None)
@given(st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_linearity(alpha, beta):
    f = sinc_like(0.3)

    def g(t):
        return np.exp(-t) * np.cos(2 * t) + 0j

    fa = integrate_zero_inf(f, 0.3, CFG)
    ga = integrate_zero_inf(g, None, CFG)
    both = integrate_zero_inf(lambda t: alpha * f(t) + beta * g(t), 0.3, CFG)
    bound = abs(alpha) * fa.err_estimate + abs(beta) * ga.err_estimate + both.err_estimate
    assert abs(both.value - (alpha * fa.value + beta * ga.value)) <= 10 * bound + 1e-9 * (
        abs(alpha) + abs(beta)
    )


def test_conjugation_is_exact():
    def f(t):
        return np.exp(1j * t) / (1 + t) ** 1.5

    res = integrate_zero_inf(f, None, CFG)
    conj = integrate_zero_inf(lambda t: np.conj(f(t)), None, CFG)
    assert abs(conj.value - np.conj(res.value)) <= 1e-14 * abs(res.value)


@pytest.mark.parametrize("b", [1.59375, 1.6, 4.75])
@pytest.mark.parametrize("p", [0.0, 0.2])
def test_tail_start_near_a_peak(b, p):
    # panels begun near a crest of sin t give nearly vanishing panel integrals
    want = math.gamma(-p) * math.sin(-math.pi * p / 2) if p else math.pi / 2
    res = integrate_zero_inf(sinc_like(p), p or None, CFG, split_b=b)
    assert res.converged
    assert res.value.real == pytest.approx(want, rel=1e-8)
