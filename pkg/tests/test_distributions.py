import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charmoment.distributions import (
    brute_moment_oracle,
    cf_frac_deriv,
    exponential,
    finite_discrete,
    marchaud_frac_deriv,
    negated,
    normal,
    parse_distribution,
    point_mass,
    shifted,
)
from charmoment.errors import DomainError, ParameterError
from charmoment.kernel import ipow

MODELS = [
    point_mass(1.0),
    point_mass(-2.5),
    finite_discrete([-1.0, 0.5, 3.0], [0.2, 0.3, 0.5]),
    exponential(1.0),
    exponential(2.5),
    normal(0.0, 1.0),
    normal(1.0, 0.5),
    negated(exponential(1.0)),
    shifted(exponential(1.0), -0.7),
]


def test_point_mass_derivatives():
    for r in (0, 1, 2.5, -0.5):
        t = 0.3
        assert complex(cf_frac_deriv(point_mass(1.0), r, t)) == pytest.approx(ipow(r) * cmath.exp(1j * t))
    pm0 = point_mass(0.0)
    assert complex(pm0.deriv(0, 1.7)) == 1
    assert complex(pm0.deriv(2, 1.7)) == 0
    with pytest.raises(DomainError):
        cf_frac_deriv(pm0, -0.5, 0.0)


def test_exponential_closed_forms():
    e = exponential(1.0)
    for t in (-1.3, 0.0, 0.7):
        assert complex(e.cf(t)) == pytest.approx(1 / (1 - 1j * t), rel=1e-15)
    half = complex(cf_frac_deriv(e, 0.5, 0.0))
    assert half == pytest.approx(0.6266571 * (1 + 1j), rel=1e-6)
    assert half == pytest.approx(ipow(0.5) * math.gamma(1.5), rel=1e-14)


def test_normal_first_derivative():
    z = normal()
    for t in (-1.0, 0.0, 0.4, 2.0):
        want = 1j * (1j * t) * math.exp(-t * t / 2)  # i E X e^{itX} = -t e^{-t^2/2}
        assert complex(z.deriv(1, t)) == pytest.approx(want, abs=1e-15)
        assert complex(z.deriv(1, t)) == pytest.approx(-t * math.exp(-t * t / 2), abs=1e-15)


@pytest.mark.parametrize("p", [0.3, 0.5, 1.5, 2.5])
@pytest.mark.parametrize("t", [0.0, 0.7, -1.3])
def test_marchaud_matches_closed_form(p, t):
    e = exponential(1.0)
    got = marchaud_frac_deriv(e, p, t)
    want = complex(cf_frac_deriv(e, p, t))
    assert got.converged
    assert abs(got.value - want) <= 1e-5 * abs(want)


def test_marchaud_point_mass_negative_order():
    got = marchaud_frac_deriv(point_mass(1.0), -0.5, 0.0)
    assert got.value == pytest.approx(cmath.exp(-1j * math.pi / 4), rel=1e-6)


def test_marchaud_integer_order_is_closed_form():
    got = marchaud_frac_deriv(normal(), 1, 0.8)
    assert got.value == pytest.approx(-0.8 * math.exp(-0.32), rel=1e-14)


def test_differentiation_order_consistency():
    e = exponential(1.0)
    t, h = 0.4, 1e-3
    up = marchaud_frac_deriv(e, 0.5, t + h).value
    down = marchaud_frac_deriv(e, 0.5, t - h).value
    fd = (up - down) / (2 * h)
    assert marchaud_frac_deriv(e, 1.5, t).value == pytest.approx(fd, rel=1e-4)


def test_brute_oracle_examples():
    assert brute_moment_oracle(exponential(1.0), 1.5) == pytest.approx(math.gamma(2.5), rel=1e-9)
    assert brute_moment_oracle(normal(), 1.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-9)
    assert brute_moment_oracle(point_mass(-2.0), 1.3) == 0
    assert brute_moment_oracle(exponential(1.0), -0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-8)


def test_constructor_validation():
    with pytest.raises(ParameterError):
        finite_discrete([0, 1], [0.5, 0.6])
    with pytest.raises(ParameterError):
        exponential(0.0)
    with pytest.raises(ParameterError):
        normal(0.0, -1.0)


def test_parse_grammar():
    assert parse_distribution("exp(rate=2)") == exponential(2.0)
    assert parse_distribution("normal(mean=1, sd=0.5)") == normal(1.0, 0.5)
    assert parse_distribution("point(x=-3)") == point_mass(-3.0)
    d = parse_distribution("discrete(x=[-1, 2], w=[0.5, 0.5])")
    assert d == finite_discrete([-1.0, 2.0], [0.5, 0.5])
    assert parse_distribution("neg(exp(rate=1))") == negated(exponential(1.0))
    assert parse_distribution("shift(exp(rate=1), c=2)") == shifted(exponential(1.0), 2.0)
    for bad in ("frob(x=1)", "exp(rate=)", "exp(speed=1)", "discrete(x=[exp(rate=1)], w=[1])"):
        with pytest.raises(ParameterError):
            parse_distribution(bad)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.to_spec())
def test_spec_round_trip(model):
    assert parse_distribution(model.to_spec()) == model


# ---- invariants ------------------------------------------------------------------


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.to_spec())
@settings(max_examples=25, deadline=None)
@given(t=st.floats(-30, 30))
def test_order_zero_and_hermiticity(model, t):
    assert complex(cf_frac_deriv(model, 0, t)) == complex(model.cf(t))
    assert abs(complex(model.cf(-t)) - np.conj(complex(model.cf(t)))) <= 1e-14


@settings(max_examples=25, deadline=None)
@given(t=st.floats(-8, 8), ell=st.integers(0, 4))
def test_conjugation_rule_for_symmetric_normal(t, ell):
    z = normal()
    lhs = complex(z.deriv(ell, -t))
    rhs = (-1) ** ell * np.conj(complex(z.deriv(ell, t)))
    assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(rhs))
