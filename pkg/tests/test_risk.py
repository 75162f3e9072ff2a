import math

import pytest

from charmoment.distributions import exponential, finite_discrete, normal, point_mass, shifted
from charmoment.errors import ParameterError
from charmoment.moments import cdf_halfequal
from charmoment.risk import p_alpha, q_alpha

E1 = exponential(1.0)
MODELS = [normal(), finite_discrete([-1.0, 2.0], [0.5, 0.5]), exponential(2.0)]


def upper_tail(model, x):
    """``P(X > x) + P(X = x)/2``."""
    return 1.0 - cdf_halfequal(model, x).prob


@pytest.mark.parametrize("c, alpha, q", [(-1.5, 1.0, 0.1), (0.0, 1.3, 0.05), (2.5, 2.0, 0.3)])
def test_q_alpha_point_mass_is_exact(c, alpha, q):
    assert q_alpha(point_mass(c), alpha, q).value == c


def test_q_alpha_exponential_calculus_oracle():
    res = q_alpha(E1, 1.0, 0.1)
    assert abs(res.value - (math.log(10) + 1)) < 1e-4
    assert res.t_star == pytest.approx(math.log(10), abs=1e-3)
    assert not res.at_bracket_edge


def test_q_alpha_decreases_in_q():
    values = [q_alpha(E1, 2.0, q).value for q in (0.05, 0.1, 0.2)]
    assert values[0] > values[1] > values[2]


def test_p_alpha_point_mass_limits():
    assert p_alpha(point_mass(1.0), 1.0, 2.0).value == pytest.approx(0.0, abs=1e-12)
    res = p_alpha(point_mass(1.0), 1.0, 0.5)
    assert res.value == 1.0
    assert res.at_bracket_edge and "limit_t_to_minus_inf" in res.flags


def test_p_alpha_exponential_calculus_oracle():
    res = p_alpha(E1, 1.0, 3.0)
    assert res.value == pytest.approx(math.exp(-2), rel=1e-6)
    assert res.value >= math.exp(-3)


def test_non_convex_orders_are_flagged():
    assert "possibly_nonconvex" in q_alpha(normal(), 0.5, 0.1).flags


def test_argument_validation():
    with pytest.raises(ParameterError):
        q_alpha(E1, 1.0, 1.5)
    with pytest.raises(ParameterError):
        q_alpha(E1, -1.0, 0.1)
    with pytest.raises(ParameterError):
        q_alpha(E1, 1.0, 0.1, search_bracket=(2.0, 1.0))


# ---- invariants ------------------------------------------------------------------


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.to_spec())
def test_tail_bound_dominates_true_tail(model):
    for x in (-0.5, 1.0, 2.5):
        bound = p_alpha(model, 2.0, x, grid_points=32).value
        assert -1e-9 <= bound <= 1.0 + 1e-9
        assert bound >= upper_tail(model, x) - 1e-6


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.to_spec())
def test_quantile_bound_is_an_upper_quantile(model):
    for q in (0.05, 0.3):
        bound = q_alpha(model, 1.0, q, grid_points=32).value
        assert upper_tail(model, bound) <= q + 1e-6


def test_translation_equivariance():
    base = q_alpha(E1, 1.5, 0.1).value
    moved = q_alpha(shifted(E1, 2.0), 1.5, 0.1).value
    assert moved == pytest.approx(base + 2.0, abs=1e-6)
