import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from charmoment.errors import DomainError, ParameterError
from charmoment.kernel import (
    GSpec,
    OrderDecomposition,
    binomial,
    conj_real_power,
    cpow,
    e_m,
    gamma,
    ipow,
    is_integer,
    sym_diff,
    sym_diff_peano,
    taylor_remainder,
)


def exp_derivs(j, x):
    return np.exp(np.asarray(x, dtype=complex))


@pytest.mark.parametrize(
    "p, k, ell, lam",
    [(0.5, 0, 0, 0.5), (1.0, 1, 0, 1.0), (2.5, 2, 2, 0.5), (3.0, 3, 2, 1.0), (-0.3, -1, -1, 0.7)],
)
def test_order_decomposition(p, k, ell, lam):
    od = OrderDecomposition.of(p)
    assert (od.k, od.ell) == (k, ell)
    assert od.lam == pytest.approx(lam)
    assert 0 < od.lam <= 1


def test_integer_tolerance_is_shared():
    assert is_integer(2 + 5e-10)
    assert not is_integer(2 + 5e-9)
    assert OrderDecomposition.of(2 + 5e-10).is_integer


def test_cpow_examples():
    assert cpow(1j, 2) == pytest.approx(-1)
    assert cpow(-1, 0.5) == pytest.approx(1j, abs=1e-15)
    assert cpow(2j, 0.5) == pytest.approx(1 + 1j, rel=1e-14)
    assert cpow(0, 0) == 0
    assert cpow(0, 1.5) == 0
    with pytest.raises(DomainError):
        cpow(0, -0.5)


def test_cpow_negative_zero_imag_uses_principal_branch():
    assert cpow(complex(-1.0, -0.0), 0.5) == pytest.approx(1j, abs=1e-15)


def test_ipow_exact_for_integers():
    assert [ipow(k) for k in range(-2, 5)] == [-1, -1j, 1, 1j, -1, -1j, 1]
    assert ipow(0.5) == pytest.approx(cmath.exp(1j * math.pi / 4))


def test_conj_real_power_examples():
    assert conj_real_power(2.0, 1.5) == pytest.approx(2**1.5)
    assert conj_real_power(-1.0, 0.5) == pytest.approx(-1j, abs=1e-15)
    assert conj_real_power(0.0, 0.0) == 0


def test_e_m_examples():
    assert e_m(0, 0) == 0
    assert e_m(1j, 1) == pytest.approx(cmath.exp(1j) - 1 - 1j, rel=1e-14)
    assert abs(e_m(0.001j, 2)) <= 0.001**3 / 6 * math.exp(0.001)


def test_taylor_remainder_examples():
    assert taylor_remainder(exp_derivs, 1, 0.0, 1.0) == pytest.approx(math.e - 2, rel=1e-14)

    def cubic(j, x):
        x = np.asarray(x, dtype=float)
        return [x**3 - x, 3 * x**2 - 1, 6 * x, 6 + 0 * x, 0 * x][j] + 0j

    for method in ("direct", "integral"):
        assert abs(taylor_remainder(cubic, 3, 0.4, 1.7, method)) < 1e-13


def test_taylor_remainder_negative_order_is_the_function():
    assert taylor_remainder(exp_derivs, -1, 0.0, 0.5) == pytest.approx(math.exp(0.5))


def test_gamma_and_binomial():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma(5) == 24
    assert binomial(4, 2) == 6
    with pytest.raises(DomainError):
        gamma(-2.0)
    with pytest.raises(DomainError):
        binomial(2, 3)


def test_sym_diff_examples():
    t = 0.8
    assert sym_diff(np.exp, 1, 1j * t, 0.0) == pytest.approx(cmath.exp(1j * t) - cmath.exp(-1j * t))

    def quad(z):
        return 3 * z**2 - z + 2

    assert abs(sym_diff(quad, 3, 0.7, 1.1)) < 1e-12
    with pytest.raises(ParameterError):
        sym_diff(np.exp, 0, 1.0, 0.0)


def test_sym_diff_peano_matches_direct():
    v = np.array([0.3, 1.0, 2.5])
    direct = np.array([sym_diff(np.exp, 4, x, 0.2) for x in v])
    np.testing.assert_allclose(sym_diff_peano(exp_derivs, 4, v, 0.2), direct, rtol=1e-12)


def test_gspec_helpers():
    g2 = GSpec.gn(2)
    t = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(g2(t), (2j) ** 2 * np.sin(t) ** 2, atol=1e-14)
    assert g2.vanishing_order() == 2
    assert GSpec.sine().vanishing_order() == 1
    assert GSpec(((1, 0, 1.5), (2, 0, 2.5))).lattice_base() == pytest.approx(0.5)
    with pytest.raises(ParameterError):
        GSpec(((0, 0, 1),))
    with pytest.raises(ParameterError):
        GSpec.gn(1).check_order(-1.5)


# ---- invariants ------------------------------------------------------------------

angles = st.floats(-3.0, 3.0)
radii = st.floats(0.01, 50.0)
exps = st.floats(-10, 10)


@given(radii, angles, exps, exps)
def test_cpow_adds_exponents(rad, ang, p, q):
    z = rad * cmath.exp(1j * ang)
    lhs = cpow(z, p) * cpow(z, q)
    rhs = cpow(z, p + q)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


@given(st.floats(-20, 20).filter(lambda x: abs(x) > 1e-3), st.floats(-5, 5))
def test_conj_real_power_is_conjugate(x, r):
    assert conj_real_power(x, r) == pytest.approx(np.conj(cpow(x, r)), rel=1e-13, abs=1e-300)


@given(st.floats(0, 20), angles, st.integers(0, 12))
def test_e_m_completes_the_exponential(rad, ang, m):
    z = rad * cmath.exp(1j * ang)
    poly = sum(z**j / math.factorial(j) for j in range(m + 1))
    # relative to e^{|z|}, the natural size of the terms being summed
    assert abs(e_m(z, m) + poly - cmath.exp(z)) <= 1e-13 * math.exp(abs(z))


@given(st.integers(1, 7), st.floats(-20, 20))
def test_sym_diff_of_exp_is_gn(n, t):
    got = sym_diff(np.exp, n, 1j * t, 0.0)
    want = (2j) ** n * math.sin(t) ** n
    assert abs(got - want) <= 1e-12 * max(abs(want), 1.0) * 2**n


@given(st.integers(0, 8), st.floats(-3, 3).filter(lambda d: abs(d) > 1e-6))
def test_taylor_remainder_of_exp_is_e_m(m, delta):
    want = e_m(delta, m)
    for method in ("direct", "integral"):
        got = taylor_remainder(exp_derivs, m, 0.0, delta, method)
        assert abs(got - want) <= 1e-13 * math.exp(abs(delta)) + 1e-13 * abs(want) * 10
