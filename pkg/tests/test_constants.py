import math

import numpy as np
import pytest

from charmoment.constants import (
    Branch,
    c_direct_quadrature,
    c_plus_gn,
    in_window,
    kappa,
    sigma_rho,
)
from charmoment.errors import DomainError


def window_grid(n, count=40):
    lo = 0.0 if n % 2 == 0 else -1.0
    ps = np.linspace(lo, n, count + 2)[1:-1]
    return [float(p) for p in ps]


def singular_points(n):
    lo = 0.0 if n % 2 == 0 else -1.0
    return [float(n - 2 * k) for k in range(n + 1) if lo < n - 2 * k < n]


GRID = [(n, p) for n in range(1, 7) for p in window_grid(n)]


def test_kappa_examples():
    assert kappa(0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-14)
    assert kappa(1.5) == pytest.approx(4 * math.sqrt(math.pi) / 3, rel=1e-14)
    for p in (0.1, 0.5, 2.3):
        reflected = -math.pi / (math.gamma(p + 1) * math.sin(math.pi * p))
        assert kappa(p) == pytest.approx(reflected, rel=1e-12)
    with pytest.raises(DomainError):
        kappa(2.0)


def test_closed_form_examples():
    assert c_plus_gn(1, 0.0).c_plus == pytest.approx(1j * math.pi, rel=1e-14)
    assert c_plus_gn(3, 0.0).c_plus == pytest.approx(-2j * math.pi, rel=1e-14)
    assert c_plus_gn(1, 0.5).c_plus == pytest.approx(2j * math.sqrt(2 * math.pi), rel=1e-14)
    assert abs(c_plus_gn(1, 0.5).c_plus - 5.0132565j) < 1e-7


def test_inner_integrals():
    assert (c_direct_quadrature(1, 0.0) / 2j).real == pytest.approx(math.pi / 2, abs=1e-9)
    assert (c_direct_quadrature(3, 0.0) / (2j) ** 3).real == pytest.approx(math.pi / 4, abs=1e-9)
    assert c_direct_quadrature(2, 1.0) == pytest.approx(c_plus_gn(2, 1.0).c_plus, rel=1e-8)


def test_window():
    assert in_window(1, -0.5) and not in_window(2, 0.0) and not in_window(3, 3.0)
    with pytest.raises(DomainError):
        c_plus_gn(2, 0.0)
    with pytest.raises(DomainError):
        c_plus_gn(0, 0.5)


@pytest.mark.parametrize("m", range(6))
def test_sigma_at_zero_order(m):
    assert sigma_rho(2 * m + 1, 0.0).sigma == pytest.approx((-1) ** m * math.comb(2 * m, m))


def test_closed_form_matches_quadrature_on_grid():
    worst = 0.0
    for n, p in GRID:
        if any(abs(p - s) < 1e-3 for s in singular_points(n)):
            continue
        closed = c_plus_gn(n, p).c_plus
        quad = c_direct_quadrature(n, p)
        worst = max(worst, abs(closed - quad) / abs(quad))
    assert worst < 1e-6


@pytest.mark.parametrize("n, p", [(1, -0.4), (2, 0.7), (3, 1.9), (4, 3.1), (5, 0.2), (6, 5.5)])
def test_parity_against_quadrature(n, p):
    gc = c_plus_gn(n, p)
    assert gc.c_minus == (-1) ** n * gc.c_plus
    assert c_direct_quadrature(n, p, sign=-1) == pytest.approx(gc.c_minus, rel=1e-7)


def test_positivity_on_grid():
    for n, p in GRID:
        c = c_plus_gn(n, p).c_plus
        scaled = c / (2j) ** n
        assert scaled.real > 0, (n, p)
        assert abs(scaled.imag) < 1e-10 * abs(c), (n, p)


@pytest.mark.parametrize("n, p0", [(n, s) for n in range(1, 7) for s in singular_points(n)])
def test_continuity_at_removable_points(n, p0):
    at = c_plus_gn(n, p0)
    assert at.branch is Branch.LHOSPITAL
    for d in (-1e-4, 1e-4):
        assert c_plus_gn(n, p0 + d).c_plus == pytest.approx(at.c_plus, rel=1e-3)


def test_blend_branch_near_removable_point():
    gc = c_plus_gn(3, 1.0 + 5e-8)
    assert gc.branch is Branch.NEAR_INTEGER_BLEND
    assert gc.c_plus == pytest.approx(c_plus_gn(3, 1.0).c_plus, rel=1e-6)
