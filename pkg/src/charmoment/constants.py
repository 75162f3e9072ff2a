"""Homogeneity constants of the kernels ``g_n(t) = (2i)**n sin(t)**n`` and of general ``g``.

``c_plus(g) = int_0^{inf-} g(t) / t**(p+1) dt`` and ``c_minus(g)`` the same
with ``g(-t)``.  For ``g_n`` they have closed forms; a removable singularity
occurs where ``n - p`` is an even integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError
from .kernel import GSpec, gamma, is_integer
from .quadrature import (
    IntegralResult,
    QuadratureConfig,
    integrate_finite,
    integrate_tail_limit,
    integrate_zero_inf,
)

EPS_BLEND = 1e-7
DELTA_BLEND = 1e-4


class Branch(str, Enum):
    GENERIC = "generic"
    LHOSPITAL = "lhospital"
    NEAR_INTEGER_BLEND = "near_integer_blend"


@dataclass(frozen=True)
class GnConstant:
    n: int
    p: float
    c_plus: complex
    c_minus: complex
    branch: Branch


@dataclass(frozen=True)
class SigmaRho:
    sigma: float
    sigma_prime: float
    rho: complex
    gamma_n: complex


def kappa(p: float) -> float:
    """``Gamma(-p)`` for non-integer ``p``, checked against the reflection form."""
    if is_integer(p, 1e-12):
        raise DomainError(f"kappa is undefined at integer p={p}")
    direct = gamma(-p)
    reflected = -math.pi / (gamma(p + 1) * math.sin(math.pi * p))
    if not math.isclose(direct, reflected, rel_tol=1e-9):
        raise ArithmeticError(f"gamma reflection mismatch at p={p}: {direct} vs {reflected}")
    return direct


def in_window(n: int, p: float) -> bool:
    lo = 0.0 if n % 2 == 0 else -1.0
    return lo < p < n


def _check_window(n: int, p: float) -> None:
    if n < 1:
        raise DomainError("n must be >= 1")
    if not in_window(n, p):
        raise DomainError(f"p={p} outside the admissible window for n={n}")


def sigma_rho(n: int, p: float) -> SigmaRho:
    terms = [(-1) ** j * math.comb(n, j) * float(n - 2 * j) ** p for j in range((n + 1) // 2)]
    primes = [
        (-1) ** j * math.comb(n, j) * float(n - 2 * j) ** p * math.log(n - 2 * j)
        for j in range((n + 1) // 2)
    ]
    if n % 2 == 0:
        rho = complex(math.sin(math.pi * p / 2))
        gamma_n = 1 + 0j
    else:
        rho = 1j * math.cos(math.pi * p / 2)
        gamma_n = -1j
    return SigmaRho(math.fsum(terms), math.fsum(primes), rho, gamma_n)


def _generic(n: int, p: float) -> complex:
    sr = sigma_rho(n, p)
    return -(math.pi / gamma(p + 1)) * sr.sigma / sr.rho


def _lhospital(n: int, p: float) -> complex:
    k = int(round(p))
    sr = sigma_rho(n, k)
    sign = (-1) ** (1 + k // 2)
    return sign * (2.0 / math.factorial(k)) * sr.sigma_prime / sr.gamma_n


def _singular_distance(n: int, p: float) -> float:
    """Distance from ``p`` to the nearest ``p0`` with ``n - p0`` an even integer."""
    k = round((n - p) / 2)
    return abs(n - 2 * k - p)


def c_plus_gn(n: int, p: float) -> GnConstant:
    _check_window(n, p)
    d = _singular_distance(n, p)
    if d <= 1e-13 * max(1.0, abs(p)):
        c, branch = _lhospital(n, p), Branch.LHOSPITAL
    elif d < EPS_BLEND:
        p0 = n - 2 * round((n - p) / 2)
        c = 0.5 * (_generic(n, p0 - DELTA_BLEND) + _generic(n, p0 + DELTA_BLEND))
        branch = Branch.NEAR_INTEGER_BLEND
    else:
        c, branch = _generic(n, p), Branch.GENERIC
    return GnConstant(n, p, c, (-1) ** n * c, branch)


def c_direct_quadrature(
    n: int, p: float, cfg: Optional[QuadratureConfig] = None, sign: int = 1
) -> complex:
    """``int_0^{inf-} g_n(sign * t) / t**(p+1) dt`` by oscillatory quadrature."""
    _check_window(n, p)
    cfg = cfg or QuadratureConfig()
    alpha = p + 1 - n
    b = cfg.split_b
    # mean value of sin^n, integrated analytically over the tail
    mean = math.comb(n, n // 2) / 2.0**n if n % 2 == 0 else 0.0

    def head(t):
        return np.sinc(t / math.pi) ** n * t ** (n - p - 1) + 0j

    def tail(t):
        return (np.sin(t) ** n - mean) / t ** (p + 1) + 0j

    res = integrate_finite(head, 0.0, b, alpha if alpha > 0 else 0.0, cfg)
    res = res + integrate_tail_limit(tail, b, cfg, 2 * math.pi)
    if mean:
        res = IntegralResult(res.value + mean * b ** (-p) / p, res.err_estimate,
                             res.converged, res.evaluations, res.tail_terms_used)
    if not res.converged:
        raise ConvergenceError(f"quadrature of sin^{n} t / t^{p + 1} did not converge", res)
    return (2j * sign) ** n * res.value


def g_constants(
    g: GSpec, p: float, cfg: Optional[QuadratureConfig] = None
) -> tuple[complex, complex]:
    """``(c_plus(g), c_minus(g))``, closed form for ``g_n`` and quadrature otherwise."""
    if g.gn_order is not None:
        gc = c_plus_gn(g.gn_order, p)
        return gc.c_plus, gc.c_minus
    cfg = cfg or QuadratureConfig()
    g.check_order(p)
    alpha = p + 1 - g.vanishing_order()
    if alpha >= 1:
        raise ParameterError(f"g vanishes too slowly at 0 for p={p}")
    base = g.lattice_base()
    period = 2 * math.pi / base if base > 0 else math.inf
    hint = alpha if alpha > 0 else None
    out = []
    for s in (1.0, -1.0):
        res = integrate_zero_inf(lambda t, s=s: g(s * t) / t ** (p + 1), hint, cfg, period)
        if not res.converged:
            raise ConvergenceError("quadrature of g(t)/t^(p+1) did not converge", res)
        out.append(res.value)
    return out[0], out[1]
