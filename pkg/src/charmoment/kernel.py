"""Complex powers, truncated exponentials, Taylor remainders and symmetric differences.

All powers use the principal argument in ``(-pi, pi]``.  Functions accept
scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.interpolate import BSpline

from .errors import DomainError, ParameterError

EPS_INT = 1e-9

DerivEvaluator = Callable[[int, np.ndarray], np.ndarray]


def is_integer(p: float, eps: float = EPS_INT) -> bool:
    """Shared integer test used by every ``1{p in N}`` style branch."""
    return abs(p - round(p)) < eps


def is_natural(p: float) -> bool:
    return is_integer(p) and round(p) >= 1


@dataclass(frozen=True)
class OrderDecomposition:
    """``k = floor(p)``, ``ell = ceil(p - 1)`` and ``lam = p - ell`` in ``(0, 1]``."""

    p: float
    k: int
    ell: int
    lam: float
    is_integer: bool

    @classmethod
    def of(cls, p: float) -> "OrderDecomposition":
        if is_integer(p):
            n = int(round(p))
            return cls(p=p, k=n, ell=n - 1, lam=p - (n - 1), is_integer=True)
        k = math.floor(p)
        return cls(p=p, k=k, ell=k, lam=p - k, is_integer=False)


def ipow(x: float) -> complex:
    """``i**x`` on the principal branch, exact for integer ``x``."""
    if x == round(x):
        return (1, 1j, -1, -1j)[int(round(x)) % 4] + 0j
    return complex(math.cos(math.pi * x / 2), math.sin(math.pi * x / 2))


def _principal_angle(z):
    ang = np.angle(z)
    # -0.0 imaginary parts would otherwise give -pi on the negative axis
    return np.where(ang <= -math.pi, math.pi, ang)


def cpow(z, p: float):
    """``z**p = |z|**p exp(i p arg z)`` with ``arg z`` in ``(-pi, pi]``.

    ``cpow(0, p)`` is 0 for ``p >= 0`` (including the ``0**0 = 0`` moment
    convention) and a :class:`DomainError` for ``p < 0``.
    """
    z = np.asarray(z, dtype=complex)
    zero = z == 0
    if p < 0 and np.any(zero):
        raise DomainError(f"0**{p} is infinite")
    whole = p == round(p)
    if whole and p >= 0:
        out = np.power(z, int(round(p)))
    elif whole:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 1.0 / np.power(z, -int(round(p)))
    else:
        with np.errstate(divide="ignore"):
            out = np.abs(z) ** p * np.exp(1j * p * _principal_angle(z))
    out = np.where(zero, 0j, out)
    return out[()] if out.ndim == 0 else out


def conj_real_power(x, r: float):
    """Complex conjugate of ``x**r`` for real ``x``: ``exp(-i pi r)|x|**r`` when ``x < 0``."""
    x = np.asarray(x, dtype=float)
    if r < 0 and np.any(x == 0):
        raise DomainError(f"0**{r} is infinite")
    mag = np.where(x == 0, 0.0, np.abs(np.where(x == 0, 1.0, x)) ** r)
    phase = np.where(x < 0, np.conj(ipow(2 * r)), 1.0 + 0j)
    out = mag * phase
    return out[()] if out.ndim == 0 else out


def e_m(z, m: int):
    """``exp(z) - sum_{j<=m} z**j / j!``.

    Uses the tail series when ``|z| <= m + 1`` so the small-argument
    values keep full relative accuracy.
    """
    if m < 0:
        return np.exp(np.asarray(z, dtype=complex))
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) <= m + 1
    out = np.empty_like(z)

    zs = z[small]
    if zs.size:
        term = zs ** (m + 1) / math.factorial(m + 1)
        acc = term.copy()
        j = m + 1
        while True:
            j += 1
            term = term * zs / j
            acc += term
            if np.all(np.abs(term) <= 1e-17 * np.abs(acc)) or j > m + 400:
                break
        out[small] = acc

    zl = z[~small]
    if zl.size:
        poly = np.zeros_like(zl)
        term = np.ones_like(zl)
        for j in range(m + 1):
            if j:
                term = term * zl / j
            poly += term
        out[~small] = np.exp(zl) - poly
    return out[()] if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _remainder_rule(m: int, nodes: int = 20):
    x, w = np.polynomial.legendre.leggauss(nodes)
    a = 0.5 * (x + 1.0)
    w = 0.5 * w * (1.0 - a) ** m / math.factorial(m)
    return a, w


def _signed_pow(delta, j: int, s: float):
    """``delta**j / |delta|**s`` without forming the large powers separately."""
    sign = np.sign(delta) ** j
    return sign * np.abs(delta) ** (j - s)


def taylor_remainder(
    dpsi: DerivEvaluator,
    m: int,
    u: float,
    delta,
    method: str = "direct",
    scale: float = 0.0,
):
    """``(R_m psi)(u; delta) / |delta|**scale``.

    ``dpsi(j, x)`` must return ``psi^{(j)}(x)`` for array ``x``.
    ``method="direct"`` subtracts the Taylor polynomial; ``"integral"`` uses
    ``delta**(m+1)/m! * int_0^1 (1-a)**m psi^{(m+1)}(u + a delta) da`` and
    needs one more derivative, but is free of cancellation for small ``delta``.
    For ``m < 0`` the remainder is ``psi(u + delta)`` itself.
    """
    delta = np.asarray(delta, dtype=float)
    if method not in ("direct", "integral"):
        raise ParameterError(f"unknown remainder method {method!r}")
    if m < 0:
        return dpsi(0, u + delta) * np.abs(delta) ** (-scale)
    if method == "integral":
        a, w = _remainder_rule(m)
        pts = u + np.multiply.outer(delta, a)
        vals = dpsi(m + 1, pts.ravel()).reshape(pts.shape)
        return (vals @ w) * _signed_pow(delta, m + 1, scale)
    out = dpsi(0, u + delta) * np.abs(delta) ** (-scale)
    u_arr = np.array([u], dtype=float)
    for j in range(m + 1):
        cj = dpsi(j, u_arr)[0]
        if cj != 0:
            out = out - cj * _signed_pow(delta, j, scale) / math.factorial(j)
    return out


def sym_diff(psi: Callable, n: int, v, z):
    """``(Delta_v^n psi)(z) = sum_j (-1)**j C(n, j) psi(z + (n - 2j) v)``."""
    if n < 1:
        raise ParameterError("symmetric difference order must be >= 1")
    v = np.asarray(v)
    total = 0j
    for j in range(n + 1):
        coef = (-1) ** j * math.comb(n, j)
        total = total + coef * psi(z + (n - 2 * j) * v)
    return total


@lru_cache(maxsize=None)
def _bspline_rule(n: int, per_piece: int = 12):
    """Quadrature nodes on ``[0, n]`` carrying the cardinal B-spline of order ``n``."""
    basis = BSpline.basis_element(np.arange(n + 1, dtype=float), extrapolate=False)
    x, w = np.polynomial.legendre.leggauss(per_piece)
    nodes, weights = [], []
    for i in range(n):
        s = i + 0.5 * (x + 1.0)
        nodes.append(s)
        weights.append(0.5 * w * np.nan_to_num(basis(s)))
    return np.concatenate(nodes), np.concatenate(weights)


def sym_diff_peano(dpsi: DerivEvaluator, n: int, v, z: float, scale: float = 0.0):
    """``(Delta_v^n psi)(z) / |v|**scale`` through the B-spline Peano kernel.

    ``Delta_v^n psi(z) = (2v)**n int_0^n B_n(s) psi^{(n)}(z - n v + 2 v s) ds``;
    needs ``psi^{(n)}`` but has no cancellation as ``v -> 0``.
    """
    v = np.asarray(v, dtype=float)
    s, w = _bspline_rule(n)
    pts = z - n * v[..., None] + 2.0 * v[..., None] * s
    vals = dpsi(n, pts.ravel()).reshape(pts.shape)
    return (vals @ w) * 2.0**n * _signed_pow(v, n, scale)


def gamma(x: float) -> float:
    """Real gamma function; poles raise :class:`DomainError`."""
    if x <= 0 and x == round(x):
        raise DomainError(f"gamma has a pole at {x}")
    try:
        return math.gamma(x)
    except (ValueError, OverflowError) as exc:
        raise DomainError(f"gamma({x}) undefined: {exc}") from exc


def binomial(n: int, j: int) -> float:
    if not 0 <= j <= n:
        raise DomainError(f"binomial({n}, {j}) outside 0 <= j <= n")
    return float(math.comb(n, j))


@dataclass(frozen=True)
class GSpec:
    """``g(t) = sum_j a_j conj(t**q_j) exp(i v_j t)`` as a tuple of ``(a_j, q_j, v_j)``.

    ``gn_order`` marks ``g`` as the symmetric-difference kernel
    ``(2i)**n sin(t)**n`` so closed-form constants can be used.
    """

    terms: tuple
    gn_order: int | None = None

    def __post_init__(self):
        if not self.terms:
            raise ParameterError("g needs at least one term")
        clean = []
        for a, q, v in self.terms:
            a, q, v = complex(a), float(q), float(v)
            if a == 0:
                raise ParameterError("coefficients a_j must be nonzero")
            if q < 0:
                raise ParameterError("exponents q_j must be >= 0")
            clean.append((a, q, v))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def gn(cls, n: int) -> "GSpec":
        """``(2i)**n sin(t)**n = sum_j (-1)**j C(n, j) exp(i (n - 2j) t)``."""
        if n < 1:
            raise ParameterError("n must be >= 1")
        return cls(tuple(((-1) ** j * math.comb(n, j), 0.0, n - 2 * j) for j in range(n + 1)), n)

    @classmethod
    def sine(cls) -> "GSpec":
        return cls(((1 / 2j, 0.0, 1.0), (-1 / 2j, 0.0, -1.0)))

    def check_order(self, p: float) -> None:
        for _, q, v in self.terms:
            if (v != 0 and not p > q - 1) or (v == 0 and not p > q):
                raise ParameterError(f"order p={p} violates the condition for term q={q}, v={v}")

    def __call__(self, t):
        """Evaluate ``g`` at real ``t``; negative ``t`` uses ``conj(t**q) = e^{-i pi q}|t|**q``."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for a, q, v in self.terms:
            out = out + a * conj_real_power(t, q) * np.exp(1j * v * t)
        return out[()] if out.ndim == 0 else out

    def vanishing_order(self, max_terms: int = 40, rel: float = 1e-10) -> float:
        """Smallest power of ``t`` with a nonzero coefficient in the expansion at ``0+``."""
        coefs: dict[float, complex] = {}
        scale = max(abs(a) for a, _, _ in self.terms)
        for a, q, v in self.terms:
            term = a
            for k in range(max_terms):
                key = round(q + k, 9)
                coefs[key] = coefs.get(key, 0j) + term
                term = term * 1j * v / (k + 1)
        for key in sorted(coefs):
            if abs(coefs[key]) > rel * scale:
                return key
        return float(max_terms)

    def lattice_base(self) -> float:
        """Largest ``w`` with every ``v_j`` an integer multiple of ``w`` (0 if all ``v_j`` vanish)."""
        fr = [Fraction(abs(v)).limit_denominator(1000) for _, _, v in self.terms if v != 0]
        if not fr:
            return 0.0
        num = 0
        den = 1
        for f in fr:
            den = den * f.denominator // math.gcd(den, f.denominator)
        for f in fr:
            num = math.gcd(num, f.numerator * (den // f.denominator))
        return num / den
