"""Characteristic-function models and their (fractional) derivatives.

Every model exposes ``deriv(r, t) = i**r E[conj(X**r) exp(itX)]`` for the
orders it supports.  Mixtures are split into *simple* components (a point
mass or one continuous law), because each simple component has a single
oscillation frequency in ``t`` which the oscillatory quadrature can exploit.
"""

from __future__ import annotations

import ast
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate as sp_integrate

from .errors import CapabilityError, ConvergenceError, DomainError, ParameterError
from .kernel import (
    conj_real_power,
    cpow,
    gamma,
    ipow,
    is_integer,
    taylor_remainder,
)
from .quadrature import (
    IntegralResult,
    QuadratureConfig,
    integrate_finite,
    integrate_tail_limit,
)

DELTA_LIM = 1e-6


def _as_array(t):
    return np.asarray(t, dtype=float)


def _finish(out, t):
    out = np.asarray(out, dtype=complex)
    if np.ndim(t) == 0:
        return complex(out.reshape(-1)[0]) if out.size else 0j
    return np.broadcast_to(out, np.shape(t)).copy()


def _fmt(v: float) -> str:
    return repr(float(v))


class DistributionModel(ABC):
    """A random variable described by its characteristic function."""

    kind: str = "abstract"

    # ---- derivative interface -------------------------------------------------
    @abstractmethod
    def has_closed_form(self, r: float) -> bool:
        """Whether ``deriv(r, .)`` is available without numerical integration."""

    def supports(self, r: float) -> bool:
        """Whether ``deriv(r, .)`` is available at all."""
        return self.has_closed_form(r)

    @abstractmethod
    def _closed(self, r: float, t: np.ndarray) -> np.ndarray:
        ...

    def deriv(self, r: float, t, cfg: Optional[QuadratureConfig] = None):
        if is_integer(r):
            r = float(round(r))
        if self.has_closed_form(r):
            return _finish(self._closed(r, _as_array(t)), t)
        if not self.supports(r):
            raise CapabilityError(f"{self.to_spec()} has no derivative of order {r}")
        ts = np.atleast_1d(_as_array(t))
        vals = [marchaud_frac_deriv(self, r, float(x), cfg).value for x in ts.ravel()]
        return _finish(np.array(vals).reshape(ts.shape), t)

    def cf(self, t):
        return self.deriv(0.0, t)

    def demodulated(self, r: float, k: int, t, x0: float) -> np.ndarray:
        """``d^k/dt^k [exp(-i x0 t) f^{(r)}(t)]`` for integer ``k >= 0``."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for j in range(k + 1):
            out = out + math.comb(k, j) * (-1j * x0) ** (k - j) * np.asarray(self.deriv(r + j, t), dtype=complex)
        return out * np.exp(-1j * x0 * t)

    # ---- moments and structure ------------------------------------------------
    @abstractmethod
    def moment_finite(self, s: float) -> bool:
        """Whether ``E|X|**s`` is finite."""

    @property
    def moment_order_bound(self) -> float:
        return math.inf

    @abstractmethod
    def components(self) -> list[tuple[float, "DistributionModel"]]:
        """Simple components ``(weight, model)`` whose mixture is this model."""

    @property
    def center(self) -> float:
        """Oscillation frequency carrier of a simple model's c.f."""
        raise TypeError(f"{self.kind} is not a simple model")

    @property
    def t_scale(self) -> float:
        """Length in ``t`` over which the c.f. changes appreciably."""
        raise TypeError(f"{self.kind} is not a simple model")

    @abstractmethod
    def mean(self) -> float:
        ...

    @abstractmethod
    def variance(self) -> float:
        ...

    # ---- oracle support -------------------------------------------------------
    @abstractmethod
    def atoms(self) -> list[tuple[float, float]]:
        """Point masses ``(x, weight)``."""

    def density(self):
        """``(weight, pdf, lo, hi)`` for the absolutely continuous part, or ``None``."""
        return None

    @abstractmethod
    def to_spec(self) -> str:
        ...

    def __repr__(self):
        return self.to_spec()

    def __eq__(self, other):
        return isinstance(other, DistributionModel) and self.to_spec() == other.to_spec()

    def __hash__(self):
        return hash(self.to_spec())


class PointMass(DistributionModel):
    kind = "point_mass"

    def __init__(self, x: float):
        self.x = float(x)
        if not math.isfinite(self.x):
            raise ParameterError("point mass location must be finite")

    def has_closed_form(self, r):
        return self.x != 0 or r >= 0

    def _closed(self, r, t):
        if self.x == 0:
            if r < 0:
                raise DomainError("negative-order derivative at a point mass at 0")
            return np.ones_like(t, dtype=complex) if r == 0 else np.zeros_like(t, dtype=complex)
        return ipow(r) * conj_real_power(self.x, r) * np.exp(1j * t * self.x)

    def demodulated(self, r, k, t, x0):
        if self.x == 0:
            return super().demodulated(r, k, t, x0)
        # one phase with the exact offset, so nearly cancelling carriers stay accurate
        w = self.x - x0
        t = np.asarray(t, dtype=float)
        return ipow(r) * conj_real_power(self.x, r) * (1j * w) ** k * np.exp(1j * w * t)

    def moment_finite(self, s):
        return self.x != 0 or s >= 0

    def components(self):
        return [(1.0, self)]

    @property
    def center(self):
        return self.x

    @property
    def t_scale(self):
        return math.inf if self.x == 0 else 1.0 / abs(self.x)

    def mean(self):
        return self.x

    def variance(self):
        return 0.0

    def atoms(self):
        return [(self.x, 1.0)]

    def to_spec(self):
        return f"point(x={_fmt(self.x)})"


class Discrete(DistributionModel):
    kind = "finite_discrete"

    def __init__(self, xs: Sequence[float], ws: Sequence[float]):
        xs = [float(x) for x in xs]
        ws = [float(w) for w in ws]
        if not xs or len(xs) != len(ws):
            raise ParameterError("discrete needs matching non-empty x and w lists")
        if any(w < 0 for w in ws) or abs(math.fsum(ws) - 1.0) > 1e-9:
            raise ParameterError("discrete weights must be >= 0 and sum to 1")
        self.xs = tuple(xs)
        self.ws = tuple(ws)

    def _points(self):
        return [PointMass(x) for x in self.xs]

    def has_closed_form(self, r):
        return all(p.has_closed_form(r) for p, w in zip(self._points(), self.ws) if w > 0)

    def _closed(self, r, t):
        out = np.zeros_like(t, dtype=complex)
        for p, w in zip(self._points(), self.ws):
            if w > 0:
                out = out + w * p._closed(r, t)
        return out

    def moment_finite(self, s):
        return all(w == 0 or x != 0 or s >= 0 for x, w in zip(self.xs, self.ws))

    def components(self):
        return [(w, p) for p, w in zip(self._points(), self.ws) if w > 0]

    def mean(self):
        return math.fsum(w * x for x, w in zip(self.xs, self.ws))

    def variance(self):
        m = self.mean()
        return math.fsum(w * (x - m) ** 2 for x, w in zip(self.xs, self.ws))

    def atoms(self):
        return list(zip(self.xs, self.ws))

    def to_spec(self):
        xs = ", ".join(_fmt(x) for x in self.xs)
        ws = ", ".join(_fmt(w) for w in self.ws)
        return f"discrete(x=[{xs}], w=[{ws}])"


class Exponential(DistributionModel):
    kind = "exponential"

    def __init__(self, rate: float):
        self.rate = float(rate)
        if not self.rate > 0 or not math.isfinite(self.rate):
            raise ParameterError("exponential rate must be positive")

    def has_closed_form(self, r):
        return r > -1

    def _closed(self, r, t):
        lam = self.rate
        return ipow(r) * lam * gamma(r + 1) * cpow(lam - 1j * t, -(r + 1))

    def moment_finite(self, s):
        return s > -1

    def components(self):
        return [(1.0, self)]

    @property
    def center(self):
        return 0.0

    @property
    def t_scale(self):
        return self.rate

    def mean(self):
        return 1.0 / self.rate

    def variance(self):
        return 1.0 / self.rate**2

    def atoms(self):
        return []

    def density(self):
        lam = self.rate
        return (1.0, lambda x: lam * np.exp(-lam * x), 0.0, math.inf)

    def to_spec(self):
        return f"exp(rate={_fmt(self.rate)})"


class Normal(DistributionModel):
    kind = "normal"

    def __init__(self, mean: float, sd: float):
        self.mu = float(mean)
        self.sd = float(sd)
        if not self.sd > 0 or not math.isfinite(self.sd) or not math.isfinite(self.mu):
            raise ParameterError("normal needs finite mean and sd > 0")
        self._polys = [np.array([1.0 + 0j])]

    def _poly(self, j: int) -> np.ndarray:
        # f^{(j)}(t) = P_j(t) f(t),  P_{j+1} = P_j' + (i mu - sd**2 t) P_j
        lin = np.array([1j * self.mu, -self.sd**2])
        while len(self._polys) <= j:
            p = self._polys[-1]
            nxt = np.polynomial.polynomial.polymul(lin, p)
            der = np.polynomial.polynomial.polyder(p) if len(p) > 1 else np.array([0j])
            nxt[: len(der)] += der
            self._polys.append(nxt)
        return self._polys[j]

    def has_closed_form(self, r):
        return is_integer(r) and r >= 0

    def supports(self, r):
        return r > -1

    def _closed(self, r, t):
        base = np.exp(1j * self.mu * t - 0.5 * (self.sd * t) ** 2)
        return np.polynomial.polynomial.polyval(t, self._poly(int(round(r)))) * base

    def moment_finite(self, s):
        return s > -1

    def components(self):
        return [(1.0, self)]

    @property
    def center(self):
        return self.mu

    @property
    def t_scale(self):
        return 1.0 / max(self.sd, abs(self.mu))

    def mean(self):
        return self.mu

    def variance(self):
        return self.sd**2

    def atoms(self):
        return []

    def density(self):
        mu, sd = self.mu, self.sd
        c = 1.0 / (sd * math.sqrt(2 * math.pi))
        return (1.0, lambda x: c * np.exp(-0.5 * ((x - mu) / sd) ** 2), -math.inf, math.inf)

    def to_spec(self):
        return f"normal(mean={_fmt(self.mu)}, sd={_fmt(self.sd)})"


class Negated(DistributionModel):
    """``-X`` for ``X`` supported on ``[0, inf)``: ``f_{-X}^{(r)}(t) = conj(f_X^{(r)}(t))``."""

    kind = "negated"

    def __init__(self, inner: DistributionModel):
        self.inner = inner

    def has_closed_form(self, r):
        return self.inner.has_closed_form(r)

    def supports(self, r):
        return self.inner.supports(r)

    def _closed(self, r, t):
        return np.conj(self.inner._closed(r, t))

    def moment_finite(self, s):
        return self.inner.moment_finite(s)

    def components(self):
        return [(1.0, self)]

    @property
    def center(self):
        return -self.inner.center

    @property
    def t_scale(self):
        return self.inner.t_scale

    def mean(self):
        return -self.inner.mean()

    def variance(self):
        return self.inner.variance()

    def atoms(self):
        return [(-x, w) for x, w in self.inner.atoms()]

    def density(self):
        d = self.inner.density()
        if d is None:
            return None
        w, pdf, lo, hi = d
        return (w, lambda x: pdf(-x), -hi, -lo)

    def to_spec(self):
        return f"neg({self.inner.to_spec()})"


class Shifted(DistributionModel):
    """``X + c``; only integer derivative orders are available."""

    kind = "shifted"

    def __init__(self, inner: DistributionModel, c: float):
        self.inner = inner
        self.c = float(c)

    def has_closed_form(self, r):
        if not (is_integer(r) and r >= 0):
            return False
        return all(self.inner.has_closed_form(j) for j in range(int(round(r)) + 1))

    def supports(self, r):
        return self.has_closed_form(r)

    def _closed(self, r, t):
        n = int(round(r))
        c = self.c
        out = np.zeros_like(t, dtype=complex)
        for j in range(n + 1):
            out = out + math.comb(n, j) * (1j * c) ** (n - j) * self.inner._closed(j, t)
        return out * np.exp(1j * c * t)

    def demodulated(self, r, k, t, x0):
        n = int(round(r))
        c = self.c
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for j in range(n + 1):
            out = out + math.comb(n, j) * (1j * c) ** (n - j) * self.inner.demodulated(j, k, t, x0 - c)
        return out

    def moment_finite(self, s):
        return self.inner.moment_finite(s) if s >= 0 else s > -1

    def components(self):
        return [(1.0, self)]

    @property
    def center(self):
        return self.inner.center + self.c

    @property
    def t_scale(self):
        sc = self.inner.t_scale
        return min(sc, 1.0 / abs(self.c)) if self.c else sc

    def mean(self):
        return self.inner.mean() + self.c

    def variance(self):
        return self.inner.variance()

    def atoms(self):
        return [(x + self.c, w) for x, w in self.inner.atoms()]

    def density(self):
        d = self.inner.density()
        if d is None:
            return None
        w, pdf, lo, hi = d
        c = self.c
        return (w, lambda x: pdf(x - c), lo + c, hi + c)

    def to_spec(self):
        return f"shift({self.inner.to_spec()}, c={_fmt(self.c)})"


# ---- constructors ---------------------------------------------------------------


def point_mass(x: float) -> PointMass:
    return PointMass(x)


def finite_discrete(xs: Sequence[float], ws: Sequence[float]) -> Discrete:
    return Discrete(xs, ws)


def exponential(rate: float = 1.0) -> Exponential:
    return Exponential(rate)


def normal(mean: float = 0.0, sd: float = 1.0) -> Normal:
    return Normal(mean, sd)


def negated(model: DistributionModel) -> DistributionModel:
    if isinstance(model, PointMass):
        return PointMass(-model.x)
    if isinstance(model, Discrete):
        return Discrete([-x for x in model.xs], model.ws)
    if isinstance(model, Normal):
        return Normal(-model.mu, model.sd)
    if isinstance(model, Negated):
        return model.inner
    if isinstance(model, Shifted):
        return shifted(negated(model.inner), -model.c)
    return Negated(model)


def shifted(model: DistributionModel, c: float) -> DistributionModel:
    c = float(c)
    if c == 0:
        return model
    if isinstance(model, PointMass):
        return PointMass(model.x + c)
    if isinstance(model, Discrete):
        return Discrete([x + c for x in model.xs], model.ws)
    if isinstance(model, Normal):
        return Normal(model.mu + c, model.sd)
    if isinstance(model, Shifted):
        return shifted(model.inner, model.c + c)
    return Shifted(model, c)


def cf_frac_deriv(model: DistributionModel, r: float, t, cfg: Optional[QuadratureConfig] = None):
    """``f^{(r)}(t) = i**r E[conj(X**r) e^{itX}]``."""
    if not model.moment_finite(r):
        raise DomainError(f"E|X|^{r} is infinite for {model.to_spec()}")
    return model.deriv(r, t, cfg)


# ---- Marchaud fractional derivatives --------------------------------------------


@dataclass(frozen=True)
class FracDerivEval:
    order: float
    point: float
    value: complex
    source: str
    err_estimate: float = 0.0
    converged: bool = True


def _tail_period(freq: float) -> float:
    return math.inf if freq < 1e-12 else 2 * math.pi / freq


def _split_point(cfg: QuadratureConfig, t_scale: float) -> float:
    if math.isfinite(t_scale) and t_scale > 1:
        return cfg.split_b * t_scale
    return cfg.split_b


def _marchaud(
    dfun: Callable[[int, np.ndarray], np.ndarray],
    max_order: int,
    p: float,
    t: float,
    freq: float,
    t_scale: float,
    cfg: QuadratureConfig,
) -> IntegralResult:
    """Marchaud derivative of order ``p`` at ``t`` of a function with integer derivatives ``dfun``."""
    if is_integer(p) and p >= 0:
        return IntegralResult(complex(dfun(int(round(p)), np.array([t]))[0]), 0.0, True)
    if is_integer(p):
        return _marchaud(dfun, max_order, p + DELTA_LIM, t, freq, t_scale, cfg)
    if p < -1:
        c = math.ceil(p)

        def inner(j, x):
            if j != 0:
                raise CapabilityError("composed derivative only available at order 0")
            return np.array(
                [_marchaud(dfun, max_order, c, float(xi), freq, t_scale, cfg).value for xi in x]
            )

        return _marchaud(inner, 0, p - c, t, freq, t_scale, cfg)

    b = _split_point(cfg, t_scale)
    period = _tail_period(freq)
    if p < 0:
        def head(s):
            return dfun(0, t - s) * s ** (-1.0 - p)

        res = integrate_finite(head, 0.0, b, 1.0 + p, cfg)
        res = res + integrate_tail_limit(head, b, cfg, period)
        return res.scaled(1.0 / gamma(-p))

    k = math.floor(p)
    lam = p - k
    switch = 0.5 * min(1.0, t_scale)
    stable = k + 1 <= max_order

    def shifted_d(j, x):
        return dfun(k + j, x)

    def head(s):
        out = taylor_remainder(shifted_d, 0, t, -s, "direct", 1.0 + lam)
        if stable:
            small = s < switch
            if np.any(small):
                out = np.asarray(out, dtype=complex).copy()
                out[small] = taylor_remainder(shifted_d, 0, t, -s[small], "integral", 1.0 + lam)
        return out

    def tail(s):
        return dfun(k, t - s) * s ** (-1.0 - lam)

    res = integrate_finite(head, 0.0, b, lam, cfg)
    res = res + integrate_tail_limit(tail, b, cfg, period)
    const = complex(dfun(k, np.array([t]))[0]) * b ** (-lam) / lam
    res = IntegralResult(res.value - const, res.err_estimate, res.converged, res.evaluations, res.tail_terms_used)
    return res.scaled(1.0 / gamma(-lam))


def _integer_orders(model: DistributionModel) -> int:
    n = 0
    while n < 64 and model.has_closed_form(n + 1):
        n += 1
    return n


def marchaud_frac_deriv(
    model: DistributionModel, p: float, t: float, cfg: Optional[QuadratureConfig] = None
) -> FracDerivEval:
    """Numerical fractional derivative built only from integer-order derivatives.

    Positive non-integer orders use the Marchaud difference integral, orders
    in ``(-1, 0)`` the Riemann-Liouville type integral, negative integers a
    one-sided limit and orders below ``-1`` a composition.
    """
    cfg = cfg or QuadratureConfig()
    if not model.moment_finite(p):
        raise DomainError(f"E|X|^{p} is infinite for {model.to_spec()}")
    if is_integer(p) and p >= 0:
        return FracDerivEval(p, t, complex(model.deriv(round(p), t)), "closed_form")
    if p > 0 and not model.has_closed_form(math.floor(p)):
        raise CapabilityError(f"need integer derivative of order {math.floor(p)}")
    total = IntegralResult(0j, 0.0, True)
    for w, comp in model.components():
        top = _integer_orders(comp)

        def dfun(j, x, _c=comp):
            return np.asarray(_c._closed(float(j), np.asarray(x, dtype=float)), dtype=complex)

        r = _marchaud(dfun, top, p, float(t), abs(comp.center), comp.t_scale, cfg)
        total = total + r.scaled(w)
    return FracDerivEval(p, t, total.value, "marchaud_numeric", total.err_estimate, total.converged)


# ---- brute-force density oracle -------------------------------------------------


def _part_weight(x, s: float, part: str):
    """``x_+^s``, ``x_-^s``, ``|x|^s`` or ``x^[s]`` under the moment conventions."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        mag = np.where(x == 0, 0.0, np.abs(x) ** s)
    pos = np.where(x > 0, mag, 0.0)
    neg = np.where(x < 0, mag, 0.0)
    if part == "pos":
        return pos
    if part == "neg":
        return neg
    if part == "abs":
        return pos + neg
    if part == "signed":
        return pos - neg
    raise ParameterError(f"unknown part {part!r}")


def _quad_complex(fun, lo, hi, s):
    total = 0j
    err = 0.0
    pieces = []
    if lo < 0 < hi:
        pieces = [(lo, 0.0), (0.0, hi)]
    else:
        pieces = [(lo, hi)]
    for a, b in pieces:
        for part in (np.real, np.imag):
            def g(x):
                return float(part(fun(x)))

            sub = []
            # isolate the x**s singularity at 0 on a finite piece
            if a == 0.0 and s < 0:
                edge = min(1.0, b)
                val, e = sp_integrate.quad(
                    lambda x: float(part(fun(x) * x ** (-s))) if x > 0 else 0.0,
                    0.0, edge, weight="alg", wvar=(s, 0.0), limit=400, epsabs=1e-13, epsrel=1e-11,
                )
                sub.append((val, e))
                a2 = edge
            elif b == 0.0 and s < 0:
                edge = max(-1.0, a)
                val, e = sp_integrate.quad(
                    lambda x: float(part(fun(x) * (-x) ** (-s))) if x < 0 else 0.0,
                    edge, 0.0, weight="alg", wvar=(0.0, s), limit=400, epsabs=1e-13, epsrel=1e-11,
                )
                sub.append((val, e))
                b = edge
                a2 = a
            else:
                a2 = a
            if a2 < b:
                val, e = sp_integrate.quad(g, a2, b, limit=400, epsabs=1e-13, epsrel=1e-11)
                sub.append((val, e))
            v = sum(x for x, _ in sub)
            total += v if part is np.real else 1j * v
            err += sum(e for _, e in sub)
    return total, err


def brute_moment_oracle(model: DistributionModel, s: float, u: float = 0.0, part: str = "pos") -> complex:
    """``E[w(X) e^{iuX}]`` with ``w`` the requested part of ``X**s``, by direct pmf/density integration."""
    if part == "abs" and s < 0 and any(x == 0 and w > 0 for x, w in model.atoms()):
        return complex(math.inf)
    total = 0j
    for x, w in model.atoms():
        if w > 0:
            total += w * complex(_part_weight(x, s, part)) * complex(math.cos(u * x), math.sin(u * x))
    d = model.density()
    if d is not None:
        w, pdf, lo, hi = d

        def fun(x):
            return pdf(x) * _part_weight(x, s, part) * np.exp(1j * u * x)

        val, err = _quad_complex(fun, lo, hi, s)
        if not math.isfinite(abs(val)):
            raise ConvergenceError("oracle integral diverged")
        total += w * val
    return total


# ---- distribution grammar -------------------------------------------------------


_ALLOWED = {
    "point": ({"x"}, 0),
    "discrete": ({"x", "w"}, 0),
    "exp": ({"rate"}, 0),
    "normal": ({"mean", "sd"}, 0),
    "neg": (set(), 1),
    "shift": ({"c"}, 1),
}


def _literal(node, text):
    try:
        value = ast.literal_eval(node)
    except ValueError:
        raise ParameterError(f"not a numeric literal: {ast.get_source_segment(text, node)!r}") from None
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, (list, tuple)) and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return [float(v) for v in value]
    raise ParameterError(f"not a numeric literal: {ast.get_source_segment(text, node)!r}")


def _build(node, text) -> DistributionModel:
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise ParameterError(f"expected a distribution call, got {ast.get_source_segment(text, node)!r}")
    name = node.func.id
    if name not in _ALLOWED:
        raise ParameterError(f"unknown distribution {name!r}")
    keys, npos = _ALLOWED[name]
    if len(node.args) != npos:
        raise ParameterError(f"{name} takes {npos} positional argument(s)")
    kw = {}
    for k in node.keywords:
        if k.arg not in keys:
            raise ParameterError(f"unknown argument {k.arg!r} for {name}")
        kw[k.arg] = _literal(k.value, text)
    missing = keys - kw.keys()
    if missing:
        raise ParameterError(f"{name} is missing {sorted(missing)}")
    if name == "point":
        return point_mass(kw["x"])
    if name == "discrete":
        if not isinstance(kw["x"], list) or not isinstance(kw["w"], list):
            raise ParameterError("discrete needs lists x=[..] and w=[..]")
        return finite_discrete(kw["x"], kw["w"])
    if name == "exp":
        return exponential(kw["rate"])
    if name == "normal":
        return normal(kw["mean"], kw["sd"])
    inner = _build(node.args[0], text)
    if name == "neg":
        return negated(inner)
    return shifted(inner, kw["c"])


def parse_distribution(text: str) -> DistributionModel:
    """Parse ``point(x=..)``, ``discrete(x=[..], w=[..])``, ``exp(rate=..)``,
    ``normal(mean=.., sd=..)`` and the wrappers ``neg(..)``, ``shift(.., c=..)``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParameterError(f"cannot parse distribution {text!r}: {exc.msg}") from None
    for sub in ast.walk(tree):
        if isinstance(sub, ast.List) and any(isinstance(x, ast.Call) for x in sub.elts):
            raise ParameterError("lists may only hold numbers")
    return _build(tree.body, text)
