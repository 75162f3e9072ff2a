"""Positive-part, absolute, signed and truncated moments from a characteristic function.

All routines are linear in the law of ``X``, so a model is split into simple
components (see :meth:`DistributionModel.components`) and evaluated one
component at a time.  This gives every integrand a single oscillation
frequency, which fixes the tail panels of the quadrature, and a natural
length scale, which fixes the split point between the head and the tail.

Remainders ``R_m psi(u; t)`` and symmetric differences ``Delta_t^n psi(u)``
lose all accuracy to cancellation as ``t -> 0``; when the model supplies the
extra derivative they are evaluated there through their integral (Peano)
forms instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .constants import c_plus_gn, g_constants, in_window
from .distributions import DistributionModel, negated, shifted
from .errors import CapabilityError, DomainError, ParameterError
from .kernel import (
    GSpec,
    OrderDecomposition,
    binomial,
    gamma,
    ipow,
    is_integer,
    sym_diff,
    sym_diff_peano,
    taylor_remainder,
)
from .quadrature import (
    ZERO,
    IntegralResult,
    QuadratureConfig,
    integrate_finite,
    integrate_tail_limit,
)

DEFAULT_CFG = QuadratureConfig()
SMALL_T = 0.5


@dataclass(frozen=True)
class MomentReport:
    value: complex
    err_estimate: float
    method: str
    converged: bool = True
    cross_residual: Optional[float] = None
    flags: tuple = ()

    def __complex__(self):
        return complex(self.value)

    def __float__(self):
        return float(np.real(self.value))


@dataclass(frozen=True)
class Parts:
    """``pos = E X_+^{r+p} e^{iuX}``, ``neg = E X_-^{r+p} e^{iuX}``;
    ``abs`` and ``signed`` are ``E Y |X|^p`` and ``E Y X^[p]`` with
    ``Y = conj(X^r) e^{iuX}``, i.e. ``pos +- e^{-i pi r} neg``."""

    pos: complex
    neg: complex
    abs: complex
    signed: complex
    err_estimate: float
    method: str
    converged: bool = True
    flags: tuple = ()

    def get(self, part: str) -> complex:
        if part not in ("pos", "neg", "abs", "signed"):
            raise ParameterError(f"unknown part {part!r}")
        return getattr(self, part)


@dataclass(frozen=True)
class HalfEqualProb:
    x: float
    prob: float
    m_used: int
    err_estimate: float = 0.0
    converged: bool = True


def _parts(pos, neg, r, err, method, converged=True, flags=()):
    rot = np.conj(ipow(2 * r))
    return Parts(pos, neg, pos + rot * neg, pos - rot * neg, err, method, converged, flags)


# ---- simple-component channels ---------------------------------------------------


class _Channel:
    """``psi(t) = exp(-i t x0) f^{(r)}(t)`` for one simple component, with derivatives."""

    def __init__(self, comp: DistributionModel, r: float, x0: float = 0.0):
        self.comp = comp
        self.r = r
        self.x0 = x0
        self.freq = abs(comp.center - x0)
        scale = comp.t_scale
        if comp.kind == "point_mass":
            scale = math.inf if self.freq == 0 else 1.0 / self.freq
        elif self.freq > 0:
            scale = min(scale, 1.0 / self.freq)
        self.t_scale = scale

    def has(self, k: float) -> bool:
        if self.x0 == 0:
            return self.comp.has_closed_form(self.r + k)
        return is_integer(k) and all(self.comp.has_closed_form(self.r + j) for j in range(int(k) + 1))

    def d(self, k: float, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.x0 == 0:
            return np.asarray(self.comp.deriv(self.r + k, t), dtype=complex)
        return np.asarray(self.comp.demodulated(self.r, int(round(k)), t, self.x0), dtype=complex)

    def offset(self, o: float) -> Callable:
        """Evaluator ``(j, x) -> psi^{(o + j)}(x)`` for the remainder helpers."""
        return lambda j, x: self.d(o + j, x)

    @property
    def period(self) -> float:
        return math.inf if self.freq < 1e-12 else 2 * math.pi / self.freq

    def split(self, cfg: QuadratureConfig) -> float:
        if math.isfinite(self.t_scale) and self.t_scale > 1:
            return cfg.split_b * self.t_scale
        return cfg.split_b

    def switch(self) -> float:
        return SMALL_T * min(1.0, self.t_scale)


def _channels(model: DistributionModel, r: float, x0: float = 0.0):
    for w, comp in model.components():
        yield w, _Channel(comp, r, x0)


def _one_sided_tails(terms, b: float, cfg, decay: float) -> IntegralResult:
    """Sum of ``int_b^{inf-}`` over terms ``(fn, freq)`` taken one at a time.

    A single shifted c.f. value oscillates with one carrier, so its
    half-period panels alternate cleanly.  Sums of several carriers, or
    their real parts, can have slowly drifting sign patterns that defeat
    the series acceleration.
    """
    # non-oscillating terms may only be integrable jointly
    still = [fn for fn, freq in terms if freq < 1e-12]
    acc = ZERO
    if still:
        def joint(t):
            return sum(fn(t) for fn in still)

        acc = integrate_tail_limit(joint, b, cfg, math.inf, decay)
    for fn, freq in terms:
        if freq >= 1e-12:
            acc = acc + integrate_tail_limit(fn, b, cfg, 2 * math.pi / freq, decay)
    return acc


def _remainder(dpsi, m, u, delta, scale, stable_below, can_stable):
    """``R_m psi(u; delta) / |delta|**scale`` with the integral form for small ``|delta|``."""
    # tiny |delta| may overflow here; those entries are replaced below, and
    # any that are not are caught by the quadrature's finiteness check
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        out = np.asarray(taylor_remainder(dpsi, m, u, delta, "direct", scale), dtype=complex)
    if can_stable and m >= 0:
        small = np.abs(delta) < stable_below
        if np.any(small):
            out = out.copy()
            out[small] = taylor_remainder(dpsi, m, u, delta[small], "integral", scale)
    return out


def _check_moments(model: DistributionModel, *orders: float) -> None:
    for s in orders:
        if not model.moment_finite(s):
            raise DomainError(f"E|X|^{s} is infinite for {model.to_spec()}")


def _total(results) -> IntegralResult:
    acc = ZERO
    for w, res in results:
        acc = acc + res.scaled(w)
    return acc


def _report(res: IntegralResult, method: str, value=None, scale=1.0, flags=()) -> MomentReport:
    v = res.value if value is None else value
    return MomentReport(v, abs(scale) * res.err_estimate, method, res.converged, None, tuple(flags))


# ---- positive part: Taylor-remainder representations -----------------------------


def _validate_m(od: OrderDecomposition, m: int) -> None:
    if od.is_integer:
        if not 1 <= m <= od.ell + 1:
            raise ParameterError(f"m={m} not allowed for integer p={od.p}: need 1 <= m <= {od.ell + 1}")
    elif m > od.ell + 1:
        raise ParameterError(f"m={m} exceeds ell+1={od.ell + 1}")
    if od.lam + m == 0:
        raise ParameterError("p - ell + m must not vanish")


def _stabilized_channel(ch: _Channel, p: float, u: float, b: float, m: int, cfg) -> IntegralResult:
    """Bracketed sum of the four pieces for one channel (before the common prefactor)."""
    od = OrderDecomposition.of(p)
    ell, lam = od.ell, od.lam
    A = np.conj(ipow(p + 1))  # 1 / i^{p+1}
    B = ipow(p + 1)  # 1 / (-i)^{p+1}
    gp1 = gamma(p + 1)
    order_a = ell - m + 1
    if not ch.has(order_a):
        raise CapabilityError(f"need derivative order {ch.r + order_a}")
    switch = ch.switch()

    # (a) reduced integral over (0, b)
    ja = m - 1
    scale_a = lam + m
    dpsi = ch.offset(order_a)
    stable_a = ja >= 0 and ch.has(order_a + ja + 1)
    sgn_a = (-1) ** (ell - ja)

    def piece_a(t):
        plus = _remainder(dpsi, ja, u, t, scale_a, switch, stable_a)
        minus = _remainder(dpsi, ja, u, -t, scale_a, switch, stable_a)
        return A * plus + sgn_a * B * minus

    if od.is_integer:
        hint = 0.0
    elif m >= 1:
        hint = lam
    else:
        hint = lam + m if lam + m > 0 else 0.0
    res = integrate_finite(piece_a, 0.0, b, hint, cfg).scaled(gamma(lam + m) / gp1)

    # (b) boundary terms at t = b
    bvals = 0j
    barr = np.array([b])
    for j in range(m, ell + 1):
        dj = ch.offset(ell - j)
        stable = j >= 0 and ch.has(ell - j + j + 1) and b * (1.0 / ch.t_scale) <= 4.0
        method = "integral" if stable else "direct"
        plus = taylor_remainder(dj, j, u, barr, method if j >= 0 else "direct")[0]
        minus = taylor_remainder(dj, j, u, -barr, method if j >= 0 else "direct")[0]
        rt = A * plus + (-1) ** (ell - j) * B * minus
        bvals += gamma(lam + j) / b ** (lam + j) * rt
    res = res + IntegralResult(-bvals / gp1, 0.0, True)

    # (c) tail of the raw terms
    tails = [
        (lambda t: A * ch.d(0, u + t) * t ** (-p - 1), ch.freq),
        (lambda t: B * ch.d(0, u - t) * t ** (-p - 1), ch.freq),
    ]
    res = res + _one_sided_tails(tails, b, cfg, p + 1)

    # (d) power terms of the Taylor polynomial, integrated over (b, inf)
    uarr = np.array([u])
    dsum = 0j
    for j in range(ell + 1):
        fj = ch.d(j, uarr)[0]
        if fj != 0:
            dsum += (A + (-1) ** j * B) * fj / (math.factorial(j) * (p - j) * b ** (p - j))
    return res + IntegralResult(-dsum, 0.0, True)


def _pos_part_taylor(model, p, r, u, b, m, cfg, method) -> MomentReport:
    if not p > 0:
        raise ParameterError("p must be positive")
    _check_moments(model, r, r + p)
    od = OrderDecomposition.of(p)
    if od.is_integer:
        p = float(round(p))
    if m is None:
        m = od.ell + 1
    _validate_m(od, m)
    flags = ("near_integer",) if od.is_integer and p != od.p else ()
    pieces = []
    for w, ch in _channels(model, r):
        bb = ch.split(cfg) if b is None else b
        pieces.append((w, _stabilized_channel(ch, p, u, bb, m, cfg)))
    tot = _total(pieces)
    pref = gamma(p + 1) / (2 * math.pi * ipow(r))
    value = pref * tot.value
    if od.is_integer:
        value += complex(model.deriv(p + r, u)) / (2 * ipow(p + r))
    return _report(tot, method, value, pref, flags)


def pos_part_unsplit(model, p, r=0.0, u=0.0, cfg: QuadratureConfig = DEFAULT_CFG) -> MomentReport:
    """``E X_+^{r+p} e^{iuX}`` from the single remainder integral of order ``ell``.

    The integral is split at a channel-dependent ``b``; over ``(b, inf)`` the
    Taylor polynomial is integrated in closed form.
    """
    return _pos_part_taylor(model, p, r, u, None, None, cfg, "unsplit")


def pos_part_stabilized(
    model, p, r=0.0, u=0.0, b: Optional[float] = None, m: Optional[int] = None,
    cfg: QuadratureConfig = DEFAULT_CFG,
) -> MomentReport:
    """``E X_+^{r+p} e^{iuX}`` from the split representation with reduced remainder order.

    ``m`` lowers the remainder order on ``(0, b)`` to ``m - 1`` at the price of
    ``ell - m + 1`` more derivatives; ``m = 1`` is the default and ``m = ell + 1``
    reproduces :func:`pos_part_unsplit`.  Non-integer ``p`` also admits
    ``m <= 0``.  ``b=None`` picks ``b`` per component from its length scale.
    """
    od = OrderDecomposition.of(p)
    if m is None:
        m = 1 if od.ell >= 1 or od.is_integer else od.ell + 1
    return _pos_part_taylor(model, p, r, u, b, m, cfg, "stabilized")


def pos_part(model, p, r=0.0, u=0.0, method: str = "auto", cfg: QuadratureConfig = DEFAULT_CFG, **kw):
    if method == "auto":
        method = "stabilized" if p >= 1 else "unsplit"
    if method == "unsplit":
        return pos_part_unsplit(model, p, r, u, cfg)
    if method == "stabilized":
        return pos_part_stabilized(model, p, r, u, kw.get("b"), kw.get("m"), cfg)
    if method == "symdiff":
        pr = symdiff_pair(model, kw.get("n", _odd_above(p)), kw.get("m_even", _even_above(p)), p, r, u, cfg)
        return MomentReport(pr.pos, pr.err_estimate, "symdiff", pr.converged)
    if method == "frac_closed":
        pr = pos_part_frac_closed(model, p, u)
        return MomentReport(pr.pos, 0.0, "frac_closed")
    raise ParameterError(f"unknown method {method!r}")


def neg_part(model, p, r=0.0, u=0.0, method: str = "auto", cfg: QuadratureConfig = DEFAULT_CFG, **kw):
    """``E X_-^{r+p} e^{iuX} = E (-X)_+^{r+p} e^{i(-u)(-X)}``."""
    return pos_part(negated(model), p, r, -u, method, cfg, **kw)


def total_order_split(s: float) -> tuple[float, float]:
    """Split a total order ``s`` into ``(r, p)`` with ``p`` in ``(0, 1]``."""
    if s > 0:
        r = math.ceil(s - 1e-12) - 1
        return float(r), s - r
    if s > -1:
        p = (s + 1) / 2
        return s - p, p
    return s - 0.5, 0.5


def pos_part_total_order(model, s: float, u: float = 0.0, cfg: QuadratureConfig = DEFAULT_CFG) -> MomentReport:
    """``E X_+^s e^{iuX}`` for any real ``s``."""
    _check_moments(model, s)
    r, p = total_order_split(s)
    if not model.supports(r):
        raise CapabilityError(f"{model.to_spec()} has no derivative of order {r}")
    rep = pos_part_unsplit(model, p, r, u, cfg)
    return MomentReport(rep.value, rep.err_estimate, "unsplit", rep.converged, None,
                        rep.flags + (f"r={r:g}", f"p={p:g}"))


# ---- fractional closed forms and u = 0 identities ---------------------------------


def pos_part_frac_closed(model, p: float, u: float = 0.0) -> Parts:
    """All four parts from ``f^{(p)}(u)`` and ``f^{(p)}(-u)``; no quadrature at all."""
    od = OrderDecomposition.of(p)
    if od.is_integer:
        raise ParameterError("frac_closed needs non-integer p")
    _check_moments(model, p)
    ell, lam = od.ell, od.lam
    f1 = complex(model.deriv(p, u))
    f2 = np.conj(complex(model.deriv(p, -u)))
    den = 2 * ipow(ell + 1) * math.sin(math.pi * lam)
    il, iml = ipow(lam), ipow(-lam)
    sg = (-1) ** ell
    pos = (il * f1 - sg * iml * f2) / den
    neg = (il * f2 - sg * iml * f1) / den
    return _parts(pos, neg, 0.0, 0.0, "frac_closed")


def _u0_integral(model, p: float, cfg) -> tuple[IntegralResult, OrderDecomposition]:
    """``J = int_0^{inf-} (f^{(ell)}(t) - f^{(ell)}(0)) t^{-lam-1} dt``.

    For integer ``p`` the linear Taylor term is dropped; it contributes
    nothing to any of the real combinations taken from ``J``.
    """
    od = OrderDecomposition.of(p)
    ell, lam = od.ell, od.lam
    jm = 1 if od.is_integer else 0
    pieces = []
    for w, ch in _channels(model, 0.0):
        if not ch.has(ell + jm):
            raise CapabilityError(f"need derivative order {ell + jm}")
        dpsi = ch.offset(ell)
        stable = ch.has(ell + jm + 1)
        switch = ch.switch()
        b = ch.split(cfg)

        def head(t, dpsi=dpsi, stable=stable, switch=switch):
            return _remainder(dpsi, jm, 0.0, t, lam + 1, switch, stable)

        def tail(t, ch=ch):
            return ch.d(ell, t) * t ** (-lam - 1)

        res = integrate_finite(head, 0.0, b, 0.0 if od.is_integer else lam, cfg)
        res = res + integrate_tail_limit(tail, b, cfg, ch.period, lam + 1)
        c0 = complex(ch.d(ell, np.array([0.0]))[0]) * b ** (-lam) / lam
        pieces.append((w, IntegralResult(res.value - c0, res.err_estimate, res.converged,
                                         res.evaluations, res.tail_terms_used)))
    return _total(pieces), od


def u0_moments(model, p: float, variant: str = "pos", cfg: QuadratureConfig = DEFAULT_CFG) -> MomentReport:
    """Real moments at ``u = 0`` from one integral of ``f^{(ell)}``."""
    if not p > 0:
        raise ParameterError("p must be positive")
    _check_moments(model, p)
    J, od = _u0_integral(model, p, cfg)
    lam = od.lam
    k = gamma(lam + 1) / math.pi
    re_a = ipow(p + 1).real  # -sin(pi p / 2)
    im_a = -ipow(p + 1).imag  # -cos(pi p / 2)
    ex = 0.0
    if od.is_integer:
        n = int(round(p))
        ex = (complex(model.deriv(n, 0.0)) / ipow(n)).real
    else:
        n = None
    jr, ji = J.value.real, J.value.imag
    if variant == "pos":
        atom = ex / 2 if n is not None else 0.0
        val = atom + k * (re_a * jr - im_a * ji)
        scale = k * math.hypot(re_a, im_a)
    elif variant == "neg":
        atom = (-1) ** n * ex / 2 if n is not None else 0.0
        val = atom + k * (re_a * jr + im_a * ji)
        scale = k * math.hypot(re_a, im_a)
    elif variant == "abs":
        atom = ex if n is not None and n % 2 == 0 else 0.0
        val = atom + 2 * k * ipow(p + 1).real * jr
        scale = 2 * k
    elif variant == "signed":
        atom = ex if n is not None and n % 2 == 1 else 0.0
        val = atom + 2 * k * ipow(p).real * ji
        scale = 2 * k
    else:
        raise ParameterError(f"unknown variant {variant!r}")
    return _report(J, f"u0:{variant}", complex(val), scale)


def u0_short_form(model, p: float) -> float:
    """``E X_+^p`` for non-integer ``p`` from the single value ``f^{(p)}(0)``."""
    od = OrderDecomposition.of(p)
    if od.is_integer:
        raise ParameterError("short form needs non-integer p")
    fp = complex(model.deriv(p, 0.0))
    return (-1) ** (od.ell + 1) * (ipow(p + 1) * fp).real / math.sin(math.pi * od.lam)


def abs_moment_laue(model, p: float) -> float:
    """``E|X|^p`` for non-integer ``p`` from ``Re f^{(p)}(0)``."""
    od = OrderDecomposition.of(p)
    if od.is_integer:
        raise ParameterError("needs non-integer p")
    fp = complex(model.deriv(p, 0.0)).real
    ell, lam = od.ell, od.lam
    if ell % 2 == 0:
        return (-1) ** (ell // 2) * fp / math.cos(math.pi * lam / 2)
    return (-1) ** ((ell + 1) // 2) * fp / math.sin(math.pi * lam / 2)


def _real(res: IntegralResult) -> IntegralResult:
    return IntegralResult(complex(res.value.real), res.err_estimate, res.converged,
                          res.evaluations, res.tail_terms_used)


def _even_check(p):
    if is_integer(p) and round(p) % 2 == 0:
        raise ParameterError("p must not be an even integer; use the integer moment")
    if not p > 0:
        raise ParameterError("p must be positive")


def abs_moment_zolotarev(model, p: float, cfg: QuadratureConfig = DEFAULT_CFG) -> MomentReport:
    """``E|X|^p`` from the real part of ``f^{(2m)}``, ``m = floor(p/2)``."""
    _even_check(p)
    _check_moments(model, p)
    m = math.floor(p / 2)
    q = p - 2 * m
    pieces = []
    for w, ch in _channels(model, 0.0):
        if not ch.has(2 * m + 1):
            raise CapabilityError(f"need derivative order {2 * m + 1}")
        dpsi = ch.offset(2 * m)
        stable = ch.has(2 * m + 2)
        switch = ch.switch()
        b = ch.split(cfg)

        def head(t, dpsi=dpsi, stable=stable, switch=switch):
            return _remainder(dpsi, 1, 0.0, t, q + 1, switch, stable).real + 0j

        def tail(t, ch=ch):
            return ch.d(2 * m, t) * t ** (-q - 1)

        res = integrate_finite(head, 0.0, b, q - 1 if q > 1 else 0.0, cfg)
        # the real part is taken of the integral, not of the oscillating integrand
        res = res + _real(integrate_tail_limit(tail, b, cfg, ch.period, q + 1))
        c0 = ch.d(2 * m, np.array([0.0]))[0].real * b ** (-q) / q
        pieces.append((w, IntegralResult(res.value - c0, res.err_estimate, res.converged,
                                         res.evaluations, res.tail_terms_used)))
    tot = _total(pieces)
    pref = 2 * (-1) ** (m + 1) * gamma(q + 1) / math.pi * math.sin(math.pi * q / 2)
    return _report(tot, "zolotarev", complex(pref * tot.value.real), pref)


def abs_moment_vonbahr(model, p: float, cfg: QuadratureConfig = DEFAULT_CFG) -> MomentReport:
    """``E|X|^p`` from ``Re R_ell f(0; t)``."""
    _even_check(p)
    _check_moments(model, p)
    od = OrderDecomposition.of(p)
    ell = od.ell
    # for odd integer p the next Taylor term has zero real part
    jm = ell + 1 if od.is_integer else ell
    pieces = []
    for w, ch in _channels(model, 0.0):
        if not ch.has(jm):
            raise CapabilityError(f"need derivative order {jm}")
        dpsi = ch.offset(0)
        stable = ch.has(jm + 1)
        switch = ch.switch()
        b = ch.split(cfg)

        def head(t, dpsi=dpsi, stable=stable, switch=switch):
            return _remainder(dpsi, jm, 0.0, t, p + 1, switch, stable).real + 0j

        def tail(t, ch=ch):
            return ch.d(0, t) * t ** (-p - 1)

        res = integrate_finite(head, 0.0, b, 0.0 if od.is_integer else od.lam, cfg)
        res = res + _real(integrate_tail_limit(tail, b, cfg, ch.period, p + 1))
        z = np.array([0.0])
        poly = sum(
            ch.d(j, z)[0].real * b ** (j - p) / (math.factorial(j) * (p - j)) for j in range(ell + 1)
        )
        pieces.append((w, IntegralResult(res.value - poly, res.err_estimate, res.converged,
                                         res.evaluations, res.tail_terms_used)))
    tot = _total(pieces)
    pref = -(2 * gamma(p + 1) / math.pi) * math.sin(math.pi * p / 2)
    return _report(tot, "vonbahr", complex(pref * tot.value.real), pref)


# ---- symmetric-difference representations ------------------------------------------


def _symdiff_integral(ch: _Channel, n: int, u: float, p: float, cfg) -> IntegralResult:
    """``int_0^{inf-} (Delta_t^n psi)(u) / t^{p+1} dt`` for one channel."""
    if not ch.has(0):
        raise CapabilityError(f"need derivative order {ch.r}")
    psi = ch.offset(0)
    stable = ch.has(n)
    switch = ch.switch()
    b = ch.split(cfg)
    # the j = n/2 term of an even difference does not move with t
    middle = 0j
    if n % 2 == 0:
        middle = (-1) ** (n // 2) * math.comb(n, n // 2) * complex(ch.d(0, np.array([u]))[0])

    def direct(t):
        return sym_diff(lambda z: psi(0, z), n, t, u)

    def head(t):
        out = direct(t) * t ** (-p - 1)
        if stable:
            small = t < switch
            if np.any(small):
                out = np.asarray(out, dtype=complex).copy()
                out[small] = sym_diff_peano(psi, n, t[small], u, p + 1)
        return out

    tails = []
    for j in range(n + 1):
        shift = n - 2 * j
        if shift:
            coef = (-1) ** j * math.comb(n, j)
            tails.append((lambda t, c=coef, s=shift: c * psi(0, u + s * t) * t ** (-p - 1),
                          ch.freq * abs(shift)))

    alpha = p + 1 - n
    res = integrate_finite(head, 0.0, b, alpha if alpha > 0 else 0.0, cfg)
    res = res + _one_sided_tails(tails, b, cfg, p + 1)
    if middle:
        if not p > 0:
            raise ParameterError("even symmetric differences need p > 0")
        res = IntegralResult(res.value + middle * b ** (-p) / p, res.err_estimate, res.converged,
                             res.evaluations, res.tail_terms_used)
    return res


def symdiff_single(model, n: int, p: float, r: float = 0.0, u: float = 0.0,
                   cfg: QuadratureConfig = DEFAULT_CFG) -> MomentReport:
    """``E X_+^{r+p} e^{iuX} + (-1)^n e^{-i pi r} E X_-^{r+p} e^{iuX}``."""
    if not in_window(n, p):
        raise DomainError(f"p={p} outside the admissible window for n={n}")
    _check_moments(model, r, r + p)
    c = c_plus_gn(n, p).c_plus
    tot = _total((w, _symdiff_integral(ch, n, u, p, cfg)) for w, ch in _channels(model, r))
    pref = 1.0 / (ipow(r) * c)
    return _report(tot, f"symdiff(n={n})", pref * tot.value, pref)


def _odd_above(p):
    n = math.floor(p) + 1
    return n if n % 2 == 1 else n + 1


def _even_above(p):
    n = max(2, math.floor(p) + 1)
    return n if n % 2 == 0 else n + 1


def symdiff_pair(model, n_odd: int, m_even: int, p: float, r: float = 0.0, u: float = 0.0,
                 cfg: QuadratureConfig = DEFAULT_CFG) -> Parts:
    """Separate the two parts with one odd and one even difference order.

    For ``p`` in ``(-1, 0]`` only the signed combination exists; the other
    fields are then NaN.
    """
    if n_odd % 2 != 1 or m_even % 2 != 0 or m_even < 2:
        raise ParameterError("need an odd n and an even m")
    if not (n_odd > p and m_even > p):
        raise ParameterError("both difference orders must exceed p")
    odd = symdiff_single(model, n_odd, p, r, u, cfg)
    if p <= 0:
        nan = complex(math.nan, math.nan)
        return Parts(nan, nan, nan, odd.value, odd.err_estimate, "symdiff", odd.converged, ("signed_only",))
    even = symdiff_single(model, m_even, p, r, u, cfg)
    pos = 0.5 * (even.value + odd.value)
    neg = ipow(2 * r) * 0.5 * (even.value - odd.value)
    return _parts(pos, neg, r, odd.err_estimate + even.err_estimate, "symdiff",
                  odd.converged and even.converged)


def cdf_halfequal(model, x: float, m: int = 0, cfg: QuadratureConfig = DEFAULT_CFG) -> HalfEqualProb:
    """``P(X < x) + P(X = x)/2`` by Fourier inversion with difference order ``2m+1``."""
    rep = truncated_moment(model, 0.0, x, m, "below", cfg)
    return HalfEqualProb(x, float(rep.value.real), m, rep.err_estimate, rep.converged)


def truncated_moment(model, r: float, x: float, m: int = 0, side: str = "below",
                     cfg: QuadratureConfig = DEFAULT_CFG) -> MomentReport:
    """``E conj(X^r) 1{X <. x}`` (``below``) or ``1{X >. x}`` (``above``), atoms at ``x`` split in half."""
    if m < 0:
        raise ParameterError("m must be >= 0")
    if side not in ("below", "above"):
        raise ParameterError(f"unknown side {side!r}")
    _check_moments(model, r)
    n = 2 * m + 1
    tot = _total((w, _symdiff_integral(ch, n, 0.0, 0.0, cfg)) for w, ch in _channels(model, r, x))
    f0 = complex(model.deriv(r, 0.0))
    pref = (-1) ** m / (2 * math.pi * ipow(r + 1) * binomial(2 * m, m))
    sign = -1 if side == "below" else 1
    value = f0 / (2 * ipow(r)) + sign * pref * tot.value
    return _report(tot, f"truncated(m={m})", value, pref)


def cf_pos_part(model, u: float, cfg: QuadratureConfig = DEFAULT_CFG) -> MomentReport:
    """``E exp(i u X_+)``."""
    pieces = []
    for w, ch in _channels(model, 0.0):
        b = ch.split(cfg)

        def integrand(t, ch=ch):
            return (ch.d(0, u + t) - ch.d(0, u - t) - ch.d(0, t) + ch.d(0, -t)) / t

        tails = [
            (lambda t, ch=ch: ch.d(0, u + t) / t, ch.freq),
            (lambda t, ch=ch: -ch.d(0, u - t) / t, ch.freq),
            (lambda t, ch=ch: -ch.d(0, t) / t, ch.freq),
            (lambda t, ch=ch: ch.d(0, -t) / t, ch.freq),
        ]
        res = integrate_finite(integrand, 0.0, b, 0.0, cfg)
        res = res + _one_sided_tails(tails, b, cfg, 2.0)
        pieces.append((w, res))
    tot = _total(pieces)
    value = (1 + complex(model.cf(u))) / 2 + tot.value / (2j * math.pi)
    return _report(tot, "cf_pos_part", value, 1 / (2 * math.pi))


# ---- programmable kernels ---------------------------------------------------------


def engine_generalized(model, g: GSpec, p: float, r: float = 0.0, u: float = 0.0,
                       cfg: QuadratureConfig = DEFAULT_CFG) -> MomentReport:
    """``(1/i^r) int_0^{inf-} sum_j a_j (-it)^{q_j} f^{(r+q_j)}(u + v_j t) dt / t^{p+1}``,
    which equals ``c_plus(g) E X_+^{r+p} e^{iuX} + e^{-i pi r} c_minus(g) E X_-^{r+p} e^{iuX}``."""
    g.check_order(p)
    _check_moments(model, r + p, *[r + q for _, q, _ in g.terms])
    alpha = p + 1 - g.vanishing_order()
    if alpha >= 1:
        raise ParameterError(f"g vanishes too slowly at 0 for p={p}")
    still = [q for _, q, v in g.terms if v == 0]
    decay = p + 1 - max(still) if still else p + 1
    coefs = [(a * np.conj(ipow(q)), q, v) for a, q, v in g.terms]  # (-i)^q = conj(i^q)
    pieces = []
    for w, ch in _channels(model, r):
        for _, q, _ in g.terms:
            if not ch.has(q):
                raise CapabilityError(f"need derivative order {r + q}")
        b = ch.split(cfg)

        def integrand(t, ch=ch):
            out = np.zeros(np.shape(t), dtype=complex)
            for c, q, v in coefs:
                out = out + c * t ** (q - p - 1) * ch.d(q, u + v * t)
            return out

        vmax = max(1.0, max(abs(v) for _, _, v in coefs))
        t0 = 0.05 * min(1.0, ch.t_scale) / vmax
        head = _engine_taylor_head(ch, coefs, p, u, min(t0, b))
        if head is None:
            res = integrate_finite(integrand, 0.0, b, alpha if alpha > 0 else 0.0, cfg)
        else:
            t0, res = head
            res = res + integrate_finite(integrand, t0, b, None, cfg)
        if ch.freq < 1e-12:
            res = res + integrate_tail_limit(integrand, b, cfg, math.inf, decay)
        else:
            tails = []
            for c, q, v in coefs:
                if v == 0:
                    fixed = c * complex(ch.d(q, np.array([u]))[0]) * b ** (q - p) / (p - q)
                    res = res + IntegralResult(fixed, 0.0, True)
                else:
                    tails.append((lambda t, c=c, q=q, v=v: c * t ** (q - p - 1) * ch.d(q, u + v * t),
                                  ch.freq * abs(v)))
            res = res + _one_sided_tails(tails, b, cfg, decay)
        pieces.append((w, res))
    tot = _total(pieces)
    pref = 1 / ipow(r)
    return _report(tot, "engine_g", pref * tot.value, pref)


def _engine_taylor_head(ch: _Channel, coefs, p: float, u: float, t0: float, order: int = 14):
    """``int_0^t0`` of the engine integrand from its expansion at ``t = 0``.

    The kernel terms cancel near 0, so the direct sum loses all accuracy
    there.  Grouping by power of ``t`` drops the cancelling orders exactly.
    Returns ``None`` when the channel lacks the derivatives needed.
    """
    groups: dict[float, complex] = {}
    for c, q, v in coefs:
        term = c
        for k in range(order + 1):
            key = round(q + k, 9)
            groups[key] = groups.get(key, 0j) + term
            term = term * v / (k + 1)
    scale = max(abs(c) for c, _, _ in coefs)
    total = 0j
    for e, coef in groups.items():
        if abs(coef) <= 1e-10 * scale:
            continue
        if e <= p or not ch.has(e):
            return None
        total += coef * ch.d(e, np.array([u]))[0] * t0 ** (e - p) / (e - p)
    top = max(groups)
    err = abs(total) * 1e-13 + scale * t0 ** (top - p) * 1e-12
    return t0, IntegralResult(total, err, True)


def solve_pair(model, g_odd: GSpec, g_even: GSpec, p: float, r: float = 0.0, u: float = 0.0,
               cfg: QuadratureConfig = DEFAULT_CFG) -> Parts:
    """Recover both parts from two kernels with independent constant pairs."""
    c1p, c1m = g_constants(g_odd, p, cfg)
    c2p, c2m = g_constants(g_even, p, cfg)
    det = c1p * c2m - c1m * c2p
    if abs(det) <= 1e-12 * max(abs(c1p * c2m), abs(c1m * c2p), 1e-300):
        raise ParameterError("kernel constants are degenerate")
    e1 = engine_generalized(model, g_odd, p, r, u, cfg)
    e2 = engine_generalized(model, g_even, p, r, u, cfg)
    a1, a2 = e1.value, e2.value
    pos = (a1 * c2m - c1m * a2) / det
    neg_rot = (c1p * a2 - c2p * a1) / det  # e^{-i pi r} E X_-^{r+p} e^{iuX}
    neg = ipow(2 * r) * neg_rot
    err = (abs(c2m) + abs(c1m) + abs(c1p) + abs(c2p)) * (e1.err_estimate + e2.err_estimate) / abs(det)
    return _parts(pos, neg, r, err, "engine_g", e1.converged and e2.converged)


# ---- convenience front door -------------------------------------------------------


def moment(model, s: float, part: str = "pos", u: float = 0.0, method: str = "auto",
           cfg: QuadratureConfig = DEFAULT_CFG, **kw) -> MomentReport:
    """``E w(X) e^{iuX}`` with ``w`` one of ``x_+^s``, ``x_-^s``, ``|x|^s`` or ``x^[s]``."""
    if part not in ("pos", "neg", "abs", "signed"):
        raise ParameterError(f"unknown part {part!r}")
    if method == "frac_closed":
        pr = pos_part_frac_closed(model, s, u)
        return MomentReport(pr.get(part), 0.0, "frac_closed")
    if method == "symdiff":
        pr = symdiff_pair(model, kw.get("n", _odd_above(s)), kw.get("m_even", _even_above(s)), s, 0.0, u, cfg)
        return MomentReport(pr.get(part), pr.err_estimate, "symdiff", pr.converged)
    if method in ("zolotarev", "vonbahr"):
        if part != "abs" or u != 0:
            raise ParameterError(f"{method} computes E|X|^s at u = 0 only")
        fn = abs_moment_zolotarev if method == "zolotarev" else abs_moment_vonbahr
        return fn(model, s, cfg)
    if method == "u0":
        if u != 0:
            raise ParameterError("u0 method needs u = 0")
        return u0_moments(model, s, part, cfg)
    if part == "pos":
        if s <= 0:
            if method not in ("auto", "unsplit"):
                raise ParameterError(f"{method} needs s > 0")
            return pos_part_total_order(model, s, u, cfg)
        return pos_part(model, s, 0.0, u, method, cfg, **kw)
    if part == "neg":
        return moment(negated(model), s, "pos", -u, method, cfg, **kw)
    pos = moment(model, s, "pos", u, method, cfg, **kw)
    neg = moment(model, s, "neg", u, method, cfg, **kw)
    val = pos.value + neg.value if part == "abs" else pos.value - neg.value
    return MomentReport(val, pos.err_estimate + neg.err_estimate, pos.method,
                        pos.converged and neg.converged)

