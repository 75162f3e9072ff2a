"""Adaptive panel quadrature and limit-sense integrals over half-lines.

Integrands are vectorised: they take a float ndarray and return a complex
ndarray of the same shape.  Tails ``int_b^{inf-}`` of oscillatory integrands
are summed over full-period panels and the partial sums are accelerated with
the Levin u-transform; non-oscillatory tails are mapped onto ``(0, 1]`` by
``t = b / s``.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import ParameterError

log = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    split_b: float = 1.0
    max_panels: int = 2000
    tail_period_hint: float = math.pi
    """Half-period of the dominant oscillation; tail panels span twice this."""
    max_tail_terms: int = 200
    accel_order: int = 10

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ParameterError("tolerances must be positive")
        if self.split_b <= 0:
            raise ParameterError("split_b must be positive")
        if self.tail_period_hint <= 0:
            raise ParameterError("tail_period_hint must be positive")

    def with_(self, **kw) -> "QuadratureConfig":
        return replace(self, **kw)


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    err_estimate: float
    converged: bool
    evaluations: int = 0
    tail_terms_used: int = 0

    def __add__(self, other: "IntegralResult") -> "IntegralResult":
        return IntegralResult(
            self.value + other.value,
            self.err_estimate + other.err_estimate,
            self.converged and other.converged,
            self.evaluations + other.evaluations,
            self.tail_terms_used + other.tail_terms_used,
        )

    def scaled(self, c: complex) -> "IntegralResult":
        return replace(self, value=c * self.value, err_estimate=abs(c) * self.err_estimate)


ZERO = IntegralResult(0j, 0.0, True)


@lru_cache(maxsize=None)
def _gauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _panel(f: Integrand, a: float, b: float):
    """Gauss-Legendre 32 estimate with its distance to the 16-point rule."""
    half, mid = 0.5 * (b - a), 0.5 * (a + b)
    x32, w32 = _gauss(32)
    x16, w16 = _gauss(16)
    t = np.concatenate([mid + half * x32, mid + half * x16])
    y = np.asarray(f(t), dtype=complex)
    if not np.all(np.isfinite(y)):
        raise FloatingPointError(f"non-finite integrand on [{a}, {b}]")
    q32 = half * np.dot(w32, y[:32])
    q16 = half * np.dot(w16, y[32:])
    return q32, abs(q32 - q16)


def _adaptive(f: Integrand, edges, tol_abs: float, rel_tol: float, max_panels: int):
    heap = []
    total_err = 0.0
    values = {}
    evals = 0
    for a, b in zip(edges[:-1], edges[1:]):
        q, e = _panel(f, a, b)
        evals += 48
        values[(a, b)] = q
        heapq.heappush(heap, (-e, a, b))
        total_err += e
    while True:
        total = _ordered_sum(values)
        if total_err <= max(tol_abs, rel_tol * abs(total)):
            return total, total_err, True, evals
        if len(values) >= max_panels:
            return total, total_err, False, evals
        neg_e, a, b = heapq.heappop(heap)
        if b - a <= 1e-15 * max(abs(a), abs(b), 1e-300):
            # cannot split further; keep it and stop refining
            heapq.heappush(heap, (neg_e, a, b))
            return total, total_err, False, evals
        del values[(a, b)]
        total_err += neg_e
        m = 0.5 * (a + b)
        for lo, hi in ((a, m), (m, b)):
            q, e = _panel(f, lo, hi)
            evals += 48
            values[(lo, hi)] = q
            heapq.heappush(heap, (-e, lo, hi))
            total_err += e


def _ordered_sum(values: dict) -> complex:
    keys = sorted(values)
    return complex(
        math.fsum(values[k].real for k in keys), math.fsum(values[k].imag for k in keys)
    )


def integrate_finite(
    f: Integrand,
    a: float,
    b: float,
    endpoint_exponent: Optional[float] = None,
    cfg: QuadratureConfig = QuadratureConfig(),
    abs_tol: Optional[float] = None,
) -> IntegralResult:
    """Integrate ``f`` over ``(a, b)``.

    ``endpoint_exponent=alpha`` announces behaviour like ``(t - a)**(-alpha)``
    near ``a``; for ``alpha`` in ``(0, 1)`` the substitution
    ``t = a + (b - a) w**(1/(1 - alpha))`` removes the singularity.  Any
    non-``None`` value also grades the initial panels geometrically towards
    ``a``.
    """
    if not a < b:
        raise ParameterError(f"need a < b, got {a}, {b}")
    tol = cfg.abs_tol if abs_tol is None else abs_tol
    g = f
    lo, hi = a, b
    if endpoint_exponent is not None and endpoint_exponent > 0:
        if endpoint_exponent >= 1:
            raise ParameterError("endpoint singularity is not integrable")
        beta = 1.0 / (1.0 - endpoint_exponent)
        width = b - a

        def g(w, _f=f):
            return _f(a + width * w**beta) * (width * beta * w ** (beta - 1.0))

        lo, hi = 0.0, 1.0
    if endpoint_exponent is None:
        edges = list(np.linspace(lo, hi, 5))
    else:
        edges = [lo] + [lo + (hi - lo) * 2.0 ** (-k) for k in range(12, -1, -1)]
    total, err, ok, evals = _adaptive(g, edges, tol, cfg.rel_tol, cfg.max_panels)
    if not ok:
        log.debug("finite integral on [%g, %g] not converged: err=%g", a, b, err)
    return IntegralResult(complex(total), float(err), ok, evals)


def _levin_u(partial, terms, beta: float, k: int, n: int = 0) -> complex:
    """Levin u-transform ``T_k^{(n)}`` from ``partial[n..n+k]``."""
    num = 0j
    den = 0j
    ref = beta + n + k
    for j in range(k + 1):
        idx = n + j
        omega = (beta + idx) * terms[idx]
        w = (-1) ** j * math.comb(k, j) * ((beta + idx) / ref) ** (k - 1) / omega
        num += w * partial[idx]
        den += w
    return num / den


def integrate_tail_limit(
    f: Integrand,
    b: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    period: Optional[float] = None,
    decay: Optional[float] = None,
) -> IntegralResult:
    """``lim_{T -> inf} int_b^T f``.

    ``period`` is the full oscillation period of the integrand (defaults to
    ``2 * cfg.tail_period_hint``); ``period=math.inf`` marks a
    non-oscillatory tail, which is integrated directly after ``t = b / s``
    (absolutely integrable tails only).  ``decay=beta`` announces
    ``|f(t)| ~ t**(-beta)`` there, which becomes an endpoint singularity of
    exponent ``2 - beta`` after the map.
    """
    if period is None:
        period = 2.0 * cfg.tail_period_hint
    if math.isinf(period):
        def g(s):
            return f(b / s) * (b / s**2)

        alpha = 0.0 if decay is None else 2.0 - decay
        return integrate_finite(g, 0.0, 1.0, alpha if 0.0 < alpha < 1.0 else 0.0, cfg)

    # Panels span half a period.  Purely oscillatory integrands give an
    # alternating half-panel series; a non-oscillating component is netted
    # out by pairing panels into full periods.  Both sequences are
    # accelerated and the first to settle wins.  Each transform is anchored
    # at the first panel and its order grows with every new panel, which is
    # far more stable than a sliding window of fixed order.
    half = 0.5 * period
    max_order = 4 * cfg.accel_order
    panel_tol = cfg.abs_tol * 1e-2
    # A real sinusoid integrates to ~ cos(phase) over a half-period panel, so
    # panels started near a peak give nearly vanishing terms that wreck the
    # transform.  Start where the first panel is largest and integrate the
    # short lead-in directly.
    starts = [b + j * half / 4 for j in range(4)]
    firsts = [integrate_finite(f, x0, x0 + half, None, cfg, abs_tol=panel_tol) for x0 in starts]
    pick = max(range(4), key=lambda j: abs(firsts[j].value))
    x = starts[pick]
    lead = integrate_finite(f, b, x, None, cfg, abs_tol=panel_tol) if pick else IntegralResult(0j, 0.0, True, 0)
    first = firsts[pick]
    evals = sum(r.evaluations for r in firsts) + lead.evaluations
    seqs = {
        "half": _Accel(x / half, max_order, -1),
        "full": _Accel(x / period, max_order, 1),
    }
    terms: list[complex] = []
    acc = lead.value
    pending = None
    for j in range(2 * cfg.max_tail_terms):
        if j == 0:
            r = first
        else:
            r = integrate_finite(f, x, x + half, None, cfg, abs_tol=panel_tol)
            evals += r.evaluations
        x += half
        terms.append(r.value)
        acc += r.value
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(acc))
        if j >= 5 and all(abs(t) <= 1e-3 * tol for t in terms[-4:]):
            err = 10 * abs(terms[-1]) + 1e-16 * abs(acc) + lead.err_estimate
            return IntegralResult(acc, err, True, evals, j + 1)
        done = seqs["half"].push(r.value, cfg)
        if pending is None:
            pending = r.value
        else:
            done = seqs["full"].push(pending + r.value, cfg) or done
            pending = None
        for acc_seq in seqs.values():
            if acc_seq.converged:
                value = lead.value + acc_seq.best
                return IntegralResult(value, acc_seq.best_diff + 1e-15 * abs(value) + lead.err_estimate,
                                      True, evals, j + 1)
        if all(a.exhausted for a in seqs.values()):
            break
    cands = [a for a in seqs.values() if a.best is not None]
    if cands:
        best = min(cands, key=lambda a: a.best_diff)
        value, err = lead.value + best.best, best.best_diff + lead.err_estimate
    else:
        value, err = acc, abs(terms[-1]) * len(terms)
    tol = max(cfg.abs_tol, cfg.rel_tol * abs(value))
    ok = err <= tol and lead.converged
    if not ok:
        log.debug("tail from %g not converged (best diff %g)", b, err)
    return IntegralResult(value, float(err), ok, evals, len(terms))


class _Accel:
    """Running Levin u-transform of a series whose terms arrive one by one.

    ``sign`` is the expected sign of consecutive term ratios: ``-1`` for an
    alternating series, ``1`` for a one-signed one.  A term that breaks the
    pattern (a near-zero crossing, where the ``1/a_k`` weights blow up)
    re-anchors the transform just after it.
    """

    def __init__(self, beta: float, max_order: int, sign: int):
        self.beta = beta
        self.max_order = max_order
        self.sign = sign
        self.terms: list[complex] = []
        self.partial: list[complex] = []
        self.anchor = 0
        self._restart()
        self.converged = False
        self.exhausted = False

    def _restart(self):
        self.prev = None
        self.best = None
        self.best_diff = math.inf
        self.small_run = 0
        self.worse_run = 0

    def push(self, term: complex, cfg: QuadratureConfig) -> bool:
        if self.exhausted or self.converged:
            return self.converged
        if self.terms and (term * np.conj(self.terms[-1])).real * self.sign <= 0:
            self.anchor = len(self.terms) + 1
            self._restart()
        self.terms.append(term)
        self.partial.append((self.partial[-1] if self.partial else 0j) + term)
        k = len(self.terms) - 1 - self.anchor
        if k > self.max_order:
            self.exhausted = True
            return False
        if k < 2 or any(t == 0 for t in self.terms[self.anchor:]):
            return False
        est = _levin_u(self.partial, self.terms, self.beta, k, self.anchor)
        if self.prev is not None:
            diff = abs(est - self.prev)
            tol = max(cfg.abs_tol, cfg.rel_tol * abs(est))
            if diff < self.best_diff:
                self.best, self.best_diff, self.worse_run = est, diff, 0
            else:
                self.worse_run += 1
            self.small_run = self.small_run + 1 if diff <= tol else 0
            if self.small_run >= 2 and k >= 4:
                self.best, self.best_diff = est, diff
                self.converged = True
            elif self.worse_run >= 4:
                self.exhausted = True
        self.prev = est
        return self.converged


def integrate_zero_inf(
    f: Integrand,
    zero_exponent: Optional[float] = None,
    cfg: QuadratureConfig = QuadratureConfig(),
    period: Optional[float] = None,
    split_b: Optional[float] = None,
    decay: Optional[float] = None,
) -> IntegralResult:
    """``int_{0+}^{inf-} f`` as ``int_0^b`` plus the accelerated tail from ``b``."""
    b = cfg.split_b if split_b is None else split_b
    head = integrate_finite(f, 0.0, b, zero_exponent if zero_exponent is not None else 0.0, cfg)
    tail = integrate_tail_limit(f, b, cfg, period, decay)
    return head + tail
