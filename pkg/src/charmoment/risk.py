"""Coherent quantile bounds ``Q_alpha(X; q)`` and tail bounds ``P_alpha(X; x)``.

Both are infima over a shift ``t`` of objectives built from ``E(X - t)_+^alpha``:

    Q_alpha(X; q) = inf_t  t + (E(X - t)_+^alpha / q)**(1/alpha)
    P_alpha(X; x) = inf_{t < x}  E(X - t)_+^alpha / (x - t)**alpha

The minimisation is a coarse grid followed by golden-section refinement of
the best grid cell.  Atoms of the law are added as candidates because the
objectives have kinks there.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

from scipy.optimize import minimize_scalar

from .distributions import DistributionModel, shifted
from .errors import CharMomentError, ConvergenceError, DomainError, ParameterError
from .moments import pos_part_total_order
from .quadrature import QuadratureConfig

log = logging.getLogger(__name__)

DEFAULT_GRID = 64
MAX_FAIL_FRACTION = 0.2


@dataclass(frozen=True)
class RiskBound:
    value: float
    t_star: float
    at_bracket_edge: bool
    failures: int
    flags: tuple = ()

    def __float__(self):
        return float(self.value)


def default_bracket(model: DistributionModel, width_sd: float = 10.0) -> tuple[float, float]:
    """``mean -/+ width_sd * sd``, with unit spread for degenerate laws."""
    mu = model.mean()
    var = model.variance()
    sd = math.sqrt(var) if var > 0 and math.isfinite(var) else 1.0
    return mu - width_sd * sd, mu + width_sd * sd


def shifted_pos_moment(model: DistributionModel, alpha: float, t: float, cfg: QuadratureConfig) -> float:
    """``E(X - t)_+^alpha``."""
    rep = pos_part_total_order(shifted(model, -t), alpha, 0.0, cfg)
    if not rep.converged:
        raise ConvergenceError(f"E(X - {t})_+^{alpha} did not converge", rep)
    return max(rep.value.real, 0.0)


def _check(model: DistributionModel, alpha: float) -> None:
    if not alpha > 0:
        raise ParameterError("alpha must be positive")
    if not model.moment_finite(alpha):
        raise DomainError(f"E|X|^{alpha} is infinite for {model.to_spec()}")


def _minimise(
    objective: Callable[[float], float],
    lo: float,
    hi: float,
    grid_points: int,
    extra: list[float],
) -> tuple[float, float, bool, int]:
    """Grid, then golden section on the best cell; returns ``(value, t, edge, failures)``."""
    if not lo < hi:
        raise ParameterError(f"empty search bracket [{lo}, {hi}]")
    width = hi - lo
    grid = [lo + width * i / grid_points for i in range(grid_points + 1)]
    values = []
    failures = 0
    for t in grid:
        try:
            v = objective(t)
        except (CharMomentError, ArithmeticError, FloatingPointError) as exc:
            log.debug("objective failed at t=%g: %s", t, exc)
            failures += 1
            v = math.nan
        values.append(v)
    if failures > MAX_FAIL_FRACTION * len(grid):
        raise ConvergenceError(f"objective failed at {failures} of {len(grid)} grid points")
    finite = [(v, i) for i, v in enumerate(values) if not math.isnan(v)]
    if any(math.isinf(v) for v, _ in finite):
        raise DomainError("objective is not finite on the search bracket")
    best_v, best_i = min(finite)
    best_t = grid[best_i]

    if 0 < best_i < grid_points:
        a, c = grid[best_i - 1], grid[best_i + 1]
        # work in z = 1 + (t - lo)/width so golden's relative xtol acts as 1e-6 of the width
        def on_z(z):
            try:
                return objective(lo + (z - 1.0) * width)
            except (CharMomentError, ArithmeticError, FloatingPointError):
                return math.inf

        za, zb, zc = (1.0 + (x - lo) / width for x in (a, best_t, c))
        if on_z(za) > best_v < on_z(zc):
            res = minimize_scalar(on_z, bracket=(za, zb, zc), method="golden",
                                  options={"xtol": 1e-6 / 3})
            if res.fun < best_v:
                best_v, best_t = float(res.fun), lo + (float(res.x) - 1.0) * width

    for t in extra:
        if lo <= t <= hi:
            try:
                v = objective(t)
            except (CharMomentError, ArithmeticError, FloatingPointError):
                continue
            if v <= best_v:
                best_v, best_t = v, t
    edge = best_t in (grid[0], grid[-1])
    return float(best_v), float(best_t), edge, failures


def q_alpha(
    model: DistributionModel,
    alpha: float,
    q: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    search_bracket: Optional[tuple[float, float]] = None,
    grid_points: int = DEFAULT_GRID,
) -> RiskBound:
    """Upper bound on the ``(1 - q)``-quantile of ``X``."""
    _check(model, alpha)
    if not 0 < q < 1:
        raise ParameterError("q must lie in (0, 1)")
    lo, hi = search_bracket or default_bracket(model)

    def objective(t):
        return t + (shifted_pos_moment(model, alpha, t, cfg) / q) ** (1.0 / alpha)

    atoms = [x for x, _ in model.atoms()]
    v, t, edge, fails = _minimise(objective, lo, hi, grid_points, atoms)
    flags = ("possibly_nonconvex",) if alpha < 1 else ()
    return RiskBound(v, t, edge, fails, flags)


def p_alpha(
    model: DistributionModel,
    alpha: float,
    x: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    search_bracket: Optional[tuple[float, float]] = None,
    grid_points: int = DEFAULT_GRID,
) -> RiskBound:
    """Upper bound on the tail ``P(X > x)``.

    The ratio tends to 1 as ``t -> -inf``; when the grid minimum sits on
    the lower bracket edge the value is clipped at 1 and flagged.
    """
    _check(model, alpha)
    lo, hi = search_bracket or default_bracket(model)
    width = hi - lo
    hi = min(hi, x - 1e-9 * width)
    if not lo < hi:
        lo = hi - width

    def objective(t):
        return shifted_pos_moment(model, alpha, t, cfg) / (x - t) ** alpha

    atoms = [a for a, _ in model.atoms() if a < x]
    v, t, edge, fails = _minimise(objective, lo, hi, grid_points, atoms)
    flags = ["possibly_nonconvex"] if alpha < 1 else []
    if v >= 1.0:
        v = 1.0
        flags.append("limit_t_to_minus_inf")
        edge = True
    return RiskBound(v, t, edge, fails, tuple(flags))
