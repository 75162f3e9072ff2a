"""Moment calculus from characteristic functions."""

from .constants import c_direct_quadrature, c_plus_gn, g_constants
from .distributions import (
    DistributionModel,
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
from .errors import CapabilityError, CharMomentError, ConvergenceError, DomainError, ParameterError
from .kernel import GSpec
from .moments import (
    MomentReport,
    Parts,
    abs_moment_vonbahr,
    abs_moment_zolotarev,
    cdf_halfequal,
    cf_pos_part,
    engine_generalized,
    moment,
    neg_part,
    pos_part,
    solve_pair,
    symdiff_pair,
    truncated_moment,
)
from .quadrature import QuadratureConfig
from .risk import RiskBound, p_alpha, q_alpha

__version__ = "0.1.0"
