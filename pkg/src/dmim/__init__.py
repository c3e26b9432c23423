"""Differential message importance measure (DMIM) toolkit.

Compute ``l(X) = int f e^{-f}`` for continuous distributions, relate it to
Renyi entropies, and use the DMIM deviation to size samples for
Kolmogorov-Smirnov goodness-of-fit.
"""

from .distributions import Custom, DistributionSpec, Exponential, Normal, Uniform, matched
from .errors import (
    DegenerateInput,
    DivergentIntegral,
    DmimError,
    EmptySample,
    InvalidAlpha,
    InvalidCdf,
    InvalidDomain,
    InvalidParams,
    MissingVariance,
    NonConvergent,
    NonFinite,
    NonFiniteSample,
    QuadratureFailure,
    SlowConvergence,
    UnsupportedFamily,
)
from .gof import (
    EmpiricalCdf,
    GofPlan,
    beta_from,
    d_from,
    empirical_cdf,
    epsilon_from,
    gamma_n,
    ks_statistic,
    ks_tail_series,
    ks_tail_upper_bound,
    make_plan,
    required_samples,
)
from .measures import (
    SeriesResult,
    dmim,
    dmim_exponential,
    dmim_normal_approx_exp,
    dmim_normal_approx_linear,
    dmim_normal_series,
    dmim_quadrature,
    dmim_uniform,
    dmim_via_renyi_series,
    renyi_entropy,
    truncation_bound,
)
from .montecarlo import (
    NRule,
    SimConfig,
    TrialReport,
    estimate_exceedance,
    sample,
    verify_theorem2,
)
from .quadrature import Interval, QuadratureResult, integrate

__version__ = "0.1.0"
