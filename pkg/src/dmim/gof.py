"""Empirical CDFs, Kolmogorov-Smirnov tails and DMIM-based sample planning.

The planner links four quantities for a variable with standard deviation
``sigma``:

* ``epsilon`` - allowed DMIM deviation ``|gamma(inf) - gamma(n)|``
* ``n``       - sample count, ``n >= 1 / (4 pi sigma^2 ln^2(1 - epsilon))``
* ``d``       - KS deviation, ``d = sqrt(2 pi sigma^2 ln(19/(9 beta))) ln(1/(1 - epsilon))``
* ``beta``    - confidence, ``P{D_n > d} < beta``

Any two of ``(d, beta, epsilon)`` fix the third at a given ``sigma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .distributions import DistributionSpec
from .errors import (
    DegenerateInput,
    EmptySample,
    InvalidCdf,
    InvalidParams,
    MissingVariance,
    NonFiniteSample,
    QuadratureFailure,
)
from .measures import dmim

BETA_CEILING = 19.0 / 9.0
# Largest beta for which beta*y**4 + 2*y - beta <= 0 holds at y = 9*beta/19.
BETA_MAX = BETA_CEILING * (1.0 / 19.0) ** 0.25
KS_TERM_FLOOR = 1e-16


@dataclass(frozen=True)
class EmpiricalCdf:
    sorted_samples: np.ndarray
    n: int

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """Fraction of samples ``<= x`` (right-continuous step function)."""
        hits = np.searchsorted(self.sorted_samples, x, side="right")
        return hits / self.n


def empirical_cdf(samples) -> EmpiricalCdf:
    arr = np.array(samples, dtype=float).ravel()
    if arr.size == 0:
        raise EmptySample("need at least one sample")
    if not np.isfinite(arr).all():
        raise NonFiniteSample("samples must be finite")
    arr.sort()
    arr.flags.writeable = False
    return EmpiricalCdf(arr, int(arr.size))


def ks_statistic(ecdf: EmpiricalCdf, cdf: Callable) -> float:
    """``sup_x |F_n(x) - F(x)|`` from the order statistics.

    ``max_i max(i/n - F(x_i), F(x_i) - (i-1)/n)``, exact for continuous F.
    """
    x = ecdf.sorted_samples
    f = np.asarray(cdf(x), dtype=float)
    if f.shape != x.shape:
        f = np.broadcast_to(f, x.shape)
    if not ((f >= 0.0) & (f <= 1.0)).all():
        raise InvalidCdf("reference CDF left [0, 1] at a sample point")
    n = ecdf.n
    i = np.arange(1, n + 1)
    upper = np.max(i / n - f)
    lower = np.max(f - (i - 1) / n)
    return float(max(upper, lower))


def ks_tail_series(n: int, d: float, k_max: int = 100) -> float:
    """Asymptotic ``P{D_n > d} ~ 2 sum_k (-1)^(k-1) exp(-2 n k^2 d^2)``, clamped to [0, 1]."""
    x = n * d * d
    if not x > 0:
        raise InvalidParams("n * d^2 must be positive")
    total = 0.0
    for k in range(1, k_max + 1):
        term = 2.0 * math.exp(-2.0 * x * k * k)
        total += term if k % 2 else -term
        if term < KS_TERM_FLOOR:
            break
    return min(1.0, max(0.0, total))


def ks_tail_upper_bound(n: int, d: float) -> float:
    """``2 exp(-2 n d^2) / (1 - exp(-8 n d^2))``; exceeds 1 when ``n d^2`` is small."""
    x = n * d * d
    if not x > 0:
        raise InvalidParams("n * d^2 must be positive")
    denom = -math.expm1(-8.0 * x)
    if denom == 0.0:
        raise DegenerateInput(f"n*d^2 = {x!r} is too small for the bound")
    return 2.0 * math.exp(-2.0 * x) / denom


def gamma_n(n: float, sigma: float, l_X: float) -> float:
    """Relative importance of ``n`` samples: ``exp(-1/(2 sqrt(pi n) sigma)) / l_X``.

    Increases with ``n`` towards ``1 / l_X``.
    """
    if not n >= 1:
        raise InvalidParams("n must be >= 1")
    if not sigma > 0:
        raise InvalidParams("sigma must be positive")
    if not 0 < l_X <= 1:
        raise InvalidParams(f"l_X must lie in (0, 1], got {l_X}")
    return math.exp(-1.0 / (2.0 * math.sqrt(math.pi * n) * sigma)) / l_X


def required_samples(epsilon: float, sigma: float, l_X: float | None = None) -> int:
    """Smallest ``n`` keeping the DMIM deviation within ``epsilon``.

    Without ``l_X`` this is the distribution-free count
    ``ceil(1 / (4 pi sigma^2 ln^2(1 - epsilon)))``.  Passing ``l_X`` uses
    ``ln(1 - epsilon*l_X)`` instead, which never gives a smaller count.
    """
    if not 0 < epsilon < 1:
        raise InvalidParams(f"epsilon must lie in (0, 1), got {epsilon}")
    if not sigma > 0:
        raise InvalidParams("sigma must be positive")
    x = epsilon
    if l_X is not None:
        if not 0 < l_X <= 1:
            raise InvalidParams(f"l_X must lie in (0, 1], got {l_X}")
        x = epsilon * l_X
    log_term = math.log1p(-x)
    bound = 1.0 / (4.0 * math.pi * sigma * sigma * log_term * log_term)
    if not math.isfinite(bound):
        raise InvalidParams(f"epsilon={epsilon} needs an unrepresentable sample count")
    return max(1, math.ceil(bound))


def _log_confidence(beta: float) -> float:
    return math.log(BETA_CEILING / beta)


def d_from(epsilon: float, beta: float, sigma: float) -> float:
    """KS deviation guaranteed at confidence ``beta`` by a DMIM deviation ``epsilon``."""
    if not 0 < epsilon < 1:
        raise InvalidParams(f"epsilon must lie in (0, 1), got {epsilon}")
    if not 0 < beta <= BETA_MAX:
        raise InvalidParams(f"beta must lie in (0, {BETA_MAX:.6f}], got {beta}")
    if not sigma > 0:
        raise InvalidParams("sigma must be positive")
    return math.sqrt(2.0 * math.pi * sigma * sigma * _log_confidence(beta)) * -math.log1p(-epsilon)


def epsilon_from(d: float, beta: float, sigma: float) -> float:
    if not d > 0:
        raise InvalidParams("d must be positive")
    if not 0 < beta < BETA_CEILING:
        raise InvalidParams(f"beta must lie in (0, 19/9), got {beta}")
    if not sigma > 0:
        raise InvalidParams("sigma must be positive")
    scale = math.sqrt(2.0 * math.pi * sigma * sigma * _log_confidence(beta))
    return -math.expm1(-d / scale)


def beta_from(d: float, epsilon: float, sigma: float) -> float:
    """Confidence reached for deviation ``d`` at DMIM deviation ``epsilon``.

    Values above 1 mean the pair ``(d, epsilon)`` guarantees nothing; they
    are returned as-is (see :attr:`GofPlan.achievable`).
    """
    if not d > 0:
        raise InvalidParams("d must be positive")
    if not 0 < epsilon < 1:
        raise InvalidParams(f"epsilon must lie in (0, 1), got {epsilon}")
    if not sigma > 0:
        raise InvalidParams("sigma must be positive")
    log_term = math.log1p(-epsilon)
    return BETA_CEILING * math.exp(-d * d / (2.0 * math.pi * sigma * sigma * log_term * log_term))


@dataclass(frozen=True)
class GofPlan:
    d: float
    beta: float
    epsilon: float
    n: int
    sigma: float
    n_sharp: int | None = None  # count from the l(X)-dependent bound

    @property
    def achievable(self) -> bool:
        return self.beta <= 1.0

    @property
    def tail_bound(self) -> float:
        """Analytic upper bound on ``P{D_n > d}`` at the planned ``(n, d)``."""
        return ks_tail_upper_bound(self.n, self.d)


def make_plan(spec: DistributionSpec, epsilon: float, beta: float) -> GofPlan:
    try:
        sigma = spec.std
    except (InvalidParams, TypeError) as exc:
        raise MissingVariance("distribution has no usable variance") from exc
    d = d_from(epsilon, beta, sigma)
    n = required_samples(epsilon, sigma)
    try:
        l_X = dmim(spec)
        n_sharp = required_samples(epsilon, sigma, l_X) if l_X > 0 else None
    except QuadratureFailure:
        n_sharp = None
    return GofPlan(d=d, beta=beta, epsilon=epsilon, n=n, sigma=sigma, n_sharp=n_sharp)
