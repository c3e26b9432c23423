"""Differential message importance measure and Renyi entropies.

The DMIM of a density ``f`` is ``l(X) = int f(x) exp(-f(x)) dx``.  Expanding
the exponential gives the alternating series

    l(X) = 1 + sum_{n>=1} (-1)^n / n! * int f^(n+1) dx
         = 1 + sum_{n>=1} (-1)^n / n! * exp(-n * h_{n+1}(X))

where ``h_alpha`` is the differential Renyi entropy of order ``alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Custom, DistributionSpec, Exponential, Normal, Uniform
from .errors import DivergentIntegral, InvalidAlpha, InvalidParams, QuadratureFailure, SlowConvergence

SERIES_TOL = 1e-15
SERIES_MAX_TERMS = 200
_SQRT_PI = math.sqrt(math.pi)
# Rounding error budget for the cancelling normal series.
_CANCELLATION_LIMIT = 1e-10


@dataclass(frozen=True)
class SeriesResult:
    value: float
    truncation_bound: float
    terms_used: int


def dmim_uniform(a: float, b: float) -> float:
    """``exp(-1/(b - a))``; tends to 0 as the width shrinks, to 1 as it grows."""
    if not a < b:
        raise InvalidParams(f"need a < b, got a={a}, b={b}")
    return math.exp(-1.0 / (b - a))


def dmim_exponential(lam: float) -> float:
    """``(1 - exp(-lam)) / lam`` for rate ``lam``."""
    if not lam > 0:
        raise InvalidParams(f"lambda must be positive, got {lam}")
    return -math.expm1(-lam) / lam


def _normal_term_log(n: int, log_a: float) -> float:
    # log of a^n / (n! sqrt(n + 1))
    return n * log_a - math.lgamma(n + 1) - 0.5 * math.log(n + 1)


def dmim_normal_series(
    sigma: float, tol: float = SERIES_TOL, max_terms: int = SERIES_MAX_TERMS
) -> SeriesResult:
    """DMIM of N(mu, sigma^2) from its alternating power series.

    Term ``n`` is ``(-1)^n a^n / (n! sqrt(n+1))`` with ``a = 1/sqrt(2 pi sigma^2)``.
    Summation stops once the magnitudes are decreasing and the next one is
    below ``tol``; that magnitude bounds the remainder and is reported as
    ``truncation_bound``.

    Raises ``SlowConvergence`` if ``max_terms`` is reached or if cancellation
    between the large early terms would wipe out the result (sigma below
    roughly 0.03).
    """
    if not sigma > 0:
        raise InvalidParams(f"sigma must be positive, got {sigma}")
    if not tol > 0:
        raise InvalidParams("tol must be positive")
    log_a = -0.5 * math.log(2.0 * math.pi * sigma * sigma)
    a = math.exp(log_a)
    total = 1.0
    abs_sum = 1.0
    n = 1
    while True:
        if n > max_terms:
            raise SlowConvergence(f"normal series needs more than {max_terms} terms (sigma={sigma})")
        mag = math.exp(_normal_term_log(n, log_a))
        total += -mag if n % 2 else mag
        abs_sum += mag
        nxt = math.exp(_normal_term_log(n + 1, log_a))
        if n + 1 >= a and nxt < tol:
            break
        n += 1
    if abs_sum * np.finfo(float).eps > _CANCELLATION_LIMIT:
        raise SlowConvergence(
            f"normal series loses precision to cancellation for sigma={sigma}"
        )
    return SeriesResult(total, nxt, n + 1)


def dmim_normal_approx_exp(sigma: float) -> float:
    """``exp(-1/(2 sqrt(pi) sigma))``, accurate to 1% already for sigma > 1."""
    return math.exp(-1.0 / (2.0 * _SQRT_PI * sigma))


def dmim_normal_approx_linear(sigma: float) -> float:
    """``1 - 1/(2 sqrt(pi) sigma)``.

    A large-sigma approximation only; it is returned unclamped and goes
    negative for ``sigma < 1/(2 sqrt(pi))``.
    """
    return 1.0 - 1.0 / (2.0 * _SQRT_PI * sigma)


def dmim_quadrature(spec: DistributionSpec, full_output: bool = False):
    """DMIM straight from its defining integral.

    Returns the value, or the whole :class:`QuadratureResult` when
    ``full_output`` is set.
    """
    pdf = spec.pdf

    def integrand(x):
        fx = pdf(x)
        return fx * np.exp(-fx)

    result = spec.quad(integrand)
    return result if full_output else float(result.value)


def dmim(spec: DistributionSpec) -> float:
    """DMIM of any supported distribution, in ``[0, 1]``.

    Closed forms for uniform and exponential, the alternating series for the
    normal (quadrature if sigma is so small that the series cancels
    catastrophically), quadrature for custom densities.
    """
    if isinstance(spec, Uniform):
        return dmim_uniform(spec.a, spec.b)
    if isinstance(spec, Exponential):
        return dmim_exponential(spec.lam)
    if isinstance(spec, Normal):
        try:
            return dmim_normal_series(spec.sigma).value
        except SlowConvergence:
            return min(1.0, max(0.0, dmim_quadrature(spec)))
    if isinstance(spec, Custom):
        # 0 <= f e^{-f} <= f, so anything outside [0, 1] is quadrature noise
        return min(1.0, max(0.0, dmim_quadrature(spec)))
    raise InvalidParams(f"not a distribution spec: {spec!r}")


def renyi_entropy(spec: DistributionSpec, alpha: float) -> float:
    """Differential Renyi entropy ``ln(int f^alpha) / (1 - alpha)``."""
    if not alpha > 0 or alpha == 1:
        raise InvalidAlpha(f"alpha must be positive and != 1, got {alpha}")
    try:
        log_int = spec.log_power_integral(alpha)
    except QuadratureFailure as exc:
        raise DivergentIntegral(f"int f^{alpha} did not converge") from exc
    if not math.isfinite(log_int):
        raise DivergentIntegral(f"int f^{alpha} is not finite and positive")
    return log_int / (1.0 - alpha)


def truncation_bound(epsilon: float, m: int | None = None) -> float:
    """Bound on the DMIM series remainder after the first ``m`` terms.

    ``epsilon`` must bound ``int f^(n+1)`` for every ``n >= m``.  Without
    ``m`` the crude bound ``e * epsilon`` is returned; with ``m`` the sharper
    ``(sum_{n>=m} 1/n!) * epsilon``, which is ``(e - 2) * epsilon`` for m=2.
    """
    if not epsilon >= 0:
        raise InvalidParams("epsilon must be nonnegative")
    if m is None:
        return math.e * epsilon
    if m < 1:
        raise InvalidParams("m must be a positive integer")
    head = sum(1.0 / math.factorial(k) for k in range(m))
    return max(math.e - head, 0.0) * epsilon


def power_tail_sup(spec: DistributionSpec, m: int) -> float:
    """``sup_{n>=m} int f^(n+1)``, or ``inf`` when it cannot be bounded.

    If the density never exceeds one, ``int f^(n+1)`` decreases in ``n`` and
    the supremum is attained at ``n = m``.  Custom densities without a known
    peak are probed at ``m`` and ``m + 1`` and assumed monotone after that.
    """
    peak = getattr(spec, "peak_density", None)
    if peak is not None:
        return spec.power_integral(m + 1) if peak <= 1.0 else math.inf
    first = spec.power_integral(m + 1)
    second = spec.power_integral(m + 2)
    return first if second <= first else math.inf


def dmim_via_renyi_series(spec: DistributionSpec, m: int) -> SeriesResult:
    """Partial sum ``1 + sum_{n=1}^{m-1} (-1)^n/n! exp(-n h_{n+1})``.

    The certificate is ``e * sup_{n>=m} int f^(n+1)``, infinite when the
    density exceeds one somewhere.
    """
    if m < 1 or int(m) != m:
        raise InvalidParams("m must be a positive integer")
    total = 1.0
    for n in range(1, m):
        h = renyi_entropy(spec, n + 1)
        term = math.exp(-n * h - math.lgamma(n + 1))
        total += -term if n % 2 else term
    return SeriesResult(total, truncation_bound(power_tail_sup(spec, m)), m)
