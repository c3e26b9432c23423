"""Continuous distributions understood by the measures and planners.

Three analytic families carry closed forms for their CDF, moments and the
power integrals ``int f(x)**alpha dx``.  :class:`Custom` wraps any density
callback and falls back on quadrature for everything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy import special

from .errors import InvalidParams, QuadratureFailure, UnsupportedFamily
from .quadrature import Interval, QuadratureResult, integrate

SQRT3 = math.sqrt(3.0)
NORMALIZATION_TOL = 1e-8


class _Family:
    """Shared behaviour; subclasses provide pdf, support and quadrature hints."""

    name = "abstract"

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    def _hints(self) -> dict:
        return {}

    def quad(self, fn: Callable, abs_tol=1e-13, rel_tol=1e-11) -> QuadratureResult:
        """Integrate ``fn(x)`` over the support with family-aware breakpoints."""
        return integrate(fn, self.support, abs_tol, rel_tol, **self._hints())

    def power_integral(self, alpha: float) -> float:
        """``int f(x)**alpha dx`` over the support."""
        return math.exp(self.log_power_integral(alpha))

    def log_power_integral(self, alpha: float) -> float:
        pdf = self.pdf
        value = self.quad(lambda x: pdf(x) ** alpha).value
        return math.log(value) if value > 0 else -math.inf

    def cdf(self, x):
        raise UnsupportedFamily(f"no CDF available for {self.name} distributions")

    def ppf(self, u):
        raise UnsupportedFamily(f"no quantile function for {self.name} distributions")


@dataclass(frozen=True)
class Uniform(_Family):
    a: float
    b: float

    name = "uniform"

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise InvalidParams(f"uniform needs finite a < b, got a={self.a}, b={self.b}")

    @classmethod
    def from_std(cls, sigma: float, mean: float = 0.0) -> "Uniform":
        """Uniform with the given standard deviation (width ``2*sqrt(3)*sigma``)."""
        if not sigma > 0:
            raise InvalidParams("sigma must be positive")
        half = SQRT3 * sigma
        return cls(mean - half, mean + half)

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def support(self) -> Interval:
        return Interval(self.a, self.b)

    @property
    def mean(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def variance(self) -> float:
        return self.width**2 / 12.0

    @property
    def peak_density(self) -> float:
        return 1.0 / self.width

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.a) & (x <= self.b), 1.0 / self.width, 0.0)

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.a) / self.width, 0.0, 1.0)

    def ppf(self, u):
        return self.a + self.width * np.asarray(u, dtype=float)

    def log_power_integral(self, alpha: float) -> float:
        return (1.0 - alpha) * math.log(self.width)

    def shifted(self, c: float) -> "Uniform":
        return Uniform(self.a + c, self.b + c)


@dataclass(frozen=True)
class Normal(_Family):
    mu: float = 0.0
    sigma: float = 1.0

    name = "normal"

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidParams(f"normal needs finite mu and sigma > 0, got sigma={self.sigma}")

    @classmethod
    def from_std(cls, sigma: float, mean: float = 0.0) -> "Normal":
        return cls(mean, sigma)

    @property
    def support(self) -> Interval:
        return Interval(-math.inf, math.inf)

    @property
    def mean(self) -> float:
        return self.mu

    @property
    def variance(self) -> float:
        return self.sigma**2

    @property
    def peak_density(self) -> float:
        return 1.0 / math.sqrt(2.0 * math.pi * self.sigma**2)

    def _hints(self):
        s = self.sigma
        return {"points": [self.mu - 8 * s, self.mu, self.mu + 8 * s], "scale": s}

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return np.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * self.sigma)

    def cdf(self, x):
        return special.ndtr((np.asarray(x, dtype=float) - self.mu) / self.sigma)

    def ppf(self, u):
        return self.mu + self.sigma * special.ndtri(np.asarray(u, dtype=float))

    def log_power_integral(self, alpha: float) -> float:
        # int phi^alpha = alpha^(-1/2) * (2 pi sigma^2)^((1 - alpha)/2)
        return -0.5 * math.log(alpha) + 0.5 * (1.0 - alpha) * math.log(2.0 * math.pi * self.sigma**2)

    def shifted(self, c: float) -> "Normal":
        return Normal(self.mu + c, self.sigma)


@dataclass(frozen=True)
class Exponential(_Family):
    lam: float

    name = "exponential"

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise InvalidParams(f"exponential needs lambda > 0, got {self.lam}")

    @classmethod
    def from_std(cls, sigma: float) -> "Exponential":
        """Rate ``1/sigma``: mean and standard deviation both equal ``sigma``."""
        if not sigma > 0:
            raise InvalidParams("sigma must be positive")
        return cls(1.0 / sigma)

    @property
    def support(self) -> Interval:
        return Interval(0.0, math.inf)

    @property
    def mean(self) -> float:
        return 1.0 / self.lam

    @property
    def variance(self) -> float:
        return 1.0 / self.lam**2

    @property
    def peak_density(self) -> float:
        return self.lam

    def _hints(self):
        return {"points": [8.0 / self.lam], "scale": 1.0 / self.lam}

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, self.lam * np.exp(-self.lam * np.maximum(x, 0.0)), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return -np.expm1(-self.lam * np.maximum(x, 0.0))

    def ppf(self, u):
        return -np.log1p(-np.asarray(u, dtype=float)) / self.lam

    def log_power_integral(self, alpha: float) -> float:
        # int (lam e^{-lam x})^alpha dx = lam^(alpha - 1) / alpha
        return (alpha - 1.0) * math.log(self.lam) - math.log(alpha)

    def shifted(self, c: float) -> "Custom":
        lam = self.lam
        return Custom(
            lambda x: self.pdf(np.asarray(x, dtype=float) - c),
            Interval(c, math.inf),
            mean=c + 1.0 / lam,
            variance=1.0 / lam**2,
        )


@dataclass(frozen=True, eq=False)
class Custom(_Family):
    """Arbitrary density on a declared support.

    The density is checked to integrate to one on construction.  Missing
    moments are filled in by quadrature; they stay ``None`` when the
    corresponding integral does not converge (e.g. Cauchy-like tails).
    ``density`` should accept numpy arrays; scalar-only callables work but
    are slower.
    """

    density: Callable
    support: Interval
    mean: float | None = None
    variance: float | None = None
    peak_density: float | None = field(default=None, repr=False)

    name = "custom"

    def __post_init__(self):
        if not isinstance(self.support, Interval):
            object.__setattr__(self, "support", Interval(*self.support))
        if self.variance is not None and not self.variance > 0:
            raise InvalidParams("variance must be positive")
        pts = [self.mean] if self.mean is not None else None
        total = integrate(self.density, self.support, 1e-12, 1e-10, points=pts)
        if abs(total.value - 1.0) > NORMALIZATION_TOL:
            raise InvalidParams(f"density integrates to {total.value!r}, not 1")
        if self.mean is None:
            object.__setattr__(self, "mean", self._moment(lambda x: x * self.density(x), pts))
        if self.variance is None and self.mean is not None:
            m = self.mean
            var = self._moment(lambda x: (x - m) ** 2 * self.density(x), [m])
            object.__setattr__(self, "variance", var if var and var > 0 else None)

    def _moment(self, fn, pts):
        try:
            return integrate(fn, self.support, 1e-12, 1e-10, points=pts).value
        except QuadratureFailure:
            return None

    @property
    def std(self) -> float:
        if self.variance is None:
            raise InvalidParams("variance is not available for this density")
        return math.sqrt(self.variance)

    def _hints(self):
        if self.mean is None:
            return {}
        if self.variance is None:
            return {"points": [self.mean]}
        s = math.sqrt(self.variance)
        return {"points": [self.mean - 8 * s, self.mean, self.mean + 8 * s], "scale": s}

    def pdf(self, x):
        return self.density(x)

    def shifted(self, c: float) -> "Custom":
        f = self.density
        return Custom(
            lambda x: f(np.asarray(x, dtype=float) - c) if np.ndim(x) else f(x - c),
            Interval(self.support.lower + c, self.support.upper + c),
            mean=None if self.mean is None else self.mean + c,
            variance=self.variance,
        )


DistributionSpec = Union[Uniform, Normal, Exponential, Custom]

FAMILIES = {"uniform": Uniform, "normal": Normal, "exponential": Exponential}


def matched(family: str, sigma: float) -> DistributionSpec:
    """Family member with standard deviation ``sigma``.

    Uniform and normal are centred at zero; the exponential uses rate
    ``1/sigma`` and therefore has mean ``sigma``.
    """
    try:
        cls = FAMILIES[family]
    except KeyError:
        raise UnsupportedFamily(f"unknown family {family!r}") from None
    return cls.from_std(sigma)
