"""Seeded Monte Carlo estimates of ``P{D_n > d}`` along a DMIM-deviation sweep.

Every trial owns an independent Philox stream keyed by
``(master_seed, epsilon_index, trial_index)``, so results do not depend on
how trials are scheduled across worker threads.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distributions import Custom, DistributionSpec, Exponential, Normal, Uniform
from .errors import InvalidParams, UnsupportedFamily
from .gof import d_from, empirical_cdf, ks_statistic, ks_tail_upper_bound, required_samples
from .measures import dmim

DEFAULT_SEED = 0xD1A1_1A1D
DEFAULT_TRIALS = 10_000
CHUNK = 64


class NRule(str, enum.Enum):
    DISTRIBUTION_FREE = "distribution-free"
    WITH_LX = "with-lx"


def default_epsilon_grid(points: int = 40, lo: float = 1e-3, hi: float = 1e-1) -> tuple[float, ...]:
    return tuple(float(e) for e in np.geomspace(lo, hi, points))


@dataclass(frozen=True)
class SimConfig:
    """One sweep over DMIM deviations.

    Give either ``d`` (fixed KS deviation) or ``beta`` (``d`` derived per
    epsilon from the ternary relation).
    """

    spec: DistributionSpec
    epsilon_grid: tuple[float, ...] = field(default_factory=default_epsilon_grid)
    d: float | None = None
    beta: float | None = None
    trials: int = DEFAULT_TRIALS
    master_seed: int = DEFAULT_SEED
    n_rule: NRule = NRule.DISTRIBUTION_FREE

    def __post_init__(self):
        object.__setattr__(self, "epsilon_grid", tuple(float(e) for e in self.epsilon_grid))
        object.__setattr__(self, "n_rule", NRule(self.n_rule))
        if isinstance(self.spec, Custom):
            raise UnsupportedFamily("sampling from custom densities is not supported")
        if (self.d is None) == (self.beta is None):
            raise InvalidParams("give exactly one of d or beta")
        if self.d is not None and not self.d > 0:
            raise InvalidParams("d must be positive")
        if not self.epsilon_grid or not all(0 < e < 1 for e in self.epsilon_grid):
            raise InvalidParams("epsilon_grid must be non-empty with values in (0, 1)")
        if int(self.trials) != self.trials or self.trials < 1:
            raise InvalidParams("trials must be a positive integer")
        if not 0 <= self.master_seed < 2**64:
            raise InvalidParams("master_seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class TrialReport:
    epsilon: float
    n: int
    d: float
    exceedance_estimate: float
    trials: int
    std_error: float
    seed: int


def trial_seed(master_seed: int, eps_index: int, trial_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master_seed, spawn_key=(eps_index, trial_index))


def _generator(seed) -> np.random.Generator:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def sample(spec: DistributionSpec, n: int, seed) -> np.ndarray:
    """``n`` i.i.d. draws, bit-for-bit reproducible for a given seed.

    Uniform and exponential use the inverse CDF; the normal uses the
    Box-Muller transform.  All three consume the same uniform stream.
    """
    if n < 1:
        raise InvalidParams("n must be positive")
    if isinstance(spec, Custom):
        raise UnsupportedFamily("sampling from custom densities is not supported")
    gen = _generator(seed)
    if isinstance(spec, Uniform):
        return spec.a + spec.width * gen.random(n)
    if isinstance(spec, Exponential):
        return -np.log1p(-gen.random(n)) / spec.lam
    if isinstance(spec, Normal):
        m = (n + 1) // 2
        u = gen.random(2 * m).reshape(m, 2)
        radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        angle = 2.0 * np.pi * u[:, 1]
        z = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)]).ravel()[:n]
        return spec.mu + spec.sigma * z
    raise UnsupportedFamily(f"cannot sample from {spec!r}")


def ks_trial(spec: DistributionSpec, n: int, seed) -> float:
    """D_n of one simulated sample against the true CDF."""
    return ks_statistic(empirical_cdf(sample(spec, n, seed)), spec.cdf)


def _count_exceed(spec, n, d, master_seed, eps_index, trials) -> int:
    hits = 0
    for t in trials:
        if ks_trial(spec, n, trial_seed(master_seed, eps_index, t)) > d:
            hits += 1
    return hits


def default_workers() -> int:
    env = os.environ.get("DMIM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidParams(f"DMIM_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _plan_points(config: SimConfig):
    sigma = config.spec.std
    l_X = dmim(config.spec) if config.n_rule is NRule.WITH_LX else None
    for eps in config.epsilon_grid:
        n = required_samples(eps, sigma, l_X)
        d = config.d if config.d is not None else d_from(eps, config.beta, sigma)
        yield eps, n, d


def estimate_exceedance(config: SimConfig, workers: int | None = None) -> list[TrialReport]:
    """Fraction of trials with ``D_n > d`` for each epsilon in the grid."""
    workers = default_workers() if workers is None else max(1, int(workers))
    points = list(_plan_points(config))
    jobs = []
    for i, (eps, n, d) in enumerate(points):
        for start in range(0, config.trials, CHUNK):
            chunk = range(start, min(start + CHUNK, config.trials))
            jobs.append((i, (config.spec, n, d, config.master_seed, i, chunk)))

    hits = [0] * len(points)
    if workers == 1:
        for i, args in jobs:
            hits[i] += _count_exceed(*args)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [(i, pool.submit(_count_exceed, *args)) for i, args in jobs]
            for i, fut in futures:
                hits[i] += fut.result()

    reports = []
    for (eps, n, d), h in zip(points, hits):
        p = h / config.trials
        reports.append(TrialReport(
            epsilon=eps,
            n=n,
            d=d,
            exceedance_estimate=p,
            trials=config.trials,
            std_error=math.sqrt(p * (1.0 - p) / config.trials),
            seed=config.master_seed,
        ))
    return reports


@dataclass(frozen=True)
class Theorem2Check:
    estimate: float
    std_error: float
    bound: float  # analytic upper bound on P{D_n > d} at the planned (n, d)
    beta: float
    n: int
    d: float
    holds: bool


def verify_theorem2(
    spec: DistributionSpec,
    epsilon: float,
    beta: float,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
) -> Theorem2Check:
    """Empirical check that ``P{D_n > d} < beta`` at the planned ``(n, d)``.

    ``holds`` is the conservative test ``estimate + 3 * std_error < beta``.
    """
    config = SimConfig(spec, (epsilon,), beta=beta, trials=trials, master_seed=seed)
    (report,) = estimate_exceedance(config, workers)
    return Theorem2Check(
        estimate=report.exceedance_estimate,
        std_error=report.std_error,
        bound=ks_tail_upper_bound(report.n, report.d),
        beta=beta,
        n=report.n,
        d=report.d,
        holds=report.exceedance_estimate + 3.0 * report.std_error < beta,
    )
