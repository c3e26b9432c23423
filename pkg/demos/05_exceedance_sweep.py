"""
Monte Carlo: P{D_n > d} as the DMIM deviation grows
===================================================

With d fixed at 0.01, a small epsilon means a large n, and the empirical
CDF almost never strays past d.  As epsilon grows n shrinks and the
exceedance probability climbs to one.  The three phases (flat near zero,
a sharp rise, flat near one) appear for every family.

D_n only depends on F(X_i), so with inverse-CDF sampling the uniform and
exponential curves coincide draw for draw; the normal uses Box-Muller and
differs only by noise.

Set DMIM_THREADS to control the worker count; results do not change.
"""

import numpy as np

from dmim import Exponential, Normal, SimConfig, Uniform, estimate_exceedance

TRIALS = 300  # the full-size run uses 10000
grid = tuple(np.geomspace(1e-3, 1e-1, 11))

curves = {}
for spec in (Uniform.from_std(1.0), Normal(0, 1), Exponential.from_std(1.0)):
    reports = estimate_exceedance(SimConfig(spec, grid, d=0.01, trials=TRIALS))
    curves[spec.name] = reports

print(f"{'epsilon':>9} {'n':>7} " + " ".join(f"{k:>12}" for k in curves))
for i, eps in enumerate(grid):
    n = curves["normal"][i].n
    cells = " ".join(f"{curves[k][i].exceedance_estimate:12.3f}" for k in curves)
    print(f"{eps:9.5f} {n:7d} {cells}")
