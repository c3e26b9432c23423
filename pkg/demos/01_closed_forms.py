"""
DMIM of three textbook distributions
====================================

l(X) is the integral of f e^{-f}.  For the uniform and exponential
families it has a closed form; for the normal it is an alternating
series.  Quadrature of the definition agrees with all three.
"""

import math

from dmim import (
    Exponential,
    Normal,
    Uniform,
    dmim_exponential,
    dmim_normal_series,
    dmim_quadrature,
    dmim_uniform,
)

# uniform on [a, b]: exp(-1/(b-a)), so only the width matters
for a, b in [(0, 1), (5, 6), (0, 10)]:
    print(f"uniform[{a},{b}]   closed {dmim_uniform(a, b):.15f}   quad {dmim_quadrature(Uniform(a, b)):.15f}")

# exponential: (1 - e^{-lam}) / lam
for lam in (0.1, 1.0, 2.0):
    print(f"exponential({lam})  closed {dmim_exponential(lam):.15f}   quad {dmim_quadrature(Exponential(lam)):.15f}")

# normal: the series comes with a certificate on the dropped tail
for sigma in (0.5, 1.0, 10.0):
    r = dmim_normal_series(sigma)
    q = dmim_quadrature(Normal(0, sigma))
    print(f"normal(sigma={sigma})  series {r.value:.15f} (+-{r.truncation_bound:.1e}, {r.terms_used} terms)   quad {q:.15f}")

# A narrow density has almost no "importance" mass; a wide one tends to 1.
print("width 1e-2:", dmim_uniform(0, 1e-2), "  width 1e6:", dmim_uniform(0, 1e6))
print("e^-1 =", math.exp(-1))
