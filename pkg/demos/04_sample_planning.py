"""
Sizing a sample with the DMIM deviation
=======================================

Pick how far the finite-sample relative importance may sit from its
limit (epsilon) and the confidence beta.  The planner returns the
sample count n and the KS deviation d with P{D_n > d} < beta.
"""

import numpy as np

from dmim import Normal, beta_from, gamma_n, dmim, epsilon_from, make_plan

plan = make_plan(Normal(0, 1), epsilon=0.01, beta=0.05)
print(plan)
print("analytic tail bound at (n, d):", plan.tail_bound)
print("count using l(X) in the log:  ", plan.n_sharp)

# n grows like 1/epsilon^2 and shrinks like 1/sigma^2
for eps in (0.04, 0.02, 0.01, 0.005):
    print(f"eps={eps:<6} n(sigma=1)={make_plan(Normal(0, 1), eps, 0.05).n:>7}"
          f"  n(sigma=2)={make_plan(Normal(0, 2), eps, 0.05).n:>6}")

# The three quantities are tied together: fix two, get the third.
d = plan.d
print("epsilon back from (d, beta):", epsilon_from(d, 0.05, 1.0))
print("beta back from (d, epsilon):", beta_from(d, 0.01, 1.0))
print("beta for a tiny d (no guarantee, > 1):", beta_from(1e-4, 0.01, 1.0))

# gamma(n) climbs quickly then flattens towards 1/l(X)
l_X = dmim(Normal(0, 1))
for n in np.geomspace(1, 1e5, 6).astype(int):
    print(f"gamma({n:>6}) = {gamma_n(n, 1.0, l_X):.6f}   limit {1 / l_X:.6f}")
