"""
How good are the cheap normal approximations?
=============================================

Keeping the first terms of the normal series gives

    l ~ exp(-1 / (2 sqrt(pi) sigma))    and    l ~ 1 - 1 / (2 sqrt(pi) sigma).

Both errors shrink like 1/sigma^2, but with different constants:
about 0.077 c^2 for the exponential form and 0.577 c^2 for the linear one
(c = 1/(2 sqrt(pi) sigma)), so the exponential form is roughly 7.5 times
more accurate everywhere and the two curves never cross.
"""

import numpy as np

from dmim.cli import fig1_rows

print(f"{'sigma':>8} {'rel err exp':>14} {'rel err linear':>15} {'ratio':>7}")
for sigma, e_exp, e_lin in fig1_rows(np.geomspace(0.5, 20, 15)):
    print(f"{sigma:8.3f} {e_exp:14.3e} {e_lin:15.3e} {e_lin / e_exp:7.2f}")

# where does each error drop below 1%?
grid = np.geomspace(0.3, 10, 4000)
rows = np.array(list(fig1_rows(grid)))
for col, name in ((1, "exp"), (2, "linear")):
    first = grid[np.argmax(rows[:, col] < 0.01)]
    print(f"{name:>6} form under 1% from sigma ~ {first:.3f}")
