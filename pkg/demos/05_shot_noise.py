"""How many measurements does a tomogram need?

Real experiments estimate w(i, u) from counts.  Here a random spin-1/2
state is measured n times along each axis of the default grid; the
estimate is projected back onto physical states and compared with the
truth.  The error falls like n^(-1/2).
"""

import numpy as np

from spintomo import (
    build_grid,
    convergence_study,
    empirical_tomogram,
    fidelity,
    loglog_slope,
    random_density,
    reconstruct,
    sample_grid,
)

rng = np.random.default_rng(7)
rho = random_density(1, rng)
grid = build_grid(1)

table = convergence_study(rho, grid, [100, 1000, 10_000, 100_000], seed=11, n_seeds=5)
for n, err in table:
    print(f"{n:>8d} shots/axis   mean Frobenius error {err:.2e}")
print(f"log-log slope {loglog_slope(table):.3f}")

records = sample_grid(rho, grid, 10_000, seed=3)
est = reconstruct(empirical_tomogram(records, grid, 1), project=True)
print(f"fidelity at 10^4 shots/axis: {fidelity(rho, est):.5f}")
