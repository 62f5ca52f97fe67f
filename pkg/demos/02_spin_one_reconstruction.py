"""Recovering a spin-1 density matrix from its tomogram.

The state |m=+1><m=+1| gives three outcome probabilities that depend only on
theta.  Sampling them on a product grid of Euler angles and running the
inversion sum gives the matrix back to rounding error, both with the full
sum over (k, l) and with the l = 0 terms alone.
"""

import numpy as np

from spintomo import DensityMatrix, build_grid, forward_tomogram, reconstruct
from spintomo.tomogram import reconstruct_axial

rho = DensityMatrix(2, np.diag([1.0, 0.0, 0.0]))
grid = build_grid(2)
tomo = forward_tomogram(rho, grid)
print(f"grid {grid.shape}, {grid.size} points")

theta = grid.theta
values = tomo.values.reshape(3, *grid.shape)[:, :, 0, 0]
c = np.cos(theta)
print("theta     w(+1)     (1+c)^2/4   w(0)      (1-c^2)/2   w(-1)     (1-c)^2/4")
for k, t in enumerate(theta):
    print(f"{t:7.4f}  {values[0, k]:9.6f}  {(1 + c[k])**2 / 4:9.6f}  {values[1, k]:9.6f}  "
          f"{(1 - c[k]**2) / 2:9.6f}  {values[2, k]:9.6f}  {(1 - c[k])**2 / 4:9.6f}")

full = reconstruct(tomo)
axial = reconstruct_axial(tomo)
np.set_printoptions(precision=3, suppress=True)
print("reconstructed:\n", full.real)
print("max |full - rho|  =", np.max(np.abs(full - rho.entries)))
print("max |axial - rho| =", np.max(np.abs(axial - rho.entries)))
