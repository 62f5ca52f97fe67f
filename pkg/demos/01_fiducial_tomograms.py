"""Spin-1/2 tomograms of the six Pauli eigenstates.

Each state is a point on the Bloch sphere; its tomogram w(+1/2; theta, phi)
is the probability of finding the spin "up" along the direction
(theta, phi).  For a pure state along n the answer is (1 + n . m)/2 where
m is the measurement direction, so every surface below is a tilted cosine.
"""

import numpy as np

from spintomo import EulerAngles, density_from_spinor, fiducial, forward_point

directions = [(0.0, 0.0), (np.pi / 2, 0.0), (np.pi / 2, np.pi / 2), (np.pi, 0.0)]

print("state   " + "  ".join(f"th={t:4.2f},ph={p:4.2f}" for t, p in directions))
for name in ("x+", "x-", "y+", "y-", "z+", "z-"):
    rho = density_from_spinor(fiducial(name))
    row = [forward_point(rho, EulerAngles(p, t))[0] for t, p in directions]
    print(f"{name:6s}  " + "  ".join(f"{w:15.6f}" for w in row))

# along its own axis a pure state is measured "up" with certainty
for name, (t, p) in {"x+": (np.pi / 2, 0.0), "y-": (np.pi / 2, 3 * np.pi / 2)}.items():
    w = forward_point(density_from_spinor(fiducial(name)), EulerAngles(p, t))[0]
    print(f"w(+1/2) for {name} along its own axis: {w:.15f}")
