"""Product quadrature over Euler angles.

Gauss-Legendre nodes in ``cos(theta)`` times uniform (trapezoidal) nodes in
``phi`` and ``psi``.  Weights include the ``sin(theta)`` Jacobian, so the sum
of all weights is ``8 pi^2``, the volume of the rotation group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ValidationError

GROUP_VOLUME = 8.0 * math.pi**2


def min_sizes(twice_j: int) -> tuple[int, int, int]:
    """Smallest ``(n_theta, n_phi, n_psi)`` that are exact for spin ``j``."""
    return twice_j + 2, 2 * twice_j + 1, 2 * twice_j + 1


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Immutable Euler-angle product grid.

    Points are enumerated theta-major, then phi, then psi; every array
    returned by :meth:`points` and :attr:`weights` follows that order.
    """

    theta: np.ndarray
    theta_weights: np.ndarray
    n_phi: int
    n_psi: int
    twice_j_design: int

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        tw = np.array(self.theta_weights, dtype=float)
        if theta.ndim != 1 or theta.shape != tw.shape:
            raise ValidationError("theta nodes and weights must be 1-D and equal length")
        n_theta_min, n_phi_min, n_psi_min = min_sizes(self.twice_j_design)
        if theta.size < n_theta_min or self.n_phi < n_phi_min or self.n_psi < n_psi_min:
            raise ValidationError(
                f"grid ({theta.size}, {self.n_phi}, {self.n_psi}) too small for "
                f"twice_j={self.twice_j_design}; need at least "
                f"({n_theta_min}, {n_phi_min}, {n_psi_min})"
            )
        theta.setflags(write=False)
        tw.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "theta_weights", tw)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.theta.size, self.n_phi, self.n_psi

    @property
    def size(self) -> int:
        return self.theta.size * self.n_phi * self.n_psi

    @property
    def phi(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi

    @property
    def psi(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.n_psi) / self.n_psi

    def points(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flattened ``(phi, theta, psi)`` arrays of length :attr:`size`."""
        th, ph, ps = np.meshgrid(self.theta, self.phi, self.psi, indexing="ij")
        return ph.ravel(), th.ravel(), ps.ravel()

    @property
    def weights(self) -> np.ndarray:
        w = (
            self.theta_weights[:, None, None]
            * np.full((1, self.n_phi, 1), 2.0 * math.pi / self.n_phi)
            * np.full((1, 1, self.n_psi), 2.0 * math.pi / self.n_psi)
        )
        return w.ravel()

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        """The distinct measurement axes ``(theta, phi)``, theta-major."""
        th, ph = np.meshgrid(self.theta, self.phi, indexing="ij")
        return th.ravel(), ph.ravel()

    def same_as(self, other: "QuadratureGrid") -> bool:
        return (
            self.n_phi == other.n_phi
            and self.n_psi == other.n_psi
            and self.theta.shape == other.theta.shape
            and np.array_equal(self.theta, other.theta)
            and np.array_equal(self.theta_weights, other.theta_weights)
        )


def build_grid(twice_j: int, n_theta: Optional[int] = None,
               n_phi: Optional[int] = None, n_psi: Optional[int] = None) -> QuadratureGrid:
    """Grid exact for tomographic integrands of spin ``j = twice_j / 2``.

    Defaults are ``4j + 2`` points along each angle.
    """
    if twice_j < 0:
        raise ValidationError(f"twice_j must be non-negative, got {twice_j}")
    default = 2 * twice_j + 2
    n_theta = default if n_theta is None else n_theta
    n_phi = default if n_phi is None else n_phi
    n_psi = default if n_psi is None else n_psi
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    # descending x -> ascending theta
    order = np.argsort(-x)
    return QuadratureGrid(np.arccos(x[order]), wx[order], n_phi, n_psi, twice_j)


def grid_from_sizes(n_theta: int, n_phi: int, n_psi: int) -> QuadratureGrid:
    """Grid with explicit sizes; its design spin is the largest one they support."""
    twice_j = min(n_theta - 2, (n_phi - 1) // 2, (n_psi - 1) // 2)
    if twice_j < 0:
        raise ValidationError(f"grid sizes too small: {(n_theta, n_phi, n_psi)}")
    return build_grid(twice_j, n_theta, n_phi, n_psi)


def integrate_values(grid: QuadratureGrid, values) -> np.ndarray:
    """Weighted sum over the last axis of ``values`` (one entry per grid point)."""
    values = np.asarray(values)
    if values.shape[-1] != grid.size:
        raise ValidationError(
            f"expected {grid.size} values along the last axis, got {values.shape[-1]}"
        )
    return (values * grid.weights).sum(axis=-1)


def integrate(grid: QuadratureGrid, f: Callable) -> complex:
    """Integrate ``f(phi, theta, psi)`` over the rotation group.

    ``f`` receives flattened point arrays and must return one value per
    point.  The measure is ``sin(theta) dtheta dphi dpsi`` (total ``8 pi^2``).
    """
    phi, theta, psi = grid.points()
    values = np.broadcast_to(np.asarray(f(phi, theta, psi)), phi.shape)
    result = integrate_values(grid, values)
    return complex(result) if np.iscomplexobj(result) else float(result)
