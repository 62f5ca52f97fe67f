"""Spin tomograms: density matrix <-> probabilities of spin projections.

The tomogram ``w(i, u)`` is the probability of measuring projection ``i``
along the axis reached by the rotation ``u``:

    w(i, u) = sum_{s, m} D_{i s}(u) rho_{s m} conj(D_{i m}(u))

It depends on (theta, phi) only.  Reconstruction integrates ``w`` against
``D^k_{0l}`` over the rotation group and contracts with 3j symbols, for
``k = 0..2j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .angular import EulerAngles, projections, three_j, wigner_D_matrix
from .errors import DomainError, ValidationError
from .quadrature import GROUP_VOLUME, QuadratureGrid, build_grid
from .states import DensityMatrix

NEGATIVE_CLAMP = 1e-12
NORMALIZATION_TOL = 1e-9

__all__ = [
    "SpinTomogram",
    "forward_closed_form_half",
    "forward_closed_form_one",
    "forward_point",
    "forward_tomogram",
    "inversion_kernel",
    "max_entry_error",
    "project_to_physical",
    "reconstruct",
    "reconstruct_axial",
]


def _clamp_probabilities(w: np.ndarray) -> np.ndarray:
    low = w.min() if w.size else 0.0
    if low < -NEGATIVE_CLAMP:
        raise ValidationError(f"negative probability {low:.3g} in tomogram")
    return np.clip(w, 0.0, None)


@dataclass(frozen=True, eq=False)
class SpinTomogram:
    """Probabilities ``values[i, p]`` for outcome row ``i`` (m = j..-j) at grid point ``p``."""

    twice_j: int
    grid: QuadratureGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        expected = (self.twice_j + 1, self.grid.size)
        if v.shape != expected:
            raise ValidationError(f"tomogram values have shape {v.shape}, expected {expected}")
        v = _clamp_probabilities(v)
        if v.max(initial=0.0) > 1.0 + NORMALIZATION_TOL:
            raise ValidationError("tomogram probability exceeds 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def normalization_residual(self) -> float:
        return float(np.max(np.abs(self.values.sum(axis=0) - 1.0)))

    def psi_residual(self) -> float:
        """Largest deviation from the psi-average at fixed (theta, phi)."""
        v = self.values.reshape((self.twice_j + 1,) + self.grid.shape)
        return float(np.max(np.abs(v - v.mean(axis=-1, keepdims=True))))

    def value(self, twice_i: int, index: int) -> float:
        row = (self.twice_j - twice_i) // 2
        return float(self.values[row, index])


def _rotated_diagonals(rho: np.ndarray, D: np.ndarray) -> np.ndarray:
    # diag(D rho D^dagger) for a stack of D matrices
    return np.einsum("gis,sm,gim->gi", D, rho, D.conj()).real


def forward_point(rho: DensityMatrix, u: EulerAngles) -> np.ndarray:
    """Outcome probabilities at one rotation, ordered i = j, ..., -j."""
    D = wigner_D_matrix(rho.twice_j, u.phi, u.theta, u.psi)
    w = _rotated_diagonals(np.asarray(rho.entries), D[None])[0]
    return _clamp_probabilities(w)


def forward_closed_form_half(rho: DensityMatrix, u: EulerAngles) -> tuple[float, float]:
    """Spin-1/2 probabilities from the explicit trigonometric expression."""
    if rho.twice_j != 1:
        raise DomainError(f"closed form requires spin 1/2, got twice_j={rho.twice_j}")
    r = rho.entries
    c2 = math.cos(0.5 * u.theta) ** 2
    s2 = math.sin(0.5 * u.theta) ** 2
    half_sin = 0.5 * math.sin(u.theta)
    e = complex(math.cos(u.phi), math.sin(u.phi))
    cross = (half_sin * e * r[0, 1] + half_sin * e.conjugate() * r[1, 0]).real
    w_up = c2 * r[0, 0].real + cross + s2 * r[1, 1].real
    w_down = s2 * r[0, 0].real - cross + c2 * r[1, 1].real
    return float(w_up), float(w_down)


def forward_closed_form_one(rho: DensityMatrix, u: EulerAngles) -> tuple[float, float, float]:
    """Spin-1 probabilities ``(w(+1), w(0), w(-1))`` from explicit trigonometry."""
    if rho.twice_j != 2:
        raise DomainError(f"closed form requires spin 1, got twice_j={rho.twice_j}")
    c, s = math.cos(u.theta), math.sin(u.theta)
    a, b, h = 0.5 * (1 + c), s / math.sqrt(2.0), 0.5 * (1 - c)
    d = np.array([[a, b, h], [-b, c, b], [h, -b, a]])
    # phase exp(i (m_s - m) phi) between columns s and m, m = 1, 0, -1
    ms = np.array([1.0, 0.0, -1.0])
    phase = np.exp(1j * u.phi * (ms[:, None] - ms[None, :]))
    r = np.asarray(rho.entries) * phase
    w = np.einsum("is,sm,im->i", d, r, d).real
    return float(w[0]), float(w[1]), float(w[2])


def forward_tomogram(rho: DensityMatrix, grid: QuadratureGrid | None = None) -> SpinTomogram:
    """Tabulate :func:`forward_point` over every point of ``grid``.

    ``grid`` defaults to :func:`build_grid` for the state's spin.
    """
    if grid is None:
        grid = build_grid(rho.twice_j)
    if grid.twice_j_design < rho.twice_j:
        raise ValidationError(
            f"grid designed for twice_j={grid.twice_j_design} cannot resolve twice_j={rho.twice_j}"
        )
    phi, theta, psi = grid.points()
    D = wigner_D_matrix(rho.twice_j, phi, theta, psi)
    w = _rotated_diagonals(np.asarray(rho.entries), D)
    return SpinTomogram(rho.twice_j, grid, w.T)


@lru_cache(maxsize=64)
def _coupling(twice_j: int) -> tuple[np.ndarray, np.ndarray]:
    """Coupling tensor ``C[i, kl, m, m']`` and the ``(k, l)`` index list.

    ``C = (2k+1)^2 (-1)^(i-m') 3j(j j k; i -i 0) 3j(j j k; m -m' l)``.
    """
    ms = projections(twice_j)
    n = ms.size
    kl = [(k, l) for k in range(twice_j + 1) for l in range(-k, k + 1)]
    C = np.zeros((n, len(kl), n, n))
    for q, (k, l) in enumerate(kl):
        pref = (2 * k + 1) ** 2
        for a, ti in enumerate(ms):
            outer = three_j(twice_j, twice_j, 2 * k, int(ti), int(-ti), 0)
            if outer == 0.0:
                continue
            for b, tm in enumerate(ms):
                tmp = int(tm) + 2 * l  # m' = m + l
                if abs(tmp) > twice_j:
                    continue
                c = (twice_j - tmp) // 2
                inner = three_j(twice_j, twice_j, 2 * k, int(tm), -tmp, 2 * l)
                sign = -1.0 if ((int(ti) - tmp) // 2) % 2 else 1.0
                C[a, q, b, c] = pref * sign * outer * inner
    C.setflags(write=False)
    return C, np.array(kl, dtype=int)


def inversion_kernel(twice_j: int, grid: QuadratureGrid) -> np.ndarray:
    """``K[kl, p] = weight_p * D^k_{0l}(u_p) / (8 pi^2)`` for ``k = 0..2j``."""
    _, kl = _coupling(twice_j)
    phi, theta, psi = grid.points()
    w = grid.weights / GROUP_VOLUME
    K = np.empty((len(kl), grid.size), dtype=complex)
    for k in range(twice_j + 1):
        D = wigner_D_matrix(2 * k, phi, theta, psi)
        rows = np.flatnonzero(kl[:, 0] == k)
        # row m'=0 sits at index k; columns l = k..-k map to index k - l
        K[rows] = D[:, k, k - kl[rows, 1]].T * w
    return K


def _check_reconstructable(tomogram: SpinTomogram) -> None:
    if tomogram.grid.twice_j_design < tomogram.twice_j:
        raise ValidationError(
            f"grid designed for twice_j={tomogram.grid.twice_j_design} is under-resolved "
            f"for twice_j={tomogram.twice_j}"
        )
    resid = tomogram.normalization_residual()
    if resid > NORMALIZATION_TOL:
        raise ValidationError(f"tomogram not normalized (max residual {resid:.3g})")


def reconstruct(tomogram: SpinTomogram, project: bool = False):
    """Recover the density matrix from a tomogram.

    Parameters
    ----------
    tomogram : SpinTomogram
        Probabilities on a grid whose design spin is at least the state's.
    project : bool
        If true, map the raw estimate to the nearest physical state with
        :func:`project_to_physical`.

    Returns
    -------
    ndarray or DensityMatrix
        The raw Hermitian matrix (exactly as produced by the inversion sum)
        when ``project`` is false, otherwise a validated ``DensityMatrix``.
    """
    _check_reconstructable(tomogram)
    C, _ = _coupling(tomogram.twice_j)
    K = inversion_kernel(tomogram.twice_j, tomogram.grid)
    integrals = tomogram.values @ K.T  # [i, kl]
    rho = np.einsum("iq,iqmn->mn", integrals, C)
    if project:
        return project_to_physical(rho)
    return rho


def reconstruct_axial(tomogram: SpinTomogram) -> np.ndarray:
    """Inversion sum restricted to ``l = 0``.

    Only valid for tomograms that do not depend on phi (states diagonal in
    m); there every ``l != 0`` integral vanishes.
    """
    _check_reconstructable(tomogram)
    C, kl = _coupling(tomogram.twice_j)
    keep = kl[:, 1] == 0
    K = inversion_kernel(tomogram.twice_j, tomogram.grid)[keep]
    integrals = tomogram.values @ K.T
    return np.einsum("iq,iqmn->mn", integrals, C[:, keep])


def _project_simplex(lam: np.ndarray) -> np.ndarray:
    # Euclidean projection onto {x >= 0, sum x = 1}
    u = np.sort(lam)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, u.size + 1)
    r = np.nonzero(u - css / idx > 0)[0][-1]
    tau = css[r] / (r + 1)
    return np.clip(lam - tau, 0.0, None)


def project_to_physical(rho_raw) -> DensityMatrix:
    """Frobenius-nearest density matrix to a Hermitian matrix.

    The spectrum is shifted uniformly and clipped at zero so that it sums
    to one (projection onto the probability simplex); eigenvectors are
    kept.  Valid density matrices are returned unchanged.
    """
    m = np.asarray(getattr(rho_raw, "entries", rho_raw), dtype=complex)
    m = 0.5 * (m + m.conj().T)
    lam, v = np.linalg.eigh(m)
    p = _project_simplex(lam)
    rho = (v * p) @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(m.shape[0] - 1, rho)


def max_entry_error(a, b) -> float:
    a = np.asarray(getattr(a, "entries", a))
    b = np.asarray(getattr(b, "entries", b))
    return float(np.max(np.abs(a - b)))


def tomogram_from_values(twice_j: int, grid: QuadratureGrid, values: Sequence) -> SpinTomogram:
    return SpinTomogram(twice_j, grid, np.asarray(values, dtype=float).reshape(twice_j + 1, grid.size))
