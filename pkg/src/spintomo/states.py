"""Spin states: spinors, density matrices, Bloch vectors.

Components are ordered m = j, j-1, ..., -j, so a spin-1/2 spinor ``(a, b)``
has ``a = psi(+1/2)`` on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_FIDUCIALS = {
    "x+": (_SQRT_HALF, _SQRT_HALF),
    "x-": (_SQRT_HALF, -_SQRT_HALF),
    "y+": (_SQRT_HALF, 1j * _SQRT_HALF),
    "y-": (_SQRT_HALF, -1j * _SQRT_HALF),
    "z+": (1.0, 0.0),
    "z-": (0.0, 1.0),
}


def _dim_to_twice_j(n: int) -> int:
    if n < 1:
        raise ValidationError("state must have at least one component")
    return n - 1


@dataclass(frozen=True, eq=False)
class Spinor:
    """Normalized pure-state amplitudes."""

    twice_j: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.size != self.twice_j + 1:
            raise ValidationError(
                f"expected {self.twice_j + 1} amplitudes for twice_j={self.twice_j}, got {amps.size}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-12:
            raise ValidationError(f"spinor not normalized: |psi|^2 = {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "Spinor":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ValidationError("zero vector cannot be normalized")
            amps = amps / norm
        return cls(_dim_to_twice_j(amps.size), amps)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix for spin ``j``."""

    twice_j: int
    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        validate_density(rho, self.twice_j)
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @classmethod
    def from_matrix(cls, matrix) -> "DensityMatrix":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(_dim_to_twice_j(matrix.shape[0]), matrix)

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def validate_density(rho: np.ndarray, twice_j: int) -> None:
    """Raise :class:`ValidationError` unless ``rho`` is a valid density matrix."""
    n = twice_j + 1
    if rho.shape != (n, n):
        raise ValidationError(f"expected shape {(n, n)} for twice_j={twice_j}, got {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValidationError("density matrix has non-finite entries")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITIAN_TOL:
        raise ValidationError(f"not Hermitian (residual {herm:.3g})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError(f"trace is {tr.real:.17g}, expected 1")
    lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lam_min < -PSD_TOL:
        raise ValidationError(f"not positive semidefinite (min eigenvalue {lam_min:.3g})")


@dataclass(frozen=True)
class BlochVector:
    """Mean spin projections of a spin-1/2 state; ``|s| <= 1/2``."""

    sx: float
    sy: float
    sz: float

    def __post_init__(self):
        r2 = self.sx**2 + self.sy**2 + self.sz**2
        if r2 > 0.25 + 1e-12:
            raise ValidationError(f"|s|^2 = {r2:.6g} exceeds 1/4")


def density_from_spinor(psi: Spinor) -> DensityMatrix:
    """Pure-state projector ``rho[m, m'] = psi(m) conj(psi(m'))``."""
    a = psi.amplitudes
    return DensityMatrix(psi.twice_j, np.outer(a, a.conj()))


def density_from_bloch(s: BlochVector) -> DensityMatrix:
    """Spin-1/2 density matrix with diagonal ``1/2 +- sz``.

    The upper off-diagonal entry is ``sx - i sy``, which matches the pure
    state projector for a spinor pointing along ``s``.
    """
    rho = np.array(
        [[0.5 + s.sz, s.sx - 1j * s.sy],
         [s.sx + 1j * s.sy, 0.5 - s.sz]],
        dtype=complex,
    )
    return DensityMatrix(1, rho)


def bloch_from_density(rho: DensityMatrix) -> BlochVector:
    if rho.twice_j != 1:
        raise DomainError("Bloch vectors are defined for spin 1/2 only")
    r = rho.entries
    return BlochVector(float(r[1, 0].real), float(r[1, 0].imag), float((r[0, 0] - r[1, 1]).real / 2))


def purity(rho: DensityMatrix) -> float:
    r = np.asarray(rho.entries)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(r) ** 2))


def fiducial(name: str) -> Spinor:
    """One of the six spin-1/2 eigenstates of the Pauli matrices.

    ``name`` is ``"x+"``, ``"x-"``, ``"y+"``, ``"y-"``, ``"z+"`` or ``"z-"``
    (a unicode minus is accepted as well).
    """
    key = name.replace("−", "-")
    if key not in _FIDUCIALS:
        raise DomainError(f"unknown fiducial state {name!r}; expected one of {sorted(_FIDUCIALS)}")
    return Spinor(1, np.array(_FIDUCIALS[key], dtype=complex))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    lam, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(lam, 0.0, None))) @ v.conj().T


def fidelity(a: DensityMatrix, b: DensityMatrix) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(a) b sqrt(a)))**2``.

    Equals ``|<psi_a|psi_b>|^2`` when both states are pure.
    """
    ra, rb = np.asarray(a.entries), np.asarray(b.entries)
    if ra.shape != rb.shape:
        raise ValidationError(f"dimension mismatch: {ra.shape} vs {rb.shape}")
    sa = _psd_sqrt(ra)
    inner = sa @ rb @ sa
    lam = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    f = float(np.sum(np.sqrt(np.clip(lam, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def random_density(twice_j: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random density matrix ``G G^dagger / Tr`` with complex Gaussian ``G``.

    ``rank`` defaults to full rank; ``rank=1`` gives a random pure state.
    """
    n = twice_j + 1
    k = n if rank is None else rank
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(twice_j, rho / np.trace(rho).real)


def random_bloch(rng: np.random.Generator) -> BlochVector:
    """Bloch vector uniform in the ball of radius 1/2."""
    v = rng.standard_normal(3)
    v *= 0.5 * rng.uniform() ** (1 / 3) / np.linalg.norm(v)
    return BlochVector(*map(float, v))
