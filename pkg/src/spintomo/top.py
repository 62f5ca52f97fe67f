"""Symmetric-top tomography.

States of fixed ``j`` live in the ``(2j+1)^2``-dimensional space spanned by
``|j M k>`` (``M``: projection on the space-fixed axis, ``k``: projection on
the top axis).  Density matrices are stored with four indices
``rho[M, k, M', k']``, each running j..-j.

Two independent rotations ``u`` (acting on ``M``) and ``u'`` (acting on
``k``) turn the diagonal of the rotated density matrix into a joint
probability ``w(i1, i2, u, u')``; the inversion is the single-spin formula
applied once per rotation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import EulerAngles, check_projection, wigner_D_matrix
from .errors import DomainError, ValidationError
from .quadrature import QuadratureGrid, build_grid
from .states import HERMITIAN_TOL, PSD_TOL, TRACE_TOL
from .tomogram import (
    NEGATIVE_CLAMP,
    NORMALIZATION_TOL,
    _coupling,
    inversion_kernel,
    project_to_physical,
)

__all__ = [
    "TopDensityMatrix",
    "TopParameters",
    "TopState",
    "TopTomogram",
    "top_energy",
    "top_forward_point",
    "top_forward_tomogram",
    "top_pure_state",
    "top_reconstruct",
]


@dataclass(frozen=True)
class TopParameters:
    inertia_a: float
    inertia_c: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("inertia_a", "inertia_c", "hbar"):
            value = getattr(self, name)
            if not (value > 0 and np.isfinite(value)):
                raise ValidationError(f"{name} must be positive, got {value!r}")


def top_energy(twice_j: int, twice_k: int, p: TopParameters, convention: str = "paper") -> float:
    """Rotational energy of ``|j M k>``; independent of ``M``.

    ``convention="paper"`` uses the coefficient ``(1/I_C + 1/I_A)`` on
    ``J_zeta^2``; ``"standard"`` uses the textbook ``(1/I_C - 1/I_A)``.
    """
    check_projection(twice_j, twice_k)
    if convention == "paper":
        axial = 1.0 / p.inertia_c + 1.0 / p.inertia_a
    elif convention == "standard":
        axial = 1.0 / p.inertia_c - 1.0 / p.inertia_a
    else:
        raise DomainError(f"unknown convention {convention!r}")
    j = twice_j / 2
    k = twice_k / 2
    h2 = p.hbar**2
    return h2 / (2.0 * p.inertia_a) * j * (j + 1) + 0.5 * h2 * axial * k * k


@dataclass(frozen=True, eq=False)
class TopState:
    """Stationary state ``sum_k psi0[k] |j M k>`` with fixed space projection ``M``."""

    twice_j: int
    psi0: np.ndarray
    twice_M: int

    def __post_init__(self):
        check_projection(self.twice_j, self.twice_M)
        amps = np.array(self.psi0, dtype=complex).ravel()
        if amps.size != self.twice_j + 1:
            raise ValidationError(f"psi0 needs {self.twice_j + 1} components, got {amps.size}")
        amps.setflags(write=False)
        object.__setattr__(self, "psi0", amps)

    def amplitudes(self) -> np.ndarray:
        """``psi[M', k]`` over the full ``(2j+1) x (2j+1)`` basis."""
        n = self.twice_j + 1
        out = np.zeros((n, n), dtype=complex)
        out[(self.twice_j - self.twice_M) // 2] = self.psi0
        return out


@dataclass(frozen=True, eq=False)
class TopDensityMatrix:
    twice_j: int
    entries: np.ndarray

    def __post_init__(self):
        n = self.twice_j + 1
        rho = np.array(self.entries, dtype=complex)
        if rho.shape == (n * n, n * n):
            rho = rho.reshape(n, n, n, n)
        if rho.shape != (n, n, n, n):
            raise ValidationError(f"expected shape {(n,) * 4}, got {rho.shape}")
        m = rho.reshape(n * n, n * n)
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITIAN_TOL:
            raise ValidationError(f"not Hermitian (residual {herm:.3g})")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace is {tr.real:.17g}, expected 1")
        lam_min = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
        if lam_min < -PSD_TOL:
            raise ValidationError(f"not positive semidefinite (min eigenvalue {lam_min:.3g})")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    def as_matrix(self) -> np.ndarray:
        n = self.twice_j + 1
        return self.entries.reshape(n * n, n * n)

    def purity(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))

    @classmethod
    def from_amplitudes(cls, twice_j: int, psi) -> "TopDensityMatrix":
        """Pure state from amplitudes ``psi[M, k]``, normalized to unit norm."""
        v = np.asarray(psi, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValidationError("zero-norm top state")
        v = v / norm
        return cls(twice_j, np.outer(v, v.conj()))

    @classmethod
    def product(cls, rho_space, rho_body) -> "TopDensityMatrix":
        """``rho[M,k,M',k'] = rho_space[M,M'] * rho_body[k,k']``."""
        a = np.asarray(getattr(rho_space, "entries", rho_space))
        b = np.asarray(getattr(rho_body, "entries", rho_body))
        if a.shape != b.shape:
            raise ValidationError("factors must have the same spin")
        return cls(a.shape[0] - 1, np.einsum("ac,bd->abcd", a, b))

    @classmethod
    def maximally_mixed(cls, twice_j: int) -> "TopDensityMatrix":
        n = (twice_j + 1) ** 2
        return cls(twice_j, np.eye(n) / n)


def top_pure_state(state: TopState) -> TopDensityMatrix:
    return TopDensityMatrix.from_amplitudes(state.twice_j, state.amplitudes())


def random_top_density(twice_j: int, rng: np.random.Generator, rank: int | None = None) -> TopDensityMatrix:
    n = (twice_j + 1) ** 2
    k = n if rank is None else rank
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return TopDensityMatrix(twice_j, rho / np.trace(rho).real)


def _top_diagonals(rho: np.ndarray, Du: np.ndarray, Dv: np.ndarray) -> np.ndarray:
    """``w[a, i1, b, i2]`` for stacks ``Du[a]`` (acting on M) and ``Dv[b]`` (acting on k)."""
    # rotate the space-fixed pair first: T[a, i1, p, l]
    T = np.einsum("ain,npsl,ais->aipl", Du, rho, Du.conj(), optimize=True)
    return np.einsum("bqp,aipl,bql->aibq", Dv, T, Dv.conj(), optimize=True).real


def top_forward_point(rho: TopDensityMatrix, u: EulerAngles, uprime: EulerAngles) -> np.ndarray:
    """Joint probabilities ``w[i1, i2]`` after rotations ``u`` and ``u'``."""
    tj = rho.twice_j
    Du = wigner_D_matrix(tj, u.phi, u.theta, u.psi)[None]
    Dv = wigner_D_matrix(tj, uprime.phi, uprime.theta, uprime.psi)[None]
    w = _top_diagonals(np.asarray(rho.entries), Du, Dv)[0, :, 0, :]
    if w.min() < -NEGATIVE_CLAMP:
        raise ValidationError(f"negative probability {w.min():.3g}")
    return np.clip(w, 0.0, None)


@dataclass(frozen=True, eq=False)
class TopTomogram:
    """``values[i1, i2, p, q]`` with ``p`` indexing ``grid_u`` and ``q`` indexing ``grid_uprime``."""

    twice_j: int
    grid_u: QuadratureGrid
    grid_uprime: QuadratureGrid
    values: np.ndarray

    def __post_init__(self):
        n = self.twice_j + 1
        v = np.array(self.values, dtype=float)
        expected = (n, n, self.grid_u.size, self.grid_uprime.size)
        if v.shape != expected:
            raise ValidationError(f"top tomogram has shape {v.shape}, expected {expected}")
        if v.min() < -NEGATIVE_CLAMP:
            raise ValidationError(f"negative probability {v.min():.3g} in top tomogram")
        v = np.clip(v, 0.0, None)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def normalization_residual(self) -> float:
        return float(np.max(np.abs(self.values.sum(axis=(0, 1)) - 1.0)))


def top_forward_tomogram(rho: TopDensityMatrix, grid_u: QuadratureGrid | None = None,
                         grid_uprime: QuadratureGrid | None = None) -> TopTomogram:
    tj = rho.twice_j
    grid_u = build_grid(tj) if grid_u is None else grid_u
    grid_uprime = grid_u if grid_uprime is None else grid_uprime
    for g in (grid_u, grid_uprime):
        if g.twice_j_design < tj:
            raise ValidationError(f"grid designed for twice_j={g.twice_j_design} cannot resolve twice_j={tj}")
    Du = wigner_D_matrix(tj, *grid_u.points())
    Dv = wigner_D_matrix(tj, *grid_uprime.points())
    w = _top_diagonals(np.asarray(rho.entries), Du, Dv)  # [a, i1, b, i2]
    return TopTomogram(tj, grid_u, grid_uprime, w.transpose(1, 3, 0, 2))


def top_reconstruct(tomogram: TopTomogram, project: bool = False):
    """Four-index density matrix ``rho[M, k, M', k']`` from a top tomogram.

    Returns the raw array unless ``project`` is set, in which case the
    nearest physical :class:`TopDensityMatrix` is returned.
    """
    tj = tomogram.twice_j
    for g in (tomogram.grid_u, tomogram.grid_uprime):
        if g.twice_j_design < tj:
            raise ValidationError(
                f"grid designed for twice_j={g.twice_j_design} is under-resolved for twice_j={tj}"
            )
    resid = tomogram.normalization_residual()
    if resid > NORMALIZATION_TOL:
        raise ValidationError(f"top tomogram not normalized (max residual {resid:.3g})")
    C, _ = _coupling(tj)
    Ku = inversion_kernel(tj, tomogram.grid_u)
    Kv = inversion_kernel(tj, tomogram.grid_uprime)
    # I[i1, i2, q1, q2] = sum_{p, p'} w * K1 * K2
    partial = np.einsum("abpq,xq->abpx", tomogram.values, Kv, optimize=True)
    integrals = np.einsum("abpx,yp->abyx", partial, Ku, optimize=True)
    rho = np.einsum("abyx,aymn,bxrs->mrns", integrals, C, C, optimize=True)
    if project:
        n = (tj + 1) ** 2
        flat = project_to_physical(rho.reshape(n, n))
        return TopDensityMatrix(tj, flat.entries)
    return rho
