"""Finite-shot measurement simulation.

Outcomes are drawn by inverse-CDF sampling over ``i = j, j-1, ..., -j``,
one uniform deviate per shot, from numpy's ``PCG64`` bit generator seeded
with the record's 64-bit seed.  Records for a whole grid derive their seeds
from ``SeedSequence((seed, axis_index))`` so results do not depend on the
order in which axes are processed.

The thresholds used in the tests for this module (fidelity, convergence
slope) are choices of this package, not measured reference values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .angular import EulerAngles, projections
from .errors import ValidationError
from .quadrature import QuadratureGrid
from .states import DensityMatrix
from .tomogram import SpinTomogram, forward_point, project_to_physical, reconstruct

_CHUNK = 1 << 20
_AXIS_TOL = 1e-9


@dataclass(frozen=True)
class ShotRecord:
    axis: EulerAngles
    counts: dict = field(hash=False)
    total: int
    seed: int

    def __post_init__(self):
        if self.total <= 0:
            raise ValidationError("a record needs at least one shot")
        if any(c < 0 for c in self.counts.values()):
            raise ValidationError("counts must be non-negative")
        if sum(self.counts.values()) != self.total:
            raise ValidationError("counts do not add up to total")

    def frequencies(self, twice_j: int) -> np.ndarray:
        return np.array([self.counts.get(int(m), 0) for m in projections(twice_j)], float) / self.total


def derive_seed(seed: int, index: int) -> int:
    """64-bit seed for record ``index`` of a run seeded with ``seed``."""
    ss = np.random.SeedSequence((seed % 2**64, index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _draw_counts(probs: np.ndarray, n: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed % 2**64))
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    counts = np.zeros(probs.size, dtype=np.int64)
    remaining = n
    while remaining:
        size = min(remaining, _CHUNK)
        idx = np.searchsorted(cdf, rng.random(size), side="right")
        counts += np.bincount(np.minimum(idx, probs.size - 1), minlength=probs.size)
        remaining -= size
    return counts


def sample(rho: DensityMatrix, axis: EulerAngles, n: int, seed: int) -> ShotRecord:
    """Measure the spin projection along ``axis`` ``n`` times."""
    if n < 1:
        raise ValidationError(f"number of shots must be >= 1, got {n}")
    probs = forward_point(rho, axis)
    counts = _draw_counts(probs, int(n), seed)
    labels = projections(rho.twice_j)
    return ShotRecord(axis, {int(m): int(c) for m, c in zip(labels, counts)}, int(n), int(seed))


def sample_grid(rho: DensityMatrix, grid: QuadratureGrid, n: int, seed: int) -> list[ShotRecord]:
    """One record of ``n`` shots per distinct (theta, phi) axis of ``grid``."""
    theta, phi = grid.axes()
    return [
        sample(rho, EulerAngles(ph, th, 0.0), n, derive_seed(seed, idx))
        for idx, (th, ph) in enumerate(zip(theta, phi))
    ]


def empirical_tomogram(records: Sequence[ShotRecord], grid: QuadratureGrid,
                       twice_j: int | None = None) -> SpinTomogram:
    """Relative frequencies on ``grid``; psi values are copies of the axis value.

    Records on the same axis are pooled.  Every (theta, phi) pair of the
    grid must be covered.  ``twice_j`` defaults to the largest outcome label
    present in ``records``.
    """
    if not records:
        raise ValidationError("no records given")
    if twice_j is None:
        twice_j = max(abs(k) for rec in records for k in rec.counts)
    theta, phi = grid.axes()
    n_out = twice_j + 1
    counts = np.zeros((theta.size, n_out))
    labels = projections(twice_j)
    for rec in records:
        d_theta = np.abs(theta - rec.axis.theta)
        d_phi = np.abs(np.angle(np.exp(1j * (phi - rec.axis.phi))))
        hit = np.flatnonzero((d_theta < _AXIS_TOL) & (d_phi < _AXIS_TOL))
        if hit.size == 0:
            raise ValidationError(f"record axis {rec.axis} is not a grid axis")
        unknown = set(rec.counts) - {int(m) for m in labels}
        if unknown:
            raise ValidationError(f"record has outcomes {sorted(unknown)} not valid for twice_j={twice_j}")
        counts[hit[0]] += [rec.counts.get(int(m), 0) for m in labels]
    totals = counts.sum(axis=1)
    missing = np.flatnonzero(totals == 0)
    if missing.size:
        raise ValidationError(f"{missing.size} grid axes have no measurements")
    freq = counts / totals[:, None]  # [axis, i]
    values = np.repeat(freq.T, grid.n_psi, axis=1)
    return SpinTomogram(twice_j, grid, values)


def reconstruction_error(rho: DensityMatrix, grid: QuadratureGrid, n: int, seed: int) -> float:
    """Frobenius error of the projected reconstruction from ``n`` shots per axis."""
    records = sample_grid(rho, grid, n, seed)
    est = project_to_physical(reconstruct(empirical_tomogram(records, grid, rho.twice_j)))
    return float(np.linalg.norm(est.entries - rho.entries))


def convergence_study(rho: DensityMatrix, grid: QuadratureGrid, shot_budgets: Sequence[int],
                      seed: int, n_seeds: int = 10) -> list[tuple[int, float]]:
    """Mean reconstruction error per shot budget, averaged over ``n_seeds`` runs.

    Returns a list of ``(shots_per_axis, mean_frobenius_error)``.
    """
    budgets = [int(b) for b in shot_budgets]
    if any(b < 1 for b in budgets) or any(b2 <= b1 for b1, b2 in zip(budgets, budgets[1:])):
        raise ValidationError("shot budgets must be positive and strictly increasing")
    if n_seeds < 1:
        raise ValidationError("n_seeds must be >= 1")
    table = []
    for bi, n in enumerate(budgets):
        errs = [reconstruction_error(rho, grid, n, derive_seed(seed, bi * n_seeds + r))
                for r in range(n_seeds)]
        table.append((n, float(np.mean(errs))))
    return table


def loglog_slope(table: Sequence[tuple[int, float]]) -> float:
    """Least-squares slope of log(error) against log(shots)."""
    n = np.log([t[0] for t in table])
    e = np.log([t[1] for t in table])
    return float(np.polyfit(n, e, 1)[0])
