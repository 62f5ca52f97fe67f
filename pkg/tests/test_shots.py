import numpy as np
import pytest

from spintomo.angular import EulerAngles
from spintomo.errors import ValidationError
from spintomo.quadrature import build_grid
from spintomo.shots import (
    ShotRecord,
    convergence_study,
    derive_seed,
    empirical_tomogram,
    loglog_slope,
    sample,
    sample_grid,
)
from spintomo.states import DensityMatrix, density_from_spinor, fiducial, fidelity, random_density
from spintomo.tomogram import forward_point, reconstruct


def test_sample_is_deterministic():
    rho = random_density(2, np.random.default_rng(0))
    u = EulerAngles(0.4, 1.1)
    a, b = sample(rho, u, 5000, 42), sample(rho, u, 5000, 42)
    assert a.counts == b.counts and a.total == 5000
    assert sample(rho, u, 5000, 43).counts != a.counts


def test_counts_follow_probabilities():
    rho = random_density(3, np.random.default_rng(1))
    u = EulerAngles(2.0, 0.9)
    rec = sample(rho, u, 400_000, 7)
    p = forward_point(rho, u)
    freq = rec.frequencies(3)
    # five standard errors
    assert np.all(np.abs(freq - p) < 5 * np.sqrt(p * (1 - p) / rec.total) + 1e-12)


def test_pure_outcome():
    rec = sample(density_from_spinor(fiducial("z+")), EulerAngles(0, 0), 1000, 1)
    assert rec.counts == {1: 1000, -1: 0}


def test_invalid_shots():
    rho = DensityMatrix(1, np.eye(2) / 2)
    with pytest.raises(ValidationError):
        sample(rho, EulerAngles(0, 0), 0, 1)
    with pytest.raises(ValidationError):
        ShotRecord(EulerAngles(0, 0), {1: 3, -1: 1}, 5, 0)


def test_derive_seed_stable():
    assert derive_seed(5, 3) == derive_seed(5, 3)
    assert derive_seed(5, 3) != derive_seed(5, 4)
    assert 0 <= derive_seed(2**64 - 1, 0) < 2**64


def test_empirical_tomogram_structure():
    rho = random_density(1, np.random.default_rng(2))
    g = build_grid(1)
    records = sample_grid(rho, g, 100, 9)
    assert len(records) == g.shape[0] * g.shape[1]
    t = empirical_tomogram(records, g)
    assert t.twice_j == 1
    assert t.psi_residual() == 0.0
    assert t.normalization_residual() < 1e-12


def test_empirical_tomogram_pools_and_validates():
    rho = random_density(1, np.random.default_rng(3))
    g = build_grid(1)
    r1, r2 = sample_grid(rho, g, 50, 1), sample_grid(rho, g, 50, 2)
    pooled = empirical_tomogram(r1 + r2, g)
    assert pooled.values.shape == (2, g.size)
    with pytest.raises(ValidationError):
        empirical_tomogram(r1[:-1], g)
    off_grid = ShotRecord(EulerAngles(0.123, 0.456), {1: 1, -1: 0}, 1, 0)
    with pytest.raises(ValidationError):
        empirical_tomogram(r1 + [off_grid], g)
    with pytest.raises(ValidationError):
        empirical_tomogram([], g)


def test_fidelity_at_ten_thousand_shots():
    rng = np.random.default_rng(10)
    g = build_grid(1)
    for k in range(5):
        rho = random_density(1, rng, rank=1)
        est = reconstruct(empirical_tomogram(sample_grid(rho, g, 10_000, k), g, 1), project=True)
        assert fidelity(rho, est) > 0.99


def test_convergence_slope_small():
    rho = random_density(1, np.random.default_rng(4))
    table = convergence_study(rho, build_grid(1), [100, 1000, 10_000], seed=3, n_seeds=6)
    assert [n for n, _ in table] == [100, 1000, 10_000]
    assert -0.7 < loglog_slope(table) < -0.3


def test_convergence_study_validates_budgets():
    rho = DensityMatrix(1, np.eye(2) / 2)
    with pytest.raises(ValidationError):
        convergence_study(rho, build_grid(1), [100, 10], seed=0)
