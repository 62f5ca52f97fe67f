import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spintomo.angular import EulerAngles
from spintomo.errors import DomainError, ValidationError
from spintomo.quadrature import build_grid, grid_from_sizes
from spintomo.states import (
    DensityMatrix,
    density_from_bloch,
    density_from_spinor,
    fiducial,
    random_bloch,
    random_density,
)
from spintomo.tomogram import (
    SpinTomogram,
    forward_closed_form_half,
    forward_closed_form_one,
    forward_point,
    forward_tomogram,
    max_entry_error,
    project_to_physical,
    reconstruct,
    reconstruct_axial,
)


def random_angles(rng, n):
    for _ in range(n):
        yield EulerAngles(rng.uniform(0, 2 * np.pi), rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))


def brute_force_probabilities(rho, u):
    """Probabilities from the spin component along the rotated axis.

    Independent of the D-matrix machinery: diagonalize n.S for the unit
    vector n that the rotation sends the z axis to.
    """
    from tests.test_angular import spin_operators

    tj = rho.twice_j
    jy, jz = spin_operators(tj)
    m = np.arange(tj, -tj - 1, -2) / 2
    jp = np.zeros_like(jz)
    for a in range(1, m.size):
        jp[a - 1, a] = np.sqrt(tj / 2 * (tj / 2 + 1) - m[a] * (m[a] + 1))
    jx = (jp + jp.conj().T) / 2
    n = (np.sin(u.theta) * np.cos(u.phi), np.sin(u.theta) * np.sin(u.phi), np.cos(u.theta))
    lam, vec = np.linalg.eigh(n[0] * jx + n[1] * jy + n[2] * jz)
    order = np.argsort(-lam)  # i = j .. -j
    vec = vec[:, order]
    return np.einsum("si,st,ti->i", vec.conj(), np.asarray(rho.entries), vec).real


def test_forward_matches_spin_along_axis():
    rng = np.random.default_rng(11)
    for tj in (1, 2, 3, 5):
        rho = random_density(tj, rng)
        for u in random_angles(rng, 20):
            assert np.max(np.abs(forward_point(rho, u) - brute_force_probabilities(rho, u))) < 1e-12


def test_closed_form_half_parity():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        rho = random_density(1, rng, rank=rng.integers(1, 3))
        u = next(random_angles(rng, 1))
        assert np.max(np.abs(np.array(forward_closed_form_half(rho, u)) - forward_point(rho, u))) < 1e-12


def test_closed_form_one_parity():
    rng = np.random.default_rng(2)
    for _ in range(300):
        rho = random_density(2, rng)
        u = next(random_angles(rng, 1))
        assert np.max(np.abs(np.array(forward_closed_form_one(rho, u)) - forward_point(rho, u))) < 1e-12


def test_closed_forms_reject_other_spins():
    with pytest.raises(DomainError):
        forward_closed_form_half(DensityMatrix(2, np.eye(3) / 3), EulerAngles(0, 0))
    with pytest.raises(DomainError):
        forward_closed_form_one(DensityMatrix(1, np.eye(2) / 2), EulerAngles(0, 0))


def test_z_plus_profile():
    rho = density_from_spinor(fiducial("z+"))
    for th in np.linspace(0, np.pi, 9):
        w = forward_point(rho, EulerAngles(0.7, th, 2.0))
        assert w[0] == pytest.approx(np.cos(th / 2) ** 2, abs=1e-15)
        assert w[1] == pytest.approx(np.sin(th / 2) ** 2, abs=1e-15)


@pytest.mark.parametrize("twice_j", range(1, 7))
def test_tomogram_invariants(twice_j):
    rng = np.random.default_rng(twice_j)
    rho = random_density(twice_j, rng)
    for grid in (build_grid(twice_j), build_grid(twice_j, twice_j + 2, 2 * twice_j + 1, 2 * twice_j + 3)):
        t = forward_tomogram(rho, grid)
        assert t.normalization_residual() < 1e-10
        assert t.psi_residual() < 1e-12
        assert t.values.min() >= 0.0 and t.values.max() <= 1.0


def test_value_lookup():
    t = forward_tomogram(density_from_spinor(fiducial("z+")))
    assert t.value(1, 0) == pytest.approx(np.cos(t.grid.theta[0] / 2) ** 2)


@pytest.mark.parametrize("twice_j", range(1, 9))
def test_round_trip(twice_j):
    rng = np.random.default_rng(40 + twice_j)
    for rank in (None, 1):
        rho = random_density(twice_j, rng, rank=rank)
        assert max_entry_error(reconstruct(forward_tomogram(rho)), rho) < 1e-9


def test_round_trip_on_minimal_and_oversized_grids():
    rng = np.random.default_rng(8)
    rho = random_density(3, rng)
    for grid in (grid_from_sizes(5, 7, 7), build_grid(3, 9, 11, 8)):
        assert max_entry_error(reconstruct(forward_tomogram(rho, grid)), rho) < 1e-10


def test_under_resolved_grid_rejected():
    rho = random_density(3, np.random.default_rng(0))
    with pytest.raises(ValidationError):
        forward_tomogram(rho, build_grid(2))
    t = forward_tomogram(DensityMatrix(2, np.eye(3) / 3), build_grid(2))
    forged = SpinTomogram(2, build_grid(1, 4, 4, 4), np.full((3, 64), 1 / 3))
    with pytest.raises(ValidationError):
        reconstruct(forged)
    assert max_entry_error(reconstruct(t), np.eye(3) / 3) < 1e-12


def test_unnormalized_tomogram_rejected():
    g = build_grid(1)
    with pytest.raises(ValidationError):
        reconstruct(SpinTomogram(1, g, np.full((2, g.size), 0.4)))
    with pytest.raises(ValidationError):
        SpinTomogram(1, g, np.full((2, g.size), -0.1))
    with pytest.raises(ValidationError):
        SpinTomogram(1, g, np.ones((3, g.size)))


def test_tiny_negative_values_are_clamped():
    g = build_grid(1)
    v = np.full((2, g.size), 0.5)
    v[0, 0] = -1e-14
    v[1, 0] = 1 + 1e-14
    assert SpinTomogram(1, g, v).values[0, 0] == 0.0


def test_spin_one_diagonal_example():
    rho = DensityMatrix(2, np.diag([1.0, 0.0, 0.0]))
    t = forward_tomogram(rho)
    assert max_entry_error(reconstruct(t), rho) < 1e-10
    assert max_entry_error(reconstruct_axial(t), rho) < 1e-10


def test_reconstruct_project_flag():
    rho = random_density(2, np.random.default_rng(4))
    out = reconstruct(forward_tomogram(rho), project=True)
    assert isinstance(out, DensityMatrix)
    assert max_entry_error(out, rho) < 1e-9


def _brute_nearest_spectrum(lam, steps=2001):
    """Closest point of the probability simplex, by exhaustive search over a fine lattice."""
    n = lam.size
    best, best_d = None, np.inf
    grid = np.linspace(0, 1, steps)
    if n == 2:
        for a in grid:
            p = np.array([a, 1 - a])
            d = np.sum((p - lam) ** 2)
            if d < best_d:
                best, best_d = p, d
        return best
    for a in grid:
        b = np.clip(grid[grid <= 1 - a + 1e-15], 0, None)
        c = 1 - a - b
        d = (a - lam[0]) ** 2 + (b - lam[1]) ** 2 + (c - lam[2]) ** 2
        k = np.argmin(d)
        if d[k] < best_d:
            best, best_d = np.array([a, b[k], c[k]]), d[k]
    return best


def test_projection_examples():
    out = project_to_physical(np.diag([1.1, -0.1]))
    assert np.allclose(out.entries, np.diag([1.0, 0.0]), atol=1e-15)

    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    lam = np.array([0.7, 0.4, -0.1])
    out = project_to_physical((q * lam) @ q.conj().T)
    got = np.sort(np.linalg.eigvalsh(out.entries))[::-1]
    brute = np.sort(_brute_nearest_spectrum(lam))[::-1]
    assert np.allclose(got, brute, atol=1e-3)
    assert np.allclose(got, [0.65, 0.35, 0.0], atol=1e-12)


def test_projection_is_idempotent_on_valid_states():
    rng = np.random.default_rng(12)
    for tj in (1, 2, 4):
        rho = random_density(tj, rng)
        assert max_entry_error(project_to_physical(rho), rho) < 1e-14


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3), st.integers(0, 2**32 - 1))
def test_projection_is_frobenius_nearest(lam, seed):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    h = (q * np.array(lam)) @ q.conj().T
    best = np.linalg.norm(project_to_physical(h).entries - h)
    # no random physical state is closer
    for _ in range(30):
        other = random_density(2, rng, rank=int(rng.integers(1, 4)))
        assert best <= np.linalg.norm(other.entries - h) + 1e-12


def test_fiducial_formulas():
    rng = np.random.default_rng(21)
    formulas = {
        "x+": lambda t, p: (1 + np.sin(t) * np.cos(p)) / 2,
        "x-": lambda t, p: (1 - np.sin(t) * np.cos(p)) / 2,
        "y+": lambda t, p: (1 + np.sin(t) * np.sin(p)) / 2,
        "y-": lambda t, p: (1 - np.sin(t) * np.sin(p)) / 2,
        "z+": lambda t, p: np.cos(t / 2) ** 2,
        "z-": lambda t, p: np.sin(t / 2) ** 2,
    }
    for name, f in formulas.items():
        rho = density_from_spinor(fiducial(name))
        for u in random_angles(rng, 50):
            w_up, w_down = forward_closed_form_half(rho, u)
            assert abs(w_up - f(u.theta, u.phi)) < 1e-12
            assert abs(w_up + w_down - 1) < 1e-12


def test_mixed_state_formula():
    rng = np.random.default_rng(22)
    for _ in range(200):
        s = random_bloch(rng)
        u = next(random_angles(rng, 1))
        proj = s.sz * np.cos(u.theta) + s.sx * np.sin(u.theta) * np.cos(u.phi) + s.sy * np.sin(u.theta) * np.sin(u.phi)
        w = forward_point(density_from_bloch(s), u)
        assert np.allclose(w, [0.5 + proj, 0.5 - proj], atol=1e-12)


def test_grid_choice_does_not_change_reconstruction():
    rho = random_density(2, np.random.default_rng(30))
    outs = [reconstruct(forward_tomogram(rho, build_grid(2, a, b, c)))
            for a, b, c in itertools.product((4, 7), (5, 8), (5, 6))]
    for o in outs:
        assert max_entry_error(o, rho) < 1e-12
