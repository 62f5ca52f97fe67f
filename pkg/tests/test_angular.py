import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from spintomo.angular import (
    EulerAngles,
    WignerTable,
    projections,
    three_j,
    wigner_D,
    wigner_D_matrix,
    wigner_small_d,
    wigner_small_d_matrix,
)
from spintomo.errors import DomainError


def spin_operators(twice_j):
    """Jy and Jz built from ladder operators, basis m = j..-j."""
    j = twice_j / 2
    m = projections(twice_j) / 2
    jz = np.diag(m).astype(complex)
    jp = np.zeros((m.size, m.size), complex)
    for a in range(1, m.size):
        # J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and m+1 sits one row up
        jp[a - 1, a] = math.sqrt(j * (j + 1) - m[a] * (m[a] + 1))
    jy = (jp - jp.conj().T) / 2j
    return jy, jz


def expm_rotation(twice_j, phi, theta, psi):
    jy, jz = spin_operators(twice_j)
    return expm(1j * psi * jz) @ expm(1j * theta * jy) @ expm(1j * phi * jz)


def exact_three_j_squared(tj1, tj2, tj3, tm1, tm2, tm3):
    """(sign, value^2) of the 3j symbol using integer factorials only."""
    f = math.factorial
    j1, j2, j3 = Fraction(tj1, 2), Fraction(tj2, 2), Fraction(tj3, 2)
    m1, m2, m3 = Fraction(tm1, 2), Fraction(tm2, 2), Fraction(tm3, 2)
    i = lambda x: int(x)  # noqa: E731
    tri = Fraction(f(i(j1 + j2 - j3)) * f(i(j1 - j2 + j3)) * f(i(-j1 + j2 + j3)), f(i(j1 + j2 + j3 + 1)))
    pre = tri * f(i(j1 + m1)) * f(i(j1 - m1)) * f(i(j2 + m2)) * f(i(j2 - m2)) * f(i(j3 + m3)) * f(i(j3 - m3))
    s = Fraction(0)
    for t in range(0, i(j1 + j2 - j3) + 1):
        args = [t, j3 - j2 + t + m1, j3 - j1 + t - m2, j1 + j2 - j3 - t, j1 - t - m1, j2 - t + m2]
        if any(a < 0 for a in args):
            continue
        den = 1
        for a in args:
            den *= f(i(a))
        s += Fraction((-1) ** t, den)
    sign = (-1) ** i(j1 - j2 - m3) * (1 if s >= 0 else -1)
    return sign, pre * s * s


def test_spin_half_closed_forms():
    th = 0.83
    assert wigner_small_d(1, 1, 1, th) == pytest.approx(math.cos(th / 2), abs=1e-15)
    assert wigner_small_d(1, 1, -1, th) == pytest.approx(math.sin(th / 2), abs=1e-15)
    assert wigner_small_d(1, -1, 1, th) == pytest.approx(-math.sin(th / 2), abs=1e-15)


def test_documented_values():
    assert wigner_small_d(2, 2, 2, math.pi / 2) == pytest.approx(0.5, abs=1e-15)
    assert wigner_small_d(2, 0, 0, math.pi / 3) == pytest.approx(0.5, abs=1e-15)
    assert wigner_small_d(1, 1, -1, math.pi / 3) == pytest.approx(0.5, abs=1e-15)
    assert three_j(1, 1, 0, 1, -1, 0) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert three_j(2, 2, 4, 2, -2, 0) == pytest.approx(math.sqrt(1 / 30), abs=1e-15)


@pytest.mark.parametrize("twice_j", range(0, 13))
def test_D_matches_matrix_exponential(twice_j):
    rng = np.random.default_rng(twice_j)
    for _ in range(5):
        phi, psi = rng.uniform(0, 2 * np.pi, 2)
        theta = rng.uniform(0, np.pi)
        ours = wigner_D_matrix(twice_j, phi, theta, psi)
        assert np.max(np.abs(ours - expm_rotation(twice_j, phi, theta, psi))) < 1e-12


@pytest.mark.parametrize("twice_j", [1, 4, 7, 12])
def test_scalar_and_matrix_paths_agree(twice_j):
    u = EulerAngles(1.1, 2.3, 4.4)
    D = wigner_D_matrix(twice_j, u.phi, u.theta, u.psi)
    ms = projections(twice_j)
    for a, m1 in enumerate(ms):
        for b, m2 in enumerate(ms):
            assert abs(wigner_D(twice_j, int(m1), int(m2), u) - D[a, b]) < 1e-13


@pytest.mark.parametrize("twice_j", range(0, 13))
def test_D_unitary_and_conjugation(twice_j):
    rng = np.random.default_rng(100 + twice_j)
    phi, theta, psi = rng.uniform(0, 2 * np.pi), rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
    D = wigner_D_matrix(twice_j, phi, theta, psi)
    n = twice_j + 1
    assert np.max(np.abs(D @ D.conj().T - np.eye(n))) < 1e-12
    # conj D_{m'm} = (-1)^(m'-m) D_{-m',-m}
    ms = projections(twice_j)
    sign = (-1.0) ** ((ms[:, None] - ms[None, :]) // 2)
    assert np.max(np.abs(D.conj() - sign * D[::-1, ::-1])) < 1e-12


def test_small_d_vectorized_shape():
    th = np.linspace(0, np.pi, 7).reshape(7, 1)
    d = wigner_small_d_matrix(3, th)
    assert d.shape == (7, 1, 4, 4)
    assert np.allclose(d[0, 0], np.eye(4))


@pytest.mark.parametrize("twice_j,bound", [(20, 1e-12), (40, 1e-8), (60, 1e-5)])
def test_explicit_sum_accuracy_profile(twice_j, bound):
    # cancellation in the alternating sum grows with j; these bounds document it
    for theta in np.linspace(0.01, np.pi - 0.01, 25):
        d = wigner_small_d_matrix(twice_j, theta)
        assert np.max(np.abs(d @ d.T - np.eye(twice_j + 1))) < bound


def _all_three_j(max_tj):
    for tj1 in range(max_tj + 1):
        for tj2 in range(max_tj + 1):
            for tj3 in range(abs(tj1 - tj2), min(tj1 + tj2, max_tj) + 1, 2):
                for tm1 in range(-tj1, tj1 + 1, 2):
                    for tm2 in range(-tj2, tj2 + 1, 2):
                        tm3 = -tm1 - tm2
                        if abs(tm3) <= tj3:
                            yield tj1, tj2, tj3, tm1, tm2, tm3


def test_three_j_matches_exact_racah():
    count = 0
    for args in _all_three_j(7):
        sign, sq = exact_three_j_squared(*args)
        ref = sign * math.sqrt(sq)
        assert abs(three_j(*args) - ref) < 1e-13, args
        count += 1
    assert count > 1000


@pytest.mark.parametrize("tj1,tj2", [(1, 1), (2, 3), (4, 4), (6, 5), (12, 12)])
def test_three_j_orthogonality(tj1, tj2):
    for tj3 in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
        for tj3p in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
            for tm3 in range(-min(tj3, tj3p), min(tj3, tj3p) + 1, 2):
                total = 0.0
                for tm1 in range(-tj1, tj1 + 1, 2):
                    tm2 = -tm1 - tm3
                    if abs(tm2) > tj2:
                        continue
                    total += three_j(tj1, tj2, tj3, tm1, tm2, tm3) * three_j(tj1, tj2, tj3p, tm1, tm2, tm3)
                expected = 1.0 / (tj3 + 1) if tj3 == tj3p else 0.0
                assert abs(total - expected) < 1e-12


def test_three_j_selection_rules():
    assert three_j(2, 2, 2, 2, 2, 0) == 0.0
    assert three_j(2, 2, 6, 0, 0, 0) == 0.0  # triangle fails
    assert three_j(2, 2, 2, 0, 0, 0) == 0.0  # odd j1+j2+j3 with all m = 0
    with pytest.raises(DomainError):
        three_j(1, 1, 1, 1, -1, 0)  # j1 + j2 + j3 half-integer
    with pytest.raises(DomainError):
        three_j(2, 2, 0, 4, -4, 0)


def test_domain_errors():
    with pytest.raises(DomainError):
        wigner_small_d(2, 1, 0, 0.3)
    with pytest.raises(DomainError):
        wigner_small_d(2, 4, 0, 0.3)
    with pytest.raises(DomainError):
        WignerTable(4).three_j(6, 6, 0, 0, 0, 0)
    with pytest.raises(DomainError):
        EulerAngles(0.0, 3.5)


def test_euler_angles_reduce_modulo():
    u = EulerAngles(-0.5, 1.0, 7.0)
    assert u.phi == pytest.approx(2 * np.pi - 0.5)
    assert u.psi == pytest.approx(7.0 - 2 * np.pi)


@settings(max_examples=60, deadline=None)
@given(
    tj=st.integers(0, 10),
    a=st.floats(0, 2 * np.pi),
    b=st.floats(0, np.pi),
    c=st.floats(0, 2 * np.pi),
    a2=st.floats(0, 2 * np.pi),
    b2=st.floats(0, np.pi),
    c2=st.floats(0, 2 * np.pi),
)
def test_D_is_a_representation(tj, a, b, c, a2, b2, c2):
    # a product of two rotations is again a rotation; check via the expm oracle
    prod = wigner_D_matrix(tj, a, b, c) @ wigner_D_matrix(tj, a2, b2, c2)
    ref = expm_rotation(tj, a, b, c) @ expm_rotation(tj, a2, b2, c2)
    assert np.max(np.abs(prod - ref)) < 1e-11
