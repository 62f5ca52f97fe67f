"""Angular-momentum special functions.

All quantum numbers are passed as *doubled* integers (``twice_j = 2j``,
``twice_m = 2m``) so half-integer spins never go through float equality.

Rotation convention
-------------------
The spin-1/2 rotation matrix used throughout is::

    u(phi, theta, psi) = [[ cos(t/2) e^{ i(phi+psi)/2},  sin(t/2) e^{-i(phi-psi)/2}],
                          [-sin(t/2) e^{ i(phi-psi)/2},  cos(t/2) e^{-i(phi+psi)/2}]]

i.e. ``u = exp(i psi Jz) exp(i theta Jy) exp(i phi Jz)``.  For arbitrary j we
take the same operator in the spin-j irrep, so that::

    D^j_{m'm}(phi, theta, psi) = exp(i m' psi) d^j_{m'm}(theta) exp(i m phi)

with ``d^j_{m'm}(theta) = <j m'| exp(i theta Jy) |j m>``.  Rows and columns
are ordered m = j, j-1, ..., -j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi

__all__ = [
    "EulerAngles",
    "WignerTable",
    "check_projection",
    "default_table",
    "projections",
    "three_j",
    "wigner_D",
    "wigner_D_matrix",
    "wigner_small_d",
    "wigner_small_d_matrix",
]


def projections(twice_j: int) -> np.ndarray:
    """Doubled projections ``2j, 2j-2, ..., -2j`` as an integer array."""
    if twice_j < 0:
        raise DomainError(f"twice_j must be non-negative, got {twice_j}")
    return np.arange(twice_j, -twice_j - 1, -2)


def check_projection(twice_j: int, twice_m: int) -> None:
    if twice_j < 0:
        raise DomainError(f"twice_j must be non-negative, got {twice_j}")
    if abs(twice_m) > twice_j:
        raise DomainError(f"|m| > j: twice_m={twice_m}, twice_j={twice_j}")
    if (twice_j - twice_m) % 2:
        raise DomainError(f"parity mismatch: twice_j={twice_j}, twice_m={twice_m}")


@dataclass(frozen=True)
class EulerAngles:
    """Rotation angles in radians.

    ``phi`` and ``psi`` are reduced modulo 2*pi; ``theta`` must lie in
    [0, pi].
    """

    phi: float
    theta: float
    psi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not (0.0 <= theta <= math.pi):
            raise DomainError(f"theta must lie in [0, pi], got {theta}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)
        object.__setattr__(self, "psi", float(self.psi) % TWO_PI)

    def as_tuple(self) -> tuple[float, float, float]:
        return self.phi, self.theta, self.psi


def _log_factorials(n: int) -> np.ndarray:
    out = np.zeros(n + 1)
    out[1:] = np.cumsum(np.log(np.arange(1, n + 1)))
    return out


@dataclass(frozen=True)
class WignerTable:
    """Log-factorial cache plus memoized small-d expansions.

    Valid for every ``twice_j <= twice_j_max``.  Instances are not mutated
    after construction apart from the expansion memo, whose entries are
    deterministic functions of their key.
    """

    twice_j_max: int = 60
    log_fact: np.ndarray = field(init=False, repr=False)
    _expansions: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # 3j symbols with j1,j2,j3 <= j_max need factorials up to 3*j_max + 1
        n = 3 * (self.twice_j_max // 2 + 1) + 2
        lf = _log_factorials(n)
        lf.setflags(write=False)
        object.__setattr__(self, "log_fact", lf)
        object.__setattr__(self, "_expansions", {})

    def _check(self, twice_j):
        if twice_j > self.twice_j_max:
            raise DomainError(
                f"twice_j={twice_j} exceeds table limit {self.twice_j_max}"
            )

    def small_d_terms(self, twice_j: int, twice_m1: int, twice_m2: int):
        """Terms ``(coef, cos_power, sin_power)`` of the Wigner sum.

        ``d^j_{m1 m2}(theta) = sum coef * cos(theta/2)**a * sin(theta/2)**b``,
        sorted by descending ``|coef|``.
        """
        key = (twice_j, twice_m1, twice_m2)
        terms = self._expansions.get(key)
        if terms is not None:
            return terms
        check_projection(twice_j, twice_m1)
        check_projection(twice_j, twice_m2)
        self._check(twice_j)
        lf = self.log_fact
        jp1 = (twice_j + twice_m1) // 2  # j + m1
        jm1 = (twice_j - twice_m1) // 2
        jp2 = (twice_j + twice_m2) // 2
        jm2 = (twice_j - twice_m2) // 2
        dm = (twice_m2 - twice_m1) // 2  # m2 - m1
        half_log_norm = 0.5 * (lf[jp1] + lf[jm1] + lf[jp2] + lf[jm2])
        terms = []
        for s in range(max(0, -dm), min(jp1, jm2) + 1):
            log_mag = half_log_norm - (
                lf[jp1 - s] + lf[s] + lf[dm + s] + lf[jm2 - s]
            )
            sign = -1.0 if (dm + s) % 2 else 1.0
            terms.append((sign * math.exp(log_mag), twice_j - dm - 2 * s, dm + 2 * s))
        terms = tuple(sorted(terms, key=lambda t: -abs(t[0])))
        self._expansions[key] = terms
        return terms

    def small_d_matrix(self, twice_j: int, theta) -> np.ndarray:
        """``d^j(theta)`` for scalar or array ``theta``; shape ``theta.shape + (n, n)``."""
        self._check(twice_j)
        theta = np.asarray(theta, dtype=float)
        half = 0.5 * theta
        c, s = np.cos(half), np.sin(half)
        cpow = [np.ones_like(c)]
        spow = [np.ones_like(s)]
        for _ in range(twice_j):
            cpow.append(cpow[-1] * c)
            spow.append(spow[-1] * s)
        ms = projections(twice_j)
        n = ms.size
        out = np.zeros(theta.shape + (n, n))
        for a, m1 in enumerate(ms):
            for b, m2 in enumerate(ms):
                acc = np.zeros_like(theta)
                for coef, pc, ps in self.small_d_terms(twice_j, int(m1), int(m2)):
                    acc = acc + coef * cpow[pc] * spow[ps]
                out[..., a, b] = acc
        return out

    def three_j(self, tj1, tj2, tj3, tm1, tm2, tm3) -> float:
        for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
            check_projection(tj, tm)
        if (tj1 + tj2 + tj3) % 2:
            raise DomainError("j1 + j2 + j3 must be an integer")
        if tm1 + tm2 + tm3 != 0:
            return 0.0
        if tj3 > tj1 + tj2 or tj3 < abs(tj1 - tj2):
            return 0.0
        for tj in (tj1, tj2, tj3):
            self._check(tj)
        lf = self.log_fact
        h = lambda x: x // 2  # noqa: E731 - all arguments below are even
        a = h(tj1 + tj2 - tj3)
        b = h(tj1 - tj2 + tj3)
        c = h(-tj1 + tj2 + tj3)
        total = h(tj1 + tj2 + tj3)
        log_pre = 0.5 * (
            lf[a] + lf[b] + lf[c] - lf[total + 1]
            + lf[h(tj1 + tm1)] + lf[h(tj1 - tm1)]
            + lf[h(tj2 + tm2)] + lf[h(tj2 - tm2)]
            + lf[h(tj3 + tm3)] + lf[h(tj3 - tm3)]
        )
        x1 = h(tj3 - tj2 + tm1)
        x2 = h(tj3 - tj1 - tm2)
        y1 = h(tj1 - tm1)
        y2 = h(tj2 + tm2)
        terms = []
        for t in range(max(0, -x1, -x2), min(a, y1, y2) + 1):
            log_den = lf[t] + lf[x1 + t] + lf[x2 + t] + lf[a - t] + lf[y1 - t] + lf[y2 - t]
            term = math.exp(log_pre - log_den)
            terms.append(-term if t % 2 else term)
        value = math.fsum(terms)
        return -value if h(tj1 - tj2 - tm3) % 2 else value


@lru_cache(maxsize=None)
def default_table() -> WignerTable:
    """Process-wide shared table (2j <= 60)."""
    return WignerTable(60)


def _table(table: Optional[WignerTable]) -> WignerTable:
    return default_table() if table is None else table


def wigner_small_d(twice_j: int, twice_m1: int, twice_m2: int, theta: float,
                   table: Optional[WignerTable] = None) -> float:
    """Real rotation core ``d^j_{m1 m2}(theta)``.

    Examples
    --------
    >>> round(wigner_small_d(1, 1, -1, math.pi / 3), 12)
    0.5
    """
    terms = _table(table).small_d_terms(twice_j, twice_m1, twice_m2)
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return math.fsum(coef * c**pc * s**ps for coef, pc, ps in terms)


def wigner_D(twice_j: int, twice_m1: int, twice_m2: int, u: EulerAngles,
             table: Optional[WignerTable] = None) -> complex:
    """``D^j_{m1 m2}(u)``; row phase carries psi, column phase carries phi."""
    d = wigner_small_d(twice_j, twice_m1, twice_m2, u.theta, table)
    phase = 0.5 * (twice_m1 * u.psi + twice_m2 * u.phi)
    return complex(d * math.cos(phase), d * math.sin(phase))


def wigner_small_d_matrix(twice_j: int, theta, table: Optional[WignerTable] = None) -> np.ndarray:
    return _table(table).small_d_matrix(twice_j, theta)


def wigner_D_matrix(twice_j: int, phi, theta, psi,
                    table: Optional[WignerTable] = None) -> np.ndarray:
    """Full rotation matrices for broadcastable angle arrays.

    Parameters
    ----------
    twice_j : int
        Doubled spin.
    phi, theta, psi : float or array_like
        Euler angles in radians.

    Returns
    -------
    ndarray, complex
        Shape ``broadcast(phi, theta, psi).shape + (2j+1, 2j+1)``; rows and
        columns run over m = j, ..., -j.
    """
    phi, theta, psi = np.broadcast_arrays(
        np.asarray(phi, float), np.asarray(theta, float), np.asarray(psi, float)
    )
    d = wigner_small_d_matrix(twice_j, theta, table)
    half_m = 0.5 * projections(twice_j)
    row = np.exp(1j * psi[..., None] * half_m)
    col = np.exp(1j * phi[..., None] * half_m)
    return row[..., :, None] * d * col[..., None, :]


def three_j(twice_j1: int, twice_j2: int, twice_j3: int,
            twice_m1: int, twice_m2: int, twice_m3: int,
            table: Optional[WignerTable] = None) -> float:
    """Wigner 3j symbol from the Racah formula.

    Returns 0 when the triangle rule or ``m1 + m2 + m3 = 0`` fails; raises
    :class:`DomainError` on parity violations or ``|m| > j``.
    """
    return _table(table).three_j(twice_j1, twice_j2, twice_j3,
                                 twice_m1, twice_m2, twice_m3)
