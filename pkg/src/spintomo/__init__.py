"""Tomography of spin states and of the symmetric top.

Quantum numbers are passed doubled (``twice_j = 2 j``) so half-integers stay
exact.  Matrix and vector components run m = j, j-1, ..., -j.
"""

from .angular import EulerAngles, WignerTable, three_j, wigner_D, wigner_D_matrix, wigner_small_d
from .errors import DomainError, ValidationError
from .quadrature import GROUP_VOLUME, QuadratureGrid, build_grid, grid_from_sizes, integrate
from .shots import ShotRecord, convergence_study, empirical_tomogram, loglog_slope, sample, sample_grid
from .states import (
    BlochVector,
    DensityMatrix,
    Spinor,
    bloch_from_density,
    density_from_bloch,
    density_from_spinor,
    fidelity,
    fiducial,
    purity,
    random_density,
)
from .tomogram import (
    SpinTomogram,
    forward_closed_form_half,
    forward_closed_form_one,
    forward_point,
    forward_tomogram,
    project_to_physical,
    reconstruct,
)
from .top import (
    TopDensityMatrix,
    TopParameters,
    TopState,
    TopTomogram,
    top_energy,
    top_forward_point,
    top_forward_tomogram,
    top_pure_state,
    top_reconstruct,
)

__version__ = "0.1.0"
