"""First Steklov-Dirichlet eigenvalue of eccentric annuli.

Bipolar coordinates turn the annulus into a rectangle, and the
Dirichlet-to-Neumann map becomes a symmetric tridiagonal operator on cosine
modes.  Its truncations give the eigenvalue from below.  The package also
reconstructs the eigenfunction, its shape derivative in the offset, and the
coefficient-ratio ladder, plus a priori bounds and a scikit-learn wrapper.
"""

__version__ = "0.1.0"

from .analysis import (
    AsymptoticLadder,
    BoundsReport,
    CoefficientLadder,
    asymptotic_ladder,
    bounds_report,
    coefficient_ladder,
    concentric_value,
    eigenvalue_by_continued_fraction,
    f_ratio_backward,
    fixed_points,
    liminf_lower,
    n0_threshold,
    shape_derivative,
    upper_bound_M,
)
from .eigenfunction import (
    Certificate,
    EigenfunctionSeries,
    boundary_flux,
    boundary_integral,
    certify,
    evaluate,
    normalize,
    rayleigh_quotient,
    series_from_eigvec,
)
from .estimator import SteklovDirichletSolver
from .exceptions import (
    ConvergenceFailure,
    DegenerateFrame,
    InvalidAnnulus,
    NoConvergence,
    SteklovError,
)
from .geometry import Annulus, BipolarFrame, asymptotic_frame, bipolar_frame, to_cartesian
from .spectral import (
    ConvergedEigenvalue,
    EigenResult,
    concentric_eigenvalue,
    finite_section,
    smallest_eigpair,
    solve_first_eigenvalue,
)
from .sweep import SweepRow, SweepSpec, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
