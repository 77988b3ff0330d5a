"""Momentum-space renormalization of the attractive 1/r^2 potential."""

from .bound_states import Spectrum, TowerFit, eigenvalue_at, find_spectrum, fit_tower
from .discretization import KernelMatrix, MomentumMesh, assemble_kernel, build_mesh
from .potential import PotentialParams, counterterm_value, potential_momentum, swave_kernel_f
from .rg import (
    CountertermSchedule,
    beta_extremum,
    beta_function,
    calibrate_h_from_bound_state,
    coupling_h,
    preferred_scaling_factor,
    vanishing_cutoffs,
)
from .scattering import (
    PhaseLawFit,
    PhasePoint,
    fit_phase_law,
    phase_from_amplitude,
    solve_onshell,
    total_cross_section,
)
from .zero_energy import (
    ThresholdSolution,
    critical_exponents,
    threshold_mesh,
    threshold_solution,
    zero_crossing_spacings,
)

__version__ = "0.1.0"

__all__ = [
    "PotentialParams",
    "potential_momentum",
    "swave_kernel_f",
    "counterterm_value",
    "CountertermSchedule",
    "coupling_h",
    "beta_function",
    "beta_extremum",
    "preferred_scaling_factor",
    "vanishing_cutoffs",
    "calibrate_h_from_bound_state",
    "MomentumMesh",
    "KernelMatrix",
    "build_mesh",
    "assemble_kernel",
    "Spectrum",
    "TowerFit",
    "eigenvalue_at",
    "find_spectrum",
    "fit_tower",
    "PhasePoint",
    "PhaseLawFit",
    "solve_onshell",
    "phase_from_amplitude",
    "total_cross_section",
    "fit_phase_law",
    "ThresholdSolution",
    "critical_exponents",
    "threshold_mesh",
    "threshold_solution",
    "zero_crossing_spacings",
    "__version__",
]
