"""Threshold (E = 0) diagnostics of the regulated equation.

At zero energy the homogeneous solution is a power law p**(-1/2)
modulated by a log-periodic cosine; the phase of that cosine is the
quantity the renormalization fixes.  This module extracts the phase
from the numerically computed threshold eigenvector and exposes the
analytic critical exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .discretization import (
    DEFAULT_KMIN_RATIO,
    MomentumMesh,
    assemble_kernel,
    build_mesh,
    min_points,
)
from .errors import NoThresholdSolutionError, NumericalError
from .potential import PotentialParams

# Acceptable distance of the threshold eigenvalue from 1.
EIGENVALUE_TOL = 0.05

# Fit window relative to the regulator scales; outside it the regulated
# solution departs from the scale-free form.
WINDOW_LOW_FACTOR = 10.0
WINDOW_HIGH_FACTOR = 0.1


@dataclass(frozen=True)
class ThresholdSolution:
    """Unit-norm threshold eigenvector with the extracted oscillation phase."""

    values: np.ndarray
    alpha: float
    fit_residual: float
    amplitude: float
    mesh: MomentumMesh


def critical_exponents(params: PotentialParams) -> tuple[complex, complex]:
    """Roots of s^2 + s - c = 0 with -1 < Re(s) < 0: s = -1/2 +- i*nu."""
    return complex(-0.5, params.nu), complex(-0.5, -params.nu)


def _fit_phase(p: np.ndarray, values: np.ndarray, nu: float) -> tuple[float, float, float]:
    """Least-squares phase of A * p**(-1/2) * cos(nu*ln(p) + alpha).

    The model is linear in (A*cos(alpha), A*sin(alpha)), so the nonlinear
    fit reduces to an exact linear solve with the frequency held at nu.
    """
    theta = nu * np.log(p)
    env = p**-0.5
    design = np.column_stack([env * np.cos(theta), -env * np.sin(theta)])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    a, b = coef
    amplitude = math.hypot(a, b)
    alpha = math.atan2(b, a) % math.pi
    resid = float(np.sqrt(np.mean((design @ coef - values) ** 2))
                  / np.sqrt(np.mean(values**2)))
    return alpha, amplitude, resid


def _nearest_eigenvalue(h: float, mesh: MomentumMesh, params: PotentialParams) -> float:
    """Real eigenvalue of the E = 0 kernel closest to 1."""
    entries = assemble_kernel(0.0, h, mesh, params).entries
    ev = np.linalg.eigvals(entries)
    real = ev[np.abs(ev.imag) <= 1e-8 * (1.0 + np.abs(ev))].real
    return float(real[np.argmin(np.abs(real - 1.0))])


def threshold_mesh(h: float, cutoff: float, params: PotentialParams,
                   n_points: int = 256, k_min_hint: float | None = None) -> MomentumMesh:
    """Mesh whose infrared floor is phase-matched to the threshold state.

    Truncating the momentum range at k_min quantizes the E = 0 spectrum:
    the kernel eigenvalue nearest 1 sweeps through 1 once as ln(k_min)
    moves through a half-period pi/nu.  The extracted oscillation phase
    is only clean when that eigenvalue is essentially 1, so this scans
    one period below k_min_hint and root-finds the matching k_min.
    """
    if k_min_hint is None:
        k_min_hint = cutoff * DEFAULT_KMIN_RATIO
    period = math.pi / params.nu
    hi_f = math.log(k_min_hint)
    lo_f = hi_f - period
    n_eff = max(n_points, min_points(cutoff, math.exp(lo_f), params))

    def lam(ln_kmin: float) -> float:
        m = build_mesh(cutoff, n_points=n_eff, k_min=math.exp(ln_kmin), params=params)
        return _nearest_eigenvalue(h, m, params) - 1.0

    # Coarse scan first: lam is smooth within an eigenvalue branch but
    # jumps where the nearest-to-1 identity switches, so only bracket a
    # sign change that is not across a jump.
    grid = np.linspace(hi_f, lo_f, 17)
    vals = [lam(x) for x in grid]
    for i in range(len(grid) - 1):
        if vals[i] * vals[i + 1] <= 0.0 and abs(vals[i + 1] - vals[i]) < 0.15:
            root = brentq(lam, grid[i], grid[i + 1], xtol=1e-10)
            return build_mesh(cutoff, n_points=n_eff, k_min=math.exp(root), params=params)
    raise NoThresholdSolutionError(
        f"no threshold-matched k_min in [{math.exp(lo_f):.3e}, {k_min_hint:.3e}] "
        f"for cutoff={cutoff}, h={h}")


def threshold_solution(h: float, mesh: MomentumMesh,
                       params: PotentialParams) -> ThresholdSolution:
    """Threshold eigenvector and its oscillation phase alpha in [0, pi).

    Requires the kernel eigenvalue nearest 1 to be within EIGENVALUE_TOL
    of 1; otherwise the supplied h does not support a near-threshold
    state at this mesh and NoThresholdSolutionError is raised.
    """
    entries = assemble_kernel(0.0, h, mesh, params).entries
    try:
        ev, vec = np.linalg.eig(entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"threshold eigensolve failed: {exc}") from exc
    idx = int(np.argmin(np.abs(ev - 1.0)))
    if abs(ev[idx] - 1.0) > EIGENVALUE_TOL:
        raise NoThresholdSolutionError(
            f"nearest threshold eigenvalue {ev[idx]} differs from 1 by more than "
            f"{EIGENVALUE_TOL}; h={h} admits no near-threshold state at this mesh")
    phi = vec[:, idx]
    # Real eigenvalue of a real matrix: rotate away any overall complex phase.
    phi = (phi * np.exp(-1j * np.angle(phi[np.argmax(np.abs(phi))]))).real
    phi = phi / np.linalg.norm(phi)

    p = mesh.nodes
    window = (p > WINDOW_LOW_FACTOR * mesh.k_min) & (p < WINDOW_HIGH_FACTOR * mesh.cutoff)
    alpha, amplitude, resid = _fit_phase(p[window], phi[window], params.nu)
    return ThresholdSolution(values=phi, alpha=alpha, fit_residual=resid,
                             amplitude=amplitude, mesh=mesh)


def zero_crossing_spacings(solution: ThresholdSolution) -> np.ndarray:
    """Spacings in ln(p) between sign changes of p**(1/2) * phi0(p) in the window."""
    mesh = solution.mesh
    p = mesh.nodes
    window = (p > WINDOW_LOW_FACTOR * mesh.k_min) & (p < WINDOW_HIGH_FACTOR * mesh.cutoff)
    p_w = p[window]
    g = np.sqrt(p_w) * solution.values[window]
    sign_change = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
    # Linear interpolation of each crossing location in ln(p).
    lnp = np.log(p_w)
    crossings = [lnp[i] - g[i] * (lnp[i + 1] - lnp[i]) / (g[i + 1] - g[i])
                 for i in sign_change]
    return np.diff(crossings)
