"""Renormalization-group content of the running counterterm.

The dimensionless coupling multiplying the contact term runs on a limit
cycle: it is an exactly log-periodic function of the cutoff with period
pi/nu in ln(cutoff) and a simple pole once per period.  Everything in
this module is analytic except for the numerical calibration
cross-check, which re-derives the coupling from a fixed bound state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.optimize import brentq

from .errors import DomainError, NumericalError, RootNotFoundError
from .potential import PotentialParams

# Sweep drivers skip a symmetric window of this full width in
# nu*ln(cutoff/lambda_star) around each pole of the coupling.
POLE_WINDOW = 1e-6


@dataclass(frozen=True)
class CountertermSchedule:
    """Running-coupling schedule fixed by the dimensionful scale lambda_star."""

    lambda_star: float
    params: PotentialParams

    def __post_init__(self):
        if not (self.lambda_star > 0.0):
            raise DomainError(f"lambda_star must be positive, got {self.lambda_star}")

    @property
    def threshold_phase(self) -> float:
        """Phase alpha = -nu*ln(lambda_star) of the zero-energy solution, mod pi."""
        return (-self.params.nu * math.log(self.lambda_star)) % math.pi


@dataclass(frozen=True)
class BetaFunctionPoint:
    h: float
    beta: float


def _reduced_phase(cutoff: float, schedule: CountertermSchedule) -> float:
    """nu*ln(cutoff/lambda_star) reduced to [-pi/2, pi/2].

    Reducing before taking the tangent makes the log-periodicity of the
    coupling exact in floating point.
    """
    if cutoff <= 0.0:
        raise DomainError(f"cutoff must be positive, got {cutoff}")
    theta = schedule.params.nu * math.log(cutoff / schedule.lambda_star)
    return math.remainder(theta, math.pi)


def pole_distance(cutoff: float, schedule: CountertermSchedule) -> float:
    """Distance of nu*ln(cutoff/lambda_star) from the nearest coupling pole, mod pi."""
    nu = schedule.params.nu
    theta_pole = -math.atan(1.0 / (2.0 * nu))
    return abs(math.remainder(_reduced_phase(cutoff, schedule) - theta_pole, math.pi))


def coupling_h(cutoff: float, schedule: CountertermSchedule) -> float | None:
    """Closed-form running coupling; None marks a pole.

    Returns (1 - 2*nu*tan(theta)) / (1 + 2*nu*tan(theta)) with
    theta = nu*ln(cutoff/lambda_star).  Within half of POLE_WINDOW of the
    denominator zero the value is unusable and None is returned; callers
    must skip the point or perturb the cutoff.
    """
    nu = schedule.params.nu
    if pole_distance(cutoff, schedule) < 0.5 * POLE_WINDOW:
        return None
    t = math.tan(_reduced_phase(cutoff, schedule))
    return (1.0 - 2.0 * nu * t) / (1.0 + 2.0 * nu * t)


def beta_function(h: float, params: PotentialParams) -> float:
    """Cutoff logarithmic derivative of the coupling; negative definite for nu > 0."""
    nu2 = params.nu**2
    return -0.25 * (1.0 - h) ** 2 - nu2 * (1.0 + h) ** 2


def beta_extremum(params: PotentialParams) -> tuple[float, float]:
    """Analytic maximizer and maximum of the beta function."""
    nu2 = params.nu**2
    h_max = -(nu2 - 0.25) / (nu2 + 0.25)
    return h_max, -nu2 / (nu2 + 0.25)


def preferred_scaling_factor(params: PotentialParams) -> float:
    """Cycle period of the coupling as a multiplicative cutoff factor, exp(pi/nu)."""
    return math.exp(math.pi / params.nu)


def vanishing_cutoffs(schedule: CountertermSchedule, n_lo: int, n_hi: int) -> list[float]:
    """Cutoffs at which the running coupling vanishes, one per cycle.

    The zero in each period is located by root-bracketing the closed form
    rather than trusting the naive period anchors lambda_star*exp(n*pi/nu),
    which sit at coupling value 1, not 0.  Indices n_lo..n_hi (inclusive)
    count periods relative to lambda_star.
    """
    if n_lo > n_hi:
        raise DomainError(f"need n_lo <= n_hi, got ({n_lo}, {n_hi})")
    nu = schedule.params.nu
    eps = 1e-12
    # The numerator 1 - 2*nu*tan(phi) changes sign exactly once for
    # phi in (0, pi/2) within each period.
    phi0 = brentq(lambda phi: 1.0 - 2.0 * nu * math.tan(phi), eps, 0.5 * math.pi - eps,
                  xtol=1e-15, rtol=8.9e-16)
    return [schedule.lambda_star * math.exp((phi0 + n * math.pi) / nu)
            for n in range(n_lo, n_hi + 1)]


def calibrate_h_from_bound_state(cutoff: float, b_ref: float, params: PotentialParams,
                                 n_points: int = 256, k_min: float | None = None) -> float:
    """Coupling value that puts a bound state exactly at energy -b_ref.

    The counterterm enters the kernel as a rank-1 update, so the
    unit-eigenvalue condition reduces to a single linear equation in h
    via the Woodbury identity; one LU solve determines h exactly at the
    given mesh.  The result is cross-checked against the eigenvalue of
    the assembled kernel.
    """
    from .bound_states import eigenvalue_at
    from .discretization import assemble_kernel, build_mesh

    if not (b_ref > 0.0):
        raise DomainError(f"b_ref must be a positive binding energy, got {b_ref}")
    if b_ref >= cutoff**2:
        raise DomainError(f"b_ref={b_ref} must lie well below cutoff^2={cutoff**2}")

    mesh = build_mesh(cutoff, n_points=n_points, k_min=k_min, params=params)
    energy = -b_ref
    k0 = assemble_kernel(energy, 0.0, mesh, params).entries
    q = mesh.nodes
    # Counterterm part of the kernel: (c/cutoff) * ones  (x)  w*q^2/(E - q^2).
    v = params.c / cutoff * mesh.weights * q**2 / (energy - q**2)
    try:
        lu = lu_factor(np.eye(len(q)) - k0)
        w = lu_solve(lu, np.ones(len(q)))
    except Exception as exc:  # singular at an h=0 bound state
        raise NumericalError(f"bare kernel singular at E={energy}: {exc}") from exc
    s = float(v @ w)
    if s == 0.0:
        raise RootNotFoundError("counterterm has no leverage on this state (v @ w = 0)")
    h = 1.0 / s

    lam = eigenvalue_at(energy, h, mesh, params)
    if abs(lam - 1.0) > 1e-6:
        raise RootNotFoundError(
            f"calibrated h={h} does not yield a unit eigenvalue (got {lam})")
    return h
