"""On-shell scattering: phase shifts, cot(delta), and total cross sections.

For E = k^2 > 0 the propagator pole at q = k is handled by a single
principal-value subtraction: the regular, subtracted integrand is
discretized on the shared mesh, while the singular scalar is supplied in
closed form, (1/(2k)) * ln((cutoff+k)/(cutoff-k)), together with the
exact residue term -i*pi*k/2.  The on-shell point is appended to the
linear system as an extra unknown so k never has to sit on a mesh node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discretization import MomentumMesh, apply_kink_correction, build_mesh
from .errors import DomainError, InsufficientDataError, NumericalError, UnitarityError
from .potential import TWO_PI_SQ, PotentialParams

# Validity band of the on-shell solve relative to the mesh: below, the
# infrared floor contaminates; above, the subtraction scalar degrades.
BAND_LOW_FACTOR = 10.0
BAND_HIGH_FACTOR = 0.5

UNITARITY_TOL = 1e-3


@dataclass(frozen=True)
class PhasePoint:
    """On-shell amplitude and derived observables at momentum k."""

    k: float
    t_onshell: complex
    big_t: complex
    delta_mod_pi: float
    cot_delta: float
    sigma_tot: float

    @property
    def sigma_over_unitarity(self) -> float:
        return self.sigma_tot * self.k**2 / (4.0 * math.pi)


@dataclass(frozen=True)
class PhaseLawFit:
    """Linear fit of the unwrapped phase shift against ln(k/lambda_star)."""

    beta_angle: float
    slope: float
    residual: float


def phase_from_amplitude(big_t: complex, k: float,
                         unitarity_tol: float = UNITARITY_TOL) -> tuple[float, float]:
    """Invert T = 1/(k*cot(delta) - i*k) to (delta mod pi, cot delta).

    Raises UnitarityError when Im(1/T) deviates from -k by more than
    unitarity_tol relative, which signals an unconverged solve.
    """
    if big_t == 0:
        raise DomainError("amplitude must be nonzero")
    inv = 1.0 / big_t
    if abs(inv.imag + k) > unitarity_tol * k:
        raise UnitarityError(
            f"Im(1/T)={inv.imag} vs -k={-k}: relative violation "
            f"{abs(inv.imag + k) / k:.3e} exceeds {unitarity_tol}")
    kcot = inv.real
    delta = math.atan2(k, kcot)  # in (0, pi) for k > 0; exactly pi/2 at kcot = 0
    return delta % math.pi, kcot / k


def total_cross_section(point: PhasePoint) -> float:
    """S-wave total cross section 4*pi/((k*cot delta)^2 + k^2)."""
    kcot = point.k * point.cot_delta
    return 4.0 * math.pi / (kcot**2 + point.k**2)


def solve_onshell(k: float, h: float, mesh: MomentumMesh,
                  params: PotentialParams) -> PhasePoint:
    """Solve the subtracted on-shell equation at E = k^2 and fill a PhasePoint.

    The mesh argument supplies the discretization spec (cutoff, k_min,
    n_points); the actual quadrature is rebuilt with a panel edge snapped
    to k.  The half-off-shell amplitude has a kink and a weak log
    singularity exactly at q = k, so keeping k on a panel boundary with
    graded panels around it is required for converged phases.
    """
    cutoff, k_min = mesh.cutoff, mesh.k_min
    if not (BAND_LOW_FACTOR * k_min < k < BAND_HIGH_FACTOR * cutoff):
        raise DomainError(
            f"k={k} outside validity band ({BAND_LOW_FACTOR * k_min}, "
            f"{BAND_HIGH_FACTOR * cutoff})")
    mesh = build_mesh(cutoff, n_points=mesh.spec_points, k_min=k_min, params=params,
                      snap=k)

    q = mesh.nodes
    w = mesh.weights
    n = len(q)
    e = k * k
    c = params.c
    p = np.concatenate([q, [k]])  # row momenta; on-shell point appended

    profile = 1.0 / np.maximum.outer(p, np.concatenate([q, [k]])) + h / cutoff
    denom = e - q**2

    a = np.zeros((n + 1, n + 1), dtype=complex)
    a[:, :n] = c * profile[:, :n] * (w * q**2 / denom)[None, :]
    # Subtraction of the on-shell value: the quadrature sum of 1/(e - q^2)
    # is replaced by its closed-form principal value plus the residue term.
    pv_scalar = math.log((cutoff + k) / (cutoff - k)) / (2.0 * k)
    correction = e * (pv_scalar - float(np.sum(w / denom))) - 1j * math.pi * k / 2.0
    a[:, n] = c * profile[:, n] * correction
    # Kink-panel product integration on the regular block; the panels
    # touching the pole edge at ln(k) stay on plain weights (the smooth
    # factor is singular on their boundary, and grading makes them tiny).
    lnk = math.log(k)
    pole_panels = frozenset(
        j for j in range(len(mesh.edges) - 1)
        if abs(mesh.edges[j] - lnk) < 1e-12 or abs(mesh.edges[j + 1] - lnk) < 1e-12)
    block = a[:n, :n]
    apply_kink_correction(block, mesh, q**2 / denom, c, skip_panels=pole_panels)
    a[:n, :n] = block

    rhs = TWO_PI_SQ * c * profile[:, n]
    try:
        t = np.linalg.solve(np.eye(n + 1) - a, rhs)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(np.eye(n + 1) - a)
        raise NumericalError(f"on-shell solve failed at k={k} (cond ~ {cond:.3e}): {exc}") from exc
    if not np.all(np.isfinite(t.view(float))):
        raise NumericalError(f"on-shell solve produced non-finite amplitude at k={k}")

    t_on = complex(t[n])
    big_t = -t_on / (4.0 * math.pi)
    delta, cot_delta = phase_from_amplitude(big_t, k)
    kcot = k * cot_delta
    sigma = 4.0 * math.pi / (kcot**2 + k**2)
    return PhasePoint(k=k, t_onshell=t_on, big_t=big_t, delta_mod_pi=delta,
                      cot_delta=cot_delta, sigma_tot=sigma)


def unwrap_deltas(points: list[PhasePoint]) -> np.ndarray:
    """Continuous phase-shift branch from mod-pi values, ordered by increasing k."""
    pts = sorted(points, key=lambda pt: pt.k)
    out = np.empty(len(pts))
    out[0] = pts[0].delta_mod_pi
    for i, pt in enumerate(pts[1:], start=1):
        m = round((out[i - 1] - pt.delta_mod_pi) / math.pi)
        out[i] = pt.delta_mod_pi + m * math.pi
    return out


def fit_phase_law(points: list[PhasePoint], lambda_star: float,
                  params: PotentialParams) -> PhaseLawFit:
    """Fit the unwrapped phase shift to beta - nu*ln(k/lambda_star).

    Needs at least 10 points spanning 1.5 periods pi/nu in ln(k).
    The returned offset is reduced mod pi (the phase is only defined
    mod pi to begin with).
    """
    if len(points) < 10:
        raise InsufficientDataError(f"phase-law fit needs >= 10 points, got {len(points)}")
    ks = np.sort([pt.k for pt in points])
    span = math.log(ks[-1] / ks[0])
    if span < 1.5 * math.pi / params.nu:
        raise InsufficientDataError(
            f"phase-law fit needs >= 1.5 periods in ln(k) "
            f"({1.5 * math.pi / params.nu:.3f}), got span {span:.3f}")
    delta = unwrap_deltas(points)
    x = np.log(ks / lambda_star)
    slope, intercept = np.polyfit(x, delta, 1)
    resid = float(np.sqrt(np.mean((delta - (intercept + slope * x)) ** 2)))
    return PhaseLawFit(beta_angle=float(intercept) % math.pi, slope=float(slope),
                       residual=resid)
