"""Bound-state spectrum of the regulated equation and its geometric tower.

A binding energy B > 0 is a value where the homogeneous kernel at
E = -B has a unit eigenvalue.  The spectrum forms a geometric tower
B_N / B_{N+1} = exp(2*pi/nu) accumulating at threshold; with the running
counterterm active the shallow part of the tower is cutoff independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discretization import MomentumMesh, assemble_kernel
from .errors import ConfigurationError, DomainError, InsufficientDataError, NumericalError
from .potential import PotentialParams
from .rg import CountertermSchedule, coupling_h

# Refinement width of the bisection in ln(B); equals the relative width in B.
BISECT_TOL = 1e-10

# Scan density: energy grid points per tower period exp(2*pi/nu).
POINTS_PER_PERIOD = 8

# Default physical window relative to the regulator scales: states outside
# [1e3*k_min^2, 1e-2*cutoff^2] are flagged as regulator dominated.
REG_LOW_FACTOR = 1e3
REG_HIGH_FACTOR = 1e-2


@dataclass(frozen=True)
class Spectrum:
    """Binding energies in descending order with tower metadata."""

    binding_energies: tuple[float, ...]
    cutoff: float
    h_used: float
    params: PotentialParams
    k_min: float

    def __post_init__(self):
        b = self.binding_energies
        if any(x <= 0 for x in b) or any(b[i] <= b[i + 1] for i in range(len(b) - 1)):
            raise DomainError("binding energies must be positive and strictly descending")

    def regulator_dominated(self, b: float) -> bool:
        return not (REG_LOW_FACTOR * self.k_min**2 <= b <= REG_HIGH_FACTOR * self.cutoff**2)

    def ratios(self) -> list[float]:
        b = self.binding_energies
        return [b[i] / b[i + 1] for i in range(len(b) - 1)]


@dataclass(frozen=True)
class TowerFit:
    """Least-squares line through (N, ln B_N - 2 ln cutoff)."""

    c1: float
    slope: float
    residual: float


def _real_eigenvalues(entries: np.ndarray) -> np.ndarray:
    try:
        ev = np.linalg.eigvals(entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolve failed on {entries.shape} kernel: {exc}") from exc
    real = ev[np.abs(ev.imag) <= 1e-8 * (1.0 + np.abs(ev))].real
    return real if real.size else ev.real


def eigenvalue_at(energy: float, h: float, mesh: MomentumMesh,
                  params: PotentialParams) -> float:
    """Real kernel eigenvalue closest to 1; a bound state sits where it crosses 1."""
    if energy >= 0.0:
        raise DomainError(f"bound-state eigenvalue requires E < 0, got {energy}")
    real = _real_eigenvalues(assemble_kernel(energy, h, mesh, params).entries)
    return float(real[np.argmin(np.abs(real - 1.0))])


def _count_above_one(energy: float, h: float, mesh: MomentumMesh,
                     params: PotentialParams) -> int:
    """Number of real kernel eigenvalues >= 1; decreases by 1 at each B_N.

    Counting crossings instead of tracking a single eigenvalue keeps the
    bracketing monotone even where the nearest-to-1 eigenvalue changes
    identity between two states.
    """
    real = _real_eigenvalues(assemble_kernel(energy, h, mesh, params).entries)
    return int(np.count_nonzero(real >= 1.0))


def resolve_h(h_or_schedule: float | CountertermSchedule, cutoff: float) -> float:
    """Fixed coupling value from either a number or a schedule at this cutoff."""
    if isinstance(h_or_schedule, CountertermSchedule):
        h = coupling_h(cutoff, h_or_schedule)
        if h is None:
            raise DomainError(
                f"cutoff {cutoff} sits on a coupling pole; perturb the cutoff")
        return h
    return float(h_or_schedule)


def find_spectrum(window: tuple[float, float], h_or_schedule: float | CountertermSchedule,
                  cutoff: float, mesh: MomentumMesh, params: PotentialParams) -> Spectrum:
    """All binding energies in [B_min, B_max], each refined to BISECT_TOL in ln B.

    Scans a log grid in B with at least POINTS_PER_PERIOD points per tower
    period, brackets every unit-eigenvalue crossing through the monotone
    above-1 eigenvalue count, and bisects each bracket in ln B.
    """
    b_min, b_max = window
    if not (0.0 < b_min < b_max):
        raise ConfigurationError(f"need 0 < B_min < B_max, got {window}")
    if b_min < mesh.k_min**2 or b_max > 4.0 * cutoff**2:
        raise ConfigurationError(
            f"window {window} outside mesh resolution "
            f"[{mesh.k_min**2}, {4.0 * cutoff**2}] for cutoff={cutoff}, k_min={mesh.k_min}")
    h = resolve_h(h_or_schedule, cutoff)

    period = 2.0 * math.pi / params.nu
    lo, hi = math.log(b_min), math.log(b_max)
    n_grid = max(2, math.ceil(POINTS_PER_PERIOD * (hi - lo) / period) + 1)
    grid = np.linspace(lo, hi, n_grid)
    counts = [_count_above_one(-math.exp(x), h, mesh, params) for x in grid]

    found: list[float] = []
    for i in range(n_grid - 1):
        c_lo, c_hi = counts[i], counts[i + 1]
        for target in range(c_lo - 1, c_hi - 1, -1):
            # Boundary in ln B where the count first drops to <= target.
            a, b = grid[i], grid[i + 1]
            while b - a > BISECT_TOL:
                mid = 0.5 * (a + b)
                if _count_above_one(-math.exp(mid), h, mesh, params) > target:
                    a = mid
                else:
                    b = mid
            found.append(math.exp(0.5 * (a + b)))
    found.sort(reverse=True)
    return Spectrum(binding_energies=tuple(found), cutoff=cutoff, h_used=h,
                    params=params, k_min=mesh.k_min)


def fit_tower(spectrum: Spectrum) -> TowerFit:
    """Fit ln B_N = c1 + slope*N + 2 ln cutoff with the deepest state as N = 0."""
    b = spectrum.binding_energies
    if len(b) < 3:
        raise InsufficientDataError(f"tower fit needs >= 3 states, got {len(b)}")
    n = np.arange(len(b), dtype=float)
    y = np.log(np.array(b)) - 2.0 * math.log(spectrum.cutoff)
    slope, c1 = np.polyfit(n, y, 1)
    resid = float(np.sqrt(np.mean((y - (c1 + slope * n)) ** 2)))
    return TowerFit(c1=float(c1), slope=float(slope), residual=resid)
