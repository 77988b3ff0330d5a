"""Quadrature meshes and Nystrom kernel assembly.

The regulated integral equation is discretized on a composite
Gauss-Legendre mesh that is uniform in ln(q): solutions oscillate
uniformly in ln(q), so log-spaced panels resolve every cycle equally.
The log interval [ln(k_min), ln(cutoff)] is split into panels of length
at most pi/(4*nu) with a fixed Gauss-Legendre order per panel; the
weights carry the q = exp(u) Jacobian so that sum(w_i * g(q_i))
approximates the integral of g dq.

The momentum-dependence factor 1/max(p, q) has a derivative kink on the
diagonal, which caps plain Nystrom at second-order convergence.  Kernel
assembly therefore applies a product-integration correction on the one
panel per row that contains the kink: the smooth part of the integrand
is interpolated on the panel nodes and the two kink branches (1/p and
1/q) are integrated against that interpolant exactly, restoring
spectral convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConfigurationError, DomainError
from .potential import PotentialParams

# Default infrared floor relative to the cutoff.  The truncation error of
# dropping [0, k_min] is O(sqrt(k_min/cutoff)) on the oscillatory
# q**(-1/2) solution class, far below solver tolerance at this ratio.
DEFAULT_KMIN_RATIO = 1e-6

# Resolution contract: at least this many nodes per period pi/nu in ln(q).
NODES_PER_PERIOD = 8

# Geometric grading into a snapped interior edge (used by the on-shell
# solver: the half-off-shell amplitude has a weak log singularity there).
GRADE_LEVELS = 8
GRADE_RATIO = 0.25


@dataclass(frozen=True)
class MomentumMesh:
    """Composite Gauss-Legendre quadrature on (k_min, cutoff).

    nodes/weights integrate dq; edges are the panel boundaries in
    u = ln(q) and order is the fixed Gauss-Legendre order per panel.
    spec_points records the requested n_points so derived meshes (e.g.
    snapped at an on-shell momentum) can be rebuilt at equal resolution.
    """

    nodes: np.ndarray
    weights: np.ndarray
    cutoff: float
    k_min: float
    edges: np.ndarray = field(repr=False)
    order: int = 0
    spec_points: int = 0

    def __len__(self) -> int:
        return len(self.nodes)

    def panel_of(self, i: int) -> int:
        return i // self.order


@dataclass(frozen=True)
class KernelMatrix:
    """Nystrom matrix of the regulated integral operator at fixed energy."""

    entries: np.ndarray
    energy: float
    h: float
    mesh: MomentumMesh


def min_points(cutoff: float, k_min: float, params: PotentialParams) -> int:
    """Smallest n_points honoring the per-period resolution contract."""
    span = math.log(cutoff / k_min)
    return max(16, math.ceil(NODES_PER_PERIOD * params.nu * span / math.pi))


def _graded_segment(a: float, b: float, maxlen: float, refine_end: str) -> list[float]:
    """Uniform panel edges on [a, b], geometrically refined toward one end."""
    n = max(1, math.ceil((b - a) / maxlen))
    edges = list(np.linspace(a, b, n + 1))
    if refine_end == "right":
        lo, hi = edges[-2], edges[-1]
        extra = [hi - (hi - lo) * GRADE_RATIO**j for j in range(1, GRADE_LEVELS + 1)]
        edges = edges[:-1] + extra + [hi]
    elif refine_end == "left":
        lo, hi = edges[0], edges[1]
        extra = [lo + (hi - lo) * GRADE_RATIO**j for j in range(GRADE_LEVELS, 0, -1)]
        edges = [lo] + extra + edges[1:]
    return edges


def build_mesh(cutoff: float, n_points: int = 256, k_min: float | None = None,
               params: PotentialParams | None = None,
               snap: float | None = None) -> MomentumMesh:
    """Composite log-Gauss-Legendre mesh on (k_min, cutoff).

    When snap is given, ln(snap) is forced to be a panel boundary with
    geometric grading into it from both sides; no node then falls near
    the snapped momentum.  Raises ConfigurationError when n_points is
    below the per-period resolution contract, naming the required
    minimum.
    """
    if params is None:
        raise ConfigurationError("build_mesh requires PotentialParams (sets panel length)")
    if cutoff <= 0.0:
        raise DomainError(f"cutoff must be positive, got {cutoff}")
    if k_min is None:
        k_min = cutoff * DEFAULT_KMIN_RATIO
    if not (0.0 < k_min < cutoff):
        raise ConfigurationError(f"need 0 < k_min < cutoff, got k_min={k_min}, cutoff={cutoff}")
    required = min_points(cutoff, k_min, params)
    if n_points < required:
        raise ConfigurationError(
            f"n_points={n_points} violates the resolution contract of "
            f"{NODES_PER_PERIOD} nodes per period pi/nu in ln(q); "
            f"need at least n_points={required} for cutoff={cutoff}, k_min={k_min}, "
            f"nu={params.nu}")

    lo, hi = math.log(k_min), math.log(cutoff)
    maxlen = math.pi / (4.0 * params.nu)
    order = math.ceil(n_points / max(1, math.ceil((hi - lo) / maxlen)))
    if snap is None:
        edges = list(np.linspace(lo, hi, max(1, math.ceil((hi - lo) / maxlen)) + 1))
    else:
        mid = math.log(snap)
        if not (lo + 1e-9 < mid < hi - 1e-9):
            raise ConfigurationError(
                f"snap momentum {snap} must lie strictly inside ({k_min}, {cutoff})")
        edges = (_graded_segment(lo, mid, maxlen, "right")
                 + _graded_segment(mid, hi, maxlen, "left")[1:])

    x, w = leggauss(order)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        u = 0.5 * (b - a) * x + 0.5 * (a + b)
        q = np.exp(u)
        nodes.append(q)
        weights.append(0.5 * (b - a) * w * q)  # Jacobian dq = q du
    return MomentumMesh(nodes=np.concatenate(nodes), weights=np.concatenate(weights),
                        cutoff=cutoff, k_min=k_min, edges=np.asarray(edges),
                        order=order, spec_points=n_points)


def kernel_profile(mesh: MomentumMesh, h: float) -> np.ndarray:
    """Momentum-dependence factor f(p_i, q_j) + h/cutoff of the kernel."""
    f = 1.0 / np.maximum.outer(mesh.nodes, mesh.nodes)
    return f + h / mesh.cutoff


def _lagrange_eval(pts: np.ndarray, u_m: np.ndarray, bary: np.ndarray) -> np.ndarray:
    """Matrix L[t, m] = m-th Lagrange basis (nodes u_m) at pts[t]."""
    d = pts[:, None] - u_m[None, :]
    hit = np.abs(d) < 1e-14
    d = np.where(hit, 1.0, d)
    L = np.prod(d, axis=1)[:, None] * bary[None, :] / d
    for t, m in zip(*np.nonzero(hit)):
        L[t, :] = 0.0
        L[t, m] = 1.0
    return L


@lru_cache(maxsize=32)
def _cached_leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    return leggauss(order)


def _barycentric(u_m: np.ndarray) -> np.ndarray:
    return 1.0 / np.array([np.prod(u_m[m] - np.delete(u_m, m))
                           for m in range(len(u_m))])


def _kink_weights(u_m: np.ndarray, bary: np.ndarray, a: float, b: float,
                  local: int, p: float, xs: np.ndarray, ws: np.ndarray) -> np.ndarray:
    """Product-integration weights for one kink panel.

    Returns omega with sum_m omega[m] * G(u_m) approximating the panel
    integral of f(p, e**u) * G(u) du, where p is the row momentum and G
    is the smooth remainder of the integrand (including the Jacobian).
    The two branches 1/p (q < p) and 1/q (q > p) are integrated against
    the panel's Lagrange interpolant with a fresh Gauss rule per branch.
    """
    up = u_m[local]
    omega = np.zeros(len(u_m))
    if up > a:
        pts = 0.5 * (up - a) * xs + 0.5 * (a + up)
        omega += (0.5 * (up - a) / p) * (ws @ _lagrange_eval(pts, u_m, bary))
    if b > up:
        pts = 0.5 * (b - up) * xs + 0.5 * (b + up)
        omega += 0.5 * (b - up) * (ws @ (np.exp(-pts)[:, None]
                                         * _lagrange_eval(pts, u_m, bary)))
    return omega


def kink_panel_weights(mesh: MomentumMesh, row: int) -> np.ndarray:
    """Product-integration weights for the kink panel containing a mesh row."""
    panel = mesh.panel_of(row)
    cols = slice(panel * mesh.order, (panel + 1) * mesh.order)
    u_m = np.log(mesh.nodes[cols])
    xs, ws = _cached_leggauss(mesh.order + 2)
    return _kink_weights(u_m, _barycentric(u_m), mesh.edges[panel], mesh.edges[panel + 1],
                         row - panel * mesh.order, mesh.nodes[row], xs, ws)


def apply_kink_correction(entries: np.ndarray, mesh: MomentumMesh, smooth: np.ndarray,
                          scale: float, skip_panels: frozenset[int] = frozenset()) -> None:
    """Replace the plain kink-panel quadrature of each row in place.

    smooth holds the per-column smooth factor s(q_j) of the integrand
    (without weight or profile); entries[i, j] is adjusted by
    scale * s_j * q_j * (omega - w_u * f(p_i, q_j)) on the panel
    containing p_i.  Panels listed in skip_panels (those abutting a
    propagator pole edge) are left on plain weights.
    """
    q = mesh.nodes
    wu = mesh.weights / q
    xs, ws = _cached_leggauss(mesh.order + 2)
    for panel in range(len(mesh.edges) - 1):
        if panel in skip_panels:
            continue
        cols = slice(panel * mesh.order, (panel + 1) * mesh.order)
        u_m = np.log(q[cols])
        bary = _barycentric(u_m)
        a, b = mesh.edges[panel], mesh.edges[panel + 1]
        for local in range(mesh.order):
            i = panel * mesh.order + local
            omega = _kink_weights(u_m, bary, a, b, local, q[i], xs, ws)
            plain = wu[cols] / np.maximum(q[i], q[cols])
            entries[i, cols] += scale * smooth[cols] * q[cols] * (omega - plain)


def assemble_kernel(energy: float, h: float, mesh: MomentumMesh,
                    params: PotentialParams) -> KernelMatrix:
    """Real Nystrom matrix for E <= 0.

    Entry (i, j) is c * w_j * q_j^2 / (E - q_j^2) * (f(p_i, q_j) + h/cutoff),
    with the kink-panel product-integration correction applied row by row.
    For E > 0 the propagator has a pole inside the mesh; callers must use
    the scattering module's subtracted assembly instead.
    """
    if energy > 0.0:
        raise DomainError(
            f"assemble_kernel requires E <= 0 (got E={energy}); "
            "use scattering.solve_onshell for positive energies")
    q = mesh.nodes
    smooth = q**2 / (energy - q**2)
    entries = params.c * kernel_profile(mesh, h) * (mesh.weights * smooth)[None, :]
    apply_kink_correction(entries, mesh, smooth, params.c)
    return KernelMatrix(entries=entries, energy=energy, h=h, mesh=mesh)


def mesh_to_rows(mesh: MomentumMesh) -> list[tuple[int, float, float]]:
    """(index, node, weight) rows for CSV debugging output."""
    return [(i, float(p), float(w))
            for i, (p, w) in enumerate(zip(mesh.nodes, mesh.weights))]
