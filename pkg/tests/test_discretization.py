"""Tests of mesh construction and Nystrom kernel assembly."""

import math

import numpy as np
import pytest

from invsq import PotentialParams, assemble_kernel, build_mesh
from invsq.discretization import kernel_profile, mesh_to_rows, min_points
from invsq.errors import ConfigurationError, DomainError

PARAMS = PotentialParams(nu=1.0)

# Frozen oracle: integral of q**(-1/2)*cos(ln q) over [1e-4, 100]; adaptive
# quadrature agrees with the closed-form antiderivative
# e^(u/2)*(cos(u)/2 + sin(u))/(5/4), u = ln q, to 2e-15.
OSC_INTEGRAL = -8.37650372117378

# Frozen oracle: largest eigenvalue of the E = -1, h = 0 kernel at
# cutoff = 100, nu = 1; identical at n_points = 256 and 512.
EIGENVALUE_REF = 2.98839608020901


def test_mesh_integrates_inverse_q():
    mesh = build_mesh(100.0, n_points=64, k_min=1.0, params=PARAMS)
    val = float(np.sum(mesh.weights / mesh.nodes))
    assert val == pytest.approx(math.log(100.0), abs=1e-8)


def test_mesh_integrates_polynomial():
    mesh = build_mesh(100.0, n_points=128, k_min=0.001, params=PARAMS)
    val = float(np.sum(mesh.weights * mesh.nodes**2))
    assert val == pytest.approx((100.0**3 - 0.001**3) / 3.0, rel=1e-6)


def test_mesh_integrates_oscillatory_class():
    mesh = build_mesh(100.0, n_points=256, k_min=1e-4, params=PARAMS)
    val = float(np.sum(mesh.weights * mesh.nodes**-0.5 * np.cos(np.log(mesh.nodes))))
    assert val == pytest.approx(OSC_INTEGRAL, rel=1e-6)


def test_mesh_invariants():
    mesh = build_mesh(50.0, n_points=200, k_min=1e-3, params=PARAMS)
    assert np.all(np.diff(mesh.nodes) > 0)
    assert mesh.nodes[0] > mesh.k_min and mesh.nodes[-1] < mesh.cutoff
    assert np.all(mesh.weights > 0)
    assert float(np.sum(mesh.weights)) == pytest.approx(50.0 - 1e-3, rel=1e-10)


def test_mesh_resolution_contract():
    required = min_points(100.0, 1e-6 * 100.0, PARAMS)
    with pytest.raises(ConfigurationError) as err:
        build_mesh(100.0, n_points=required - 10, params=PARAMS)
    assert str(required) in str(err.value)


def test_mesh_rejects_bad_geometry():
    with pytest.raises(DomainError):
        build_mesh(-1.0, n_points=64, params=PARAMS)
    with pytest.raises(ConfigurationError):
        build_mesh(10.0, n_points=64, k_min=20.0, params=PARAMS)
    with pytest.raises(ConfigurationError):
        build_mesh(10.0, n_points=64, k_min=1.0, params=None)


def test_mesh_snap_places_edge():
    k = 1.37
    mesh = build_mesh(100.0, n_points=256, k_min=1e-4, params=PARAMS, snap=k)
    assert np.min(np.abs(mesh.edges - math.log(k))) < 1e-12
    # no node coincides with the snapped momentum
    assert np.min(np.abs(mesh.nodes - k)) > 1e-8
    with pytest.raises(ConfigurationError):
        build_mesh(100.0, n_points=256, k_min=1e-4, params=PARAMS, snap=1e-5)


def test_kernel_zero_energy_entries():
    mesh = build_mesh(10.0, n_points=64, k_min=0.01, params=PARAMS)
    km = assemble_kernel(0.0, 0.0, mesh, PARAMS)
    # q^2/(0 - q^2) = -1: plain entries are -c*w_j*f(p_i, q_j) > 0, and the
    # kink correction preserves positivity
    assert np.all(km.entries > 0.0)
    # off the kink panel the correction vanishes, so spot-check a far pair
    i, j = 5, len(mesh) - 3
    expected = -PARAMS.c * mesh.weights[j] / max(mesh.nodes[i], mesh.nodes[j])
    assert km.entries[i, j] == pytest.approx(expected, rel=1e-14)


def test_kernel_rejects_positive_energy():
    mesh = build_mesh(10.0, n_points=64, k_min=0.01, params=PARAMS)
    with pytest.raises(DomainError):
        assemble_kernel(1.0, 0.0, mesh, PARAMS)


def test_kernel_counterterm_is_rank_one():
    mesh = build_mesh(10.0, n_points=64, k_min=0.01, params=PARAMS)
    k0 = assemble_kernel(-1.0, 0.0, mesh, PARAMS).entries
    k1 = assemble_kernel(-1.0, 2.5, mesh, PARAMS).entries
    assert np.linalg.matrix_rank(k1 - k0, tol=1e-10) == 1


def test_kernel_profile_shape():
    mesh = build_mesh(10.0, n_points=64, k_min=0.01, params=PARAMS)
    prof = kernel_profile(mesh, 0.7)
    i, j = 10, 40
    f = 1.0 / max(mesh.nodes[i], mesh.nodes[j])
    assert prof[i, j] == pytest.approx(f + 0.7 / 10.0)
    assert np.allclose(prof, prof.T)


def test_kernel_eigenvalue_mesh_convergence():
    vals = []
    for n in (256, 512):
        mesh = build_mesh(100.0, n_points=n, params=PARAMS)
        ev = np.linalg.eigvals(assemble_kernel(-1.0, 0.0, mesh, PARAMS).entries)
        vals.append(float(np.max(ev[np.abs(ev.imag) < 1e-10].real)))
    assert vals[0] == pytest.approx(EIGENVALUE_REF, rel=1e-10)
    assert abs(vals[1] - vals[0]) / vals[0] < 1e-6


def test_mesh_to_rows():
    mesh = build_mesh(10.0, n_points=64, k_min=0.01, params=PARAMS)
    rows = mesh_to_rows(mesh)
    assert len(rows) == len(mesh)
    assert rows[0][0] == 0
    assert rows[3][1] == pytest.approx(mesh.nodes[3])
    assert rows[3][2] == pytest.approx(mesh.weights[3])
