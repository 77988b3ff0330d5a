"""Tests of the on-shell solver, phase shifts, and cross sections."""

import math

import numpy as np
import pytest

from invsq import (
    CountertermSchedule,
    PhasePoint,
    PotentialParams,
    build_mesh,
    coupling_h,
    fit_phase_law,
    phase_from_amplitude,
    solve_onshell,
    total_cross_section,
)
from invsq.errors import DomainError, InsufficientDataError, UnitarityError
from invsq.scattering import unwrap_deltas

PARAMS = PotentialParams(nu=1.0)
SCHED = CountertermSchedule(lambda_star=1.0, params=PARAMS)


@pytest.fixture(scope="module")
def mesh100():
    return build_mesh(100.0, n_points=256, k_min=1e-4, params=PARAMS)


def _h(cutoff=100.0):
    return coupling_h(cutoff, SCHED)


def test_phase_from_amplitude_examples():
    k = 2.0
    delta, cot = phase_from_amplitude(1.0 / (-1j * k), k)
    assert delta == pytest.approx(math.pi / 2.0)
    assert cot == pytest.approx(0.0, abs=1e-15)
    delta, cot = phase_from_amplitude(1.0 / (k - 1j * k), k)
    assert delta == pytest.approx(math.pi / 4.0)
    assert cot == pytest.approx(1.0)
    delta, cot = phase_from_amplitude(1.0 / (-k - 1j * k), k)
    assert delta == pytest.approx(3.0 * math.pi / 4.0)
    assert cot == pytest.approx(-1.0)


def test_phase_from_amplitude_rejects_unitarity_violation():
    with pytest.raises(UnitarityError):
        phase_from_amplitude(1.0 / (1.0 - 0.5j), 1.0)
    with pytest.raises(DomainError):
        phase_from_amplitude(0.0, 1.0)


def test_total_cross_section_examples():
    pt = PhasePoint(k=2.0, t_onshell=0j, big_t=0j, delta_mod_pi=math.pi / 2,
                    cot_delta=0.0, sigma_tot=0.0)
    assert total_cross_section(pt) == pytest.approx(math.pi)
    pt_hard = PhasePoint(k=2.0, t_onshell=0j, big_t=0j, delta_mod_pi=0.01,
                         cot_delta=1e8, sigma_tot=0.0)
    assert total_cross_section(pt_hard) < 1e-14


def test_solve_onshell_unitarity(mesh100):
    pt = solve_onshell(1.0, _h(), mesh100, PARAMS)
    inv = 1.0 / pt.big_t
    assert abs(inv.imag + 1.0) < 1e-3
    assert pt.sigma_tot == pytest.approx(total_cross_section(pt), rel=1e-12)
    assert pt.sigma_over_unitarity <= 1.0 + 1e-3


def test_solve_onshell_validity_band(mesh100):
    with pytest.raises(DomainError):
        solve_onshell(1e-4, _h(), mesh100, PARAMS)  # below 10*k_min
    with pytest.raises(DomainError):
        solve_onshell(60.0, _h(), mesh100, PARAMS)  # above cutoff/2


def test_cot_delta_log_periodic(mesh100):
    factor = math.exp(math.pi)
    for k in (0.02, 0.05):
        c1 = solve_onshell(k, _h(), mesh100, PARAMS).cot_delta
        c2 = solve_onshell(k * factor, _h(), mesh100, PARAMS).cot_delta
        assert c2 == pytest.approx(c1, rel=0.01, abs=0.01)


def test_cutoff_insensitivity_at_fixed_k(mesh100):
    mesh50 = build_mesh(50.0, n_points=256, k_min=1e-4, params=PARAMS)
    d100 = solve_onshell(1.0, _h(100.0), mesh100, PARAMS).delta_mod_pi
    d50 = solve_onshell(1.0, _h(50.0), mesh50, PARAMS).delta_mod_pi
    # residual cutoff dependence is O(k/cutoff)
    assert abs(d100 - d50) < 3.0 * (1.0 / 50.0)


def test_unwrap_deltas_continuity():
    pts = []
    for i, d in enumerate([3.0, 2.5, 0.2, 2.9]):  # wraps past 0 between 2.5 and 0.2
        pts.append(PhasePoint(k=1.0 + i, t_onshell=0j, big_t=0j, delta_mod_pi=d,
                              cot_delta=0.0, sigma_tot=0.0))
    out = unwrap_deltas(pts)
    # every step stays on the nearest mod-pi branch
    assert np.all(np.abs(np.diff(out)) <= math.pi / 2.0 + 1e-12)
    assert out[2] == pytest.approx(0.2 + math.pi, abs=1e-12)


def test_fit_phase_law_exact_synthetic():
    ks = np.geomspace(0.01, 10.0, 25)
    pts = [PhasePoint(k=float(k), t_onshell=0j, big_t=0j,
                      delta_mod_pi=(0.3 - 2.0 * math.log(k)) % math.pi,
                      cot_delta=0.0, sigma_tot=0.0) for k in ks]
    fit = fit_phase_law(pts, 1.0, PotentialParams(nu=2.0))
    assert fit.slope == pytest.approx(-2.0, abs=1e-10)
    assert fit.beta_angle == pytest.approx(0.3, abs=1e-10)
    assert fit.residual < 1e-10


def test_fit_phase_law_input_requirements():
    ks = np.geomspace(0.5, 1.0, 12)  # span too small
    pts = [PhasePoint(k=float(k), t_onshell=0j, big_t=0j, delta_mod_pi=0.1,
                      cot_delta=0.0, sigma_tot=0.0) for k in ks]
    with pytest.raises(InsufficientDataError):
        fit_phase_law(pts, 1.0, PARAMS)
    with pytest.raises(InsufficientDataError):
        fit_phase_law(pts[:5], 1.0, PARAMS)
