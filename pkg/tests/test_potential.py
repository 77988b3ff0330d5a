"""Tests of the potential, S-wave kernel, and counterterm values."""

import math

import numpy as np
import pytest

from invsq import PotentialParams, counterterm_value, potential_momentum, swave_kernel_f
from invsq.errors import DomainError

RNG = np.random.default_rng(20260823)


def test_params_derive_c():
    params = PotentialParams(nu=1.0)
    assert params.c == -1.25
    for nu in RNG.uniform(0.1, 5.0, 50):
        p = PotentialParams(nu=float(nu))
        assert p.c == -0.25 - nu**2
        assert p.c + 0.25 < 0.0


def test_params_reject_nonpositive_nu():
    with pytest.raises(DomainError):
        PotentialParams(nu=0.0)
    with pytest.raises(DomainError):
        PotentialParams(nu=-1.0)


def test_potential_momentum_values():
    params = PotentialParams(nu=1.0)
    assert potential_momentum(1.0, params) == pytest.approx(-5.0 * math.pi**2 / 2.0)
    # q chosen to cancel the prefactor exactly
    q = 2.0 * math.pi**2 * abs(params.c)
    assert potential_momentum(q, params) == pytest.approx(-1.0)


def test_potential_momentum_homogeneity_and_sign():
    for nu in (0.5, 1.0, 2.0):
        params = PotentialParams(nu=nu)
        for q in RNG.uniform(0.01, 50.0, 20):
            v = potential_momentum(float(q), params)
            assert v < 0.0
            assert potential_momentum(float(2 * q), params) == pytest.approx(v / 2.0)


def test_potential_momentum_monotone_in_q():
    params = PotentialParams(nu=0.7)
    qs = np.sort(RNG.uniform(0.1, 10.0, 30))
    vals = [potential_momentum(float(q), params) for q in qs]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_potential_momentum_domain():
    params = PotentialParams(nu=1.0)
    with pytest.raises(DomainError):
        potential_momentum(0.0, params)
    with pytest.raises(DomainError):
        potential_momentum(-1.0, params)


def test_swave_kernel_values():
    assert swave_kernel_f(2.0, 1.0) == 0.5
    assert swave_kernel_f(1.0, 2.0) == 0.5
    for p in (0.1, 1.0, 7.3):
        assert swave_kernel_f(p, p) == 1.0 / p


def test_swave_kernel_symmetry_and_scale_covariance():
    for _ in range(100):
        p, q, s = RNG.uniform(0.01, 100.0, 3)
        assert swave_kernel_f(p, q) == swave_kernel_f(q, p)
        assert swave_kernel_f(s * p, s * q) == pytest.approx(swave_kernel_f(p, q) / s)


def test_swave_kernel_domain():
    with pytest.raises(DomainError):
        swave_kernel_f(0.0, 1.0)
    with pytest.raises(DomainError):
        swave_kernel_f(1.0, -2.0)


def test_counterterm_values():
    params = PotentialParams(nu=1.0)
    assert counterterm_value(10.0, 0.0, params) == 0.0
    cutoff = 2.0 * math.pi**2 * abs(params.c)
    assert counterterm_value(cutoff, 1.0, params) == pytest.approx(-1.0)
    # h = 1 is the schedule value at cutoff = lambda_star
    lstar = 3.7
    assert counterterm_value(lstar, 1.0, params) == pytest.approx(
        2.0 * math.pi**2 * params.c / lstar)


def test_counterterm_domain():
    params = PotentialParams(nu=1.0)
    with pytest.raises(DomainError):
        counterterm_value(0.0, 1.0, params)
