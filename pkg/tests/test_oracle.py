import math

import numpy as np
import pytest

from conftest import random_potential, rel_err
from nhscatter.errors import ConfigurationError
from nhscatter.oracle import (
    OracleConfig,
    hermitian_pair_check,
    metric_cone,
    ode_transfer,
    reference_eigenvalues,
    rk4_transfer,
    scan_m22_minima,
)
from nhscatter.pseudo_hermitian import hermitize
from nhscatter.transfer_matrix import Potential, compose, m22_values, pt_barrier, single_delta


def test_empty_potential():
    np.testing.assert_allclose(ode_transfer(Potential(), 1.7).matrix, np.eye(2), atol=1e-11)


def test_unit_delta_matches_closed_form():
    m = ode_transfer(single_delta(1), 1.0).matrix
    expected = np.array([[1 - 0.5j, -0.5j], [0.5j, 1 + 0.5j]])
    assert np.abs(m - expected).max() < 1e-8


def test_pt_barrier_det():
    assert abs(ode_transfer(pt_barrier(1, 1), 1.0).det - 1) < 1e-8


@pytest.mark.parametrize(
    "kwargs", [{"step": 0}, {"step": -1}, {"tolerance": 0}, {"padding": -1}, {"step": math.nan}]
)
def test_bad_config(kwargs):
    with pytest.raises(ConfigurationError):
        OracleConfig(**kwargs)


def test_unreachable_tolerance():
    with pytest.raises(ConfigurationError):
        ode_transfer(pt_barrier(1, 1), 1.0, OracleConfig(tolerance=1e-30))


@pytest.mark.parametrize("pot,k", [(pt_barrier(1.0, 1.0), 3.0), (single_delta(2 - 1j, 0.4), 5.0)])
def test_step_halving_converges_fourth_order(pot, k):
    exact = compose(pot, k).matrix
    errors = [np.abs(rk4_transfer(pot, k, h) - exact).max() for h in (0.1, 0.05, 0.025)]
    assert errors[0] / errors[1] >= 8
    assert errors[1] / errors[2] >= 8


def test_random_potentials_match_closed_form(rng):
    worst = 0.0
    for _ in range(100):
        pot = random_potential(rng)
        k = rng.uniform(0.1, 10)
        worst = max(worst, rel_err(compose(pot, k).matrix, ode_transfer(pot, k).matrix))
    assert worst <= 1e-6


def test_dense_scan_finds_delta_zero():
    found = scan_m22_minima(lambda k: complex(m22_values(single_delta(2j), k)), 0.1, 5, 2001)
    assert len(found) == 1
    assert found[0][0] == pytest.approx(1.0, abs=1e-9)


def test_reference_eigenvalues_sorted():
    w = reference_eigenvalues(np.array([[0, 1], [4, 0]]))
    np.testing.assert_allclose(w, [-2, 2], atol=1e-14)


def test_hermitian_metric_cone_contains_identity():
    h = np.array([[1, 2 - 1j], [2 + 1j, -3]])
    report = hermitian_pair_check(h, np.eye(2))
    assert report.feasible
    assert report.angle < 1e-6


def test_spectral_metric_in_cone():
    h = np.array([[0, 1], [4, 0]], dtype=complex)
    _, dec = hermitize(h)
    report = hermitian_pair_check(h, dec.metric)
    assert report.feasible
    assert report.angle < 1e-6


def test_complex_spectrum_is_infeasible():
    report = hermitian_pair_check(np.array([[0, 1], [-1, 0]]), None)
    assert not report.feasible


def test_cone_members_solve_relation():
    h = np.array([[1, 2, 0], [0.5, -1, 1j], [0, 1j, 2]])
    for x in metric_cone(h):
        np.testing.assert_allclose(h.conj().T @ x, x @ h, atol=1e-10)
        np.testing.assert_allclose(x, x.conj().T, atol=1e-14)
