import math

import numpy as np
import pytest

from conftest import random_potential
from nhscatter.errors import InvalidInputError
from nhscatter.oracle import ode_transfer, scan_m22_minima
from nhscatter.spectral_singularity import (
    delta_singularity,
    epsilon_deficit,
    find_singularities,
    pt_barrier_singularities,
    resonance_curve,
)
from nhscatter.transfer_matrix import (
    Delta,
    Potential,
    Segment,
    compose,
    double_delta,
    m22_values,
    pt_barrier,
    scattering_data,
    single_delta,
)


def test_delta_singularity_closed_form():
    s = delta_singularity(2j)
    assert s.k_star == 1.0
    assert s.e_star == 1.0
    assert s.residual <= 1e-15


@pytest.mark.parametrize("z", [1, -2j, 1 + 2j, 1e-3 + 1j])
def test_delta_singularity_absent(z):
    assert delta_singularity(z) is None


def test_negative_imaginary_coupling_has_no_real_zero():
    ks = np.linspace(0.01, 50, 5001)
    assert np.abs(m22_values(single_delta(-2j), ks)).min() > 1


def test_delta_singularity_rejects_zero():
    with pytest.raises(InvalidInputError):
        delta_singularity(0)


def test_scan_single_imaginary_delta():
    found = find_singularities(single_delta(2j), 0.1, 5, 512)
    assert len(found) == 1
    assert found[0].k_star == pytest.approx(1.0, abs=1e-6)
    assert found[0].residual <= 1e-8
    assert found[0].e_star == found[0].k_star ** 2


def test_scan_generic_delta_empty():
    # |m22|^2 = (1 - 1/k)^2 + 1/(4k^2) stays positive
    assert find_singularities(single_delta(1 + 2j), 0.1, 5, 512) == []


@pytest.mark.parametrize(
    "k_min,k_max,points", [(0, 1, 64), (2, 1, 64), (-1, 1, 64), (0.1, math.inf, 64), (0.1, 1, 8)]
)
def test_scan_rejects_bad_range(k_min, k_max, points):
    with pytest.raises(InvalidInputError):
        find_singularities(single_delta(2j), k_min, k_max, points)


def test_singularity_at_range_edge_is_flagged():
    found = find_singularities(single_delta(2j), 1.0, 3.0, 64)
    assert len(found) == 1
    assert found[0].at_edge
    assert found[0].k_star == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_real_potentials_have_no_singularities(seed):
    pot = random_potential(np.random.default_rng(seed))
    real = Potential(
        tuple(Delta(d.x, d.z.real) for d in pot.deltas),
        tuple(Segment(s.a, s.b, s.v.real) for s in pot.segments),
    )
    assert find_singularities(real, 0.1, 10, 512) == []


def test_closed_form_agrees_with_scan(rng):
    for lam in rng.uniform(0.1, 10, 50):
        closed = delta_singularity(1j * lam)
        scanned = find_singularities(single_delta(1j * lam), 0.04, 5.2, 512)
        assert len(scanned) == 1
        assert abs(closed.k_star - scanned[0].k_star) <= 1e-6


def _oracle_minima(pot, k_min, k_max):
    return scan_m22_minima(lambda k: complex(m22_values(pot, k)), k_min, k_max, 20001)


def test_pt_double_delta_scan_matches_oracle(singular_double_delta):
    kstar, y = singular_double_delta
    pot = double_delta(1 - 1j * y, 1 + 1j * y, 0.5)
    found = find_singularities(pot, 0.5, 8, 512)
    oracle = [k for k, f in _oracle_minima(pot, 0.5, 8) if f <= 1e-8]
    assert len(found) == len(oracle) == 1
    assert found[0].k_star == pytest.approx(oracle[0], abs=1e-6)
    assert found[0].k_star == pytest.approx(kstar, abs=1e-6)


def test_pt_double_delta_generic_has_none():
    pot = double_delta(1 - 1j, 1 + 1j, 0.5)
    found = find_singularities(pot, 0.1, 10, 512)
    oracle = [k for k, f in _oracle_minima(pot, 0.1, 10) if f <= 1e-8]
    assert found == [] and oracle == []


def test_resonance_curve_epsilon_half():
    (p,) = resonance_curve(single_delta(2j), [2.0])
    assert p.epsilon == pytest.approx(0.5)
    assert p.deficit == pytest.approx(5, rel=1e-12)
    assert epsilon_deficit(0.5) == 5


def test_resonance_curve_real_delta():
    for p in resonance_curve(single_delta(1.5), np.linspace(0.1, 10, 50)):
        assert p.deficit == pytest.approx(1, abs=1e-12)
        assert p.epsilon is None


def test_quadratic_divergence_constant():
    lam = 2.0
    ks = 1 / (1 - np.array([1e-1, 1e-2, 1e-3, 1e-4]))
    for p in resonance_curve(single_delta(1j * lam), ks):
        assert p.deficit * p.epsilon**2 == pytest.approx(2, rel=5 * p.epsilon)


def test_resonance_curve_flags_singular_point():
    points = resonance_curve(single_delta(2j), [0.5, 1.0, 1.5])
    assert math.isinf(points[1].deficit)
    assert points[1].t is None
    assert points[1].epsilon == 0
    assert not points[0].singular and points[1].singular


def test_epsilon_deficit_identity(rng):
    for lam in rng.uniform(-10, 10, 20):
        ks = rng.uniform(0.05, 20, 50)
        for p in resonance_curve(single_delta(1j * lam), ks):
            assert p.deficit == pytest.approx(epsilon_deficit(p.epsilon), rel=1e-10)
            assert p.deficit == pytest.approx(p.t_abs2 + p.r_abs2, rel=1e-12)


def test_pt_barrier_free_limit():
    assert pt_barrier_singularities(0.0, 1.0, 0.1, 10) == []


def test_pt_barrier_wrapper_delegates():
    assert pt_barrier_singularities(1.0, 1.0, 0.1, 10) == find_singularities(
        pt_barrier(1.0, 1.0), 0.1, 10
    )
    with pytest.raises(InvalidInputError):
        pt_barrier_singularities(1.0, 0.0, 0.1, 10)


def test_pt_barrier_resonator(singular_pt_barrier):
    kstar, zeta = singular_pt_barrier
    found = pt_barrier_singularities(zeta, 1.0, 0.5, 8)
    assert [s.k_star for s in found] == pytest.approx([kstar], abs=1e-6)
    s = found[0]
    # confirmed by integrating the Schrodinger equation
    assert abs(ode_transfer(pt_barrier(zeta, 1.0), s.k_star).m22) <= 1e-8
    for sign in (1, -1):
        t = [
            abs(scattering_data(compose(pt_barrier(zeta, 1.0), s.k_star + sign * d)).t)
            for d in (1e-2, 1e-3, 1e-4, 1e-5)
        ]
        assert all(a < b for a, b in zip(t, t[1:]))


def test_divergence_approach(singular_pt_barrier):
    kstar, zeta = singular_pt_barrier
    pot = pt_barrier(zeta, 1.0)
    for s in find_singularities(pot, 0.5, 8) + find_singularities(single_delta(3j), 0.5, 8):
        pot = s.parameters
        assert s.residual <= 1e-8
        near = scattering_data(compose(pot, s.k_star + 1e-4))
        far = scattering_data(compose(pot, s.k_star + 1e-2))
        assert abs(near.t) > abs(far.t)
        assert abs(near.r_left) > abs(far.r_left)
