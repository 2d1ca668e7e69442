import numpy as np
import pytest
from scipy.optimize import fsolve

from nhscatter.transfer_matrix import Delta, Potential, Segment, double_delta, m22_values, pt_barrier


def rel_err(a, b):
    """Entrywise difference relative to the largest entry of the reference."""
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.abs(a - b).max() / max(np.abs(b).max(), 1e-300))


def random_complex(rng, max_abs):
    r = max_abs * np.sqrt(rng.uniform())
    return complex(r * np.exp(2j * np.pi * rng.uniform()))


def random_potential(rng, max_deltas=4, max_segments=3, max_strength=5.0, half_width=3.0):
    n_seg = int(rng.integers(0, max_segments + 1))
    n_del = int(rng.integers(0 if n_seg else 1, max_deltas + 1))
    edges = np.sort(rng.uniform(-half_width, half_width, 2 * n_seg))
    segments = [
        Segment(float(edges[2 * i]), float(edges[2 * i + 1]), random_complex(rng, max_strength))
        for i in range(n_seg)
    ]
    deltas = []
    while len(deltas) < n_del:
        x = float(rng.uniform(-half_width, half_width))
        if rng.uniform() < 0.15 and segments:
            x = segments[int(rng.integers(len(segments)))].b
        if any(s.a < x < s.b for s in segments):
            continue
        deltas.append(Delta(x, random_complex(rng, max_strength)))
    return Potential(tuple(deltas), tuple(segments))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def _tune(build, guess):
    def equations(p):
        m = complex(m22_values(build(p[1]), p[0]))
        return [m.real, m.imag]

    sol = fsolve(equations, guess, xtol=1e-12)
    assert np.hypot(*equations(sol)) < 1e-13
    return float(sol[0]), float(sol[1])


@pytest.fixture(scope="session")
def singular_pt_barrier():
    """``(k_star, zeta)`` at which the a = 1 PT barrier has ``m22(k_star) = 0``."""
    return _tune(lambda zeta: pt_barrier(zeta, 1.0), [4.318, 13.31])


@pytest.fixture(scope="session")
def singular_double_delta():
    """``(k_star, y)`` with ``z+ = 1 + iy``, ``z- = conj(z+)``, ``a = 0.5`` singular."""
    return _tune(lambda y: double_delta(1 - 1j * y, 1 + 1j * y, 0.5), [4.913, 7.02])
