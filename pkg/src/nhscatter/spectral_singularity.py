"""Spectral singularities: real wavenumbers where ``m22`` vanishes.

At such a point both Jost solutions coincide, and transmission and
reflection amplitudes diverge.  This makes it a resonance of zero width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidInputError
from .transfer_matrix import (
    M22_UNDERFLOW,
    Potential,
    m22_values,
    pt_barrier,
    single_delta,
    transfer_array,
)

DEFAULT_TOLERANCE = 1e-8
DEFAULT_GRID_POINTS = 512
MIN_GRID_POINTS = 16
PURE_IMAGINARY_RTOL = 1e-12

_INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class SpectralSingularity:
    k_star: float
    e_star: float
    residual: float
    parameters: Potential
    at_edge: bool = False

    @classmethod
    def at(cls, potential: Potential, k_star: float, at_edge: bool = False):
        residual = float(abs(m22_values(potential, k_star)))
        return cls(k_star, k_star * k_star, residual, potential, at_edge)


@dataclass(frozen=True)
class ResonancePoint:
    k: float
    t_abs2: float
    r_abs2: float
    deficit: float
    epsilon: float | None = None
    t: complex | None = None
    r_left: complex | None = None

    @property
    def singular(self) -> bool:
        return math.isinf(self.deficit)


def _imaginary_strength(z: complex) -> float | None:
    """``lambda`` if ``z = i lambda`` to relative precision, else ``None``."""
    z = complex(z)
    if z != 0 and abs(z.real) <= PURE_IMAGINARY_RTOL * abs(z):
        return z.imag
    return None


def delta_singularity(z: complex) -> SpectralSingularity | None:
    """Closed-form singularity of ``z delta(x)``: ``m22 = 0`` iff ``z = 2ik``.

    Exists only for ``z = i lambda`` with ``lambda > 0`` and then sits at
    ``k = lambda / 2``.
    """
    z = complex(z)
    if z == 0:
        raise InvalidInputError("coupling constant z must be non-zero")
    lam = _imaginary_strength(z)
    if lam is None or lam <= 0:
        return None
    return SpectralSingularity.at(single_delta(z), lam / 2)


def _golden_section(f, a: np.ndarray, b: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Minimize ``f`` on every bracket ``[a_i, b_i]`` at once (``f`` is vectorized)."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while True:
        active = b - a > rtol * np.maximum(np.abs(a), np.abs(b))
        if not active.any():
            break
        left = active & (fc < fd)
        right = active & ~(fc < fd)
        # keep [a, d]: old c becomes the new d
        b = np.where(left, d, b)
        d, fd = np.where(left, c, d), np.where(left, fc, fd)
        # keep [c, b]: old d becomes the new c
        a = np.where(right, c, a)
        c, fc = np.where(right, d, c), np.where(right, fd, fc)
        new_c = b - _INV_PHI * (b - a)
        new_d = a + _INV_PHI * (b - a)
        probe = np.where(left, new_c, new_d)
        fp = f(probe)
        c, fc = np.where(left, probe, c), np.where(left, fp, fc)
        d, fd = np.where(right, probe, d), np.where(right, fp, fd)
    return np.where(fc < fd, c, d)


def _check_range(k_min: float, k_max: float) -> None:
    if not (math.isfinite(k_min) and math.isfinite(k_max) and 0 < k_min < k_max):
        raise InvalidInputError(f"need 0 < k_min < k_max, got ({k_min!r}, {k_max!r})")


def find_singularities(
    potential: Potential,
    k_min: float,
    k_max: float,
    grid_points: int = DEFAULT_GRID_POINTS,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[SpectralSingularity]:
    """Scan ``|m22|`` on a uniform grid and refine each local minimum.

    Interior minima are bracketed by their grid neighbours; a minimum on the
    first or last grid point gets a one-sided bracket and is flagged
    ``at_edge``.  Only refined points with ``|m22| <= tolerance`` are kept.
    """
    _check_range(k_min, k_max)
    if grid_points < MIN_GRID_POINTS:
        raise InvalidInputError(f"grid_points must be >= {MIN_GRID_POINTS}, got {grid_points}")
    if not tolerance > 0:
        raise InvalidInputError(f"tolerance must be positive, got {tolerance!r}")

    ks = np.linspace(k_min, k_max, grid_points)
    f = np.abs(m22_values(potential, ks))

    def objective(k):
        return np.abs(m22_values(potential, k))

    brackets = []
    if f[0] < f[1]:
        brackets.append((ks[0], ks[1], True))
    interior = np.flatnonzero((f[1:-1] < f[:-2]) & (f[1:-1] < f[2:])) + 1
    brackets.extend((ks[i - 1], ks[i + 1], False) for i in interior)
    if f[-1] < f[-2]:
        brackets.append((ks[-2], ks[-1], True))
    if not brackets:
        return []

    lo, hi, edge = (np.array(col) for col in zip(*brackets))
    kstars = _golden_section(objective, lo, hi)
    found: list[SpectralSingularity] = []
    for kstar, at_edge in zip(kstars, edge):
        hit = SpectralSingularity.at(potential, float(kstar), bool(at_edge))
        if hit.residual > tolerance:
            continue
        if found and abs(found[-1].k_star - hit.k_star) <= 1e-9 * hit.k_star:
            if hit.residual < found[-1].residual:
                found[-1] = hit
            continue
        found.append(hit)
    return sorted(found, key=lambda s: s.k_star)


def _single_delta_strength(potential: Potential) -> float | None:
    if potential.segments or len(potential.deltas) != 1:
        return None
    return _imaginary_strength(potential.deltas[0].z)


def resonance_curve(potential: Potential, k_values: Sequence[float]) -> list[ResonancePoint]:
    """Transmission/reflection intensities along ``k_values``.

    Points where ``|m22|`` underflows are kept with infinite intensities.  For
    a lone delta with ``z = i lambda`` each point also carries
    ``epsilon = 1 - lambda / 2k``.
    """
    ks = np.asarray(k_values, dtype=float)
    if ks.ndim != 1:
        raise InvalidInputError("k_values must be one-dimensional")
    m = transfer_array(potential, ks)
    lam = _single_delta_strength(potential)
    points = []
    for k, mk in zip(ks, m):
        k = float(k)
        eps = None if lam is None else 1 - lam / (2 * k)
        m21, m22 = mk[1, 0], mk[1, 1]
        if abs(m22) < M22_UNDERFLOW:
            points.append(ResonancePoint(k, math.inf, math.inf, math.inf, eps))
            continue
        t = complex(1 / m22)
        r = complex(-m21 / m22)
        t2, r2 = abs(t) ** 2, abs(r) ** 2
        points.append(ResonancePoint(k, t2, r2, t2 + r2, eps, t, r))
    return points


def pt_barrier_singularities(
    zeta: float,
    a: float,
    k_min: float,
    k_max: float,
    grid_points: int = DEFAULT_GRID_POINTS,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[SpectralSingularity]:
    return find_singularities(pt_barrier(zeta, a), k_min, k_max, grid_points, tolerance)


def epsilon_deficit(epsilon: float) -> float:
    """``|T|^2 + |R|^2`` of an imaginary delta written through ``epsilon``."""
    return 2 * (1 - epsilon) / epsilon**2 + 1

