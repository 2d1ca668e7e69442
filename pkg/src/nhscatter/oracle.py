"""Brute-force cross-checks that share no code path with the closed forms.

The transfer-matrix oracle integrates ``psi'' = (v - k^2) psi`` for the
fundamental matrix of ``(psi, psi')`` with classical fourth-order Runge-Kutta,
applies the jump ``psi'(x0+) - psi'(x0-) = z psi(x0)`` at every delta and
then fits plane-wave coefficients on both sides.  It is slow and only meant
for tests and for generating reference values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ConfigurationError, InvalidInputError
from .transfer_matrix import Potential, TransferMatrix

MAX_HALVINGS = 24


@dataclass(frozen=True)
class OracleConfig:
    step: float = 1e-2
    tolerance: float = 1e-11
    padding: float = 1.0

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ConfigurationError(f"step must be positive, got {self.step!r}")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise ConfigurationError(f"tolerance must be positive, got {self.tolerance!r}")
        if not (self.padding >= 0 and math.isfinite(self.padding)):
            raise ConfigurationError(f"padding must be non-negative, got {self.padding!r}")


def _rk4_step_matrix(a: np.ndarray, h: float) -> np.ndarray:
    # one RK4 step of y' = A y with constant A is exactly this polynomial in hA
    ha = h * a
    ha2 = ha @ ha
    return np.eye(2) + ha + ha2 / 2 + ha2 @ ha / 6 + ha2 @ ha2 / 24


def _propagate(v: complex, k: float, x0: float, x1: float, step: float) -> np.ndarray:
    length = x1 - x0
    if length <= 0:
        return np.eye(2, dtype=complex)
    n = max(1, math.ceil(length / step))
    a = np.array([[0, 1], [v - k * k, 0]], dtype=complex)
    return np.linalg.matrix_power(_rk4_step_matrix(a, length / n), n)


def _plane_wave_basis(k: float, x: float) -> np.ndarray:
    e = np.exp(1j * k * x)
    return np.array([[e, 1 / e], [1j * k * e, -1j * k / e]])


def rk4_transfer(potential: Potential, k: float, step: float, padding: float = 1.0) -> np.ndarray:
    """Fixed-step RK4 transfer matrix (array), no error control."""
    if not k > 0:
        raise InvalidInputError(f"wavenumber must be positive, got {k!r}")
    lo, hi = potential.support
    x_left, x_right = lo - padding, hi + padding

    # breakpoints where the coefficient or the derivative jumps
    events = sorted(
        {x_left, x_right}
        | {d.x for d in potential.deltas}
        | {s.a for s in potential.segments}
        | {s.b for s in potential.segments}
    )
    jumps: dict[float, complex] = {}
    for d in potential.deltas:
        jumps[d.x] = jumps.get(d.x, 0j) + d.z

    fundamental = np.eye(2, dtype=complex)
    for x0, x1 in zip(events, events[1:]):
        if x0 in jumps:
            fundamental = np.array([[1, 0], [jumps[x0], 1]]) @ fundamental
        mid = 0.5 * (x0 + x1)
        fundamental = _propagate(potential(mid), k, x0, x1, step) @ fundamental
    if x_right in jumps:
        fundamental = np.array([[1, 0], [jumps[x_right], 1]]) @ fundamental

    # columns: solutions starting as exp(ikx) and exp(-ikx) on the left
    start = _plane_wave_basis(k, x_left)
    end_values = fundamental @ start
    return np.linalg.solve(_plane_wave_basis(k, x_right), end_values)


def ode_transfer(
    potential: Potential, k: float, config: OracleConfig | None = None
) -> TransferMatrix:
    """Numerically integrated transfer matrix.

    The step is halved until two consecutive results agree to
    ``config.tolerance`` relative to the matrix norm.
    """
    config = config or OracleConfig()
    step = config.step
    prev = rk4_transfer(potential, k, step, config.padding)
    for _ in range(MAX_HALVINGS):
        step /= 2
        cur = rk4_transfer(potential, k, step, config.padding)
        scale = max(1.0, np.abs(cur).max())
        if np.abs(cur - prev).max() <= config.tolerance * scale:
            break
        prev = cur
    else:
        raise ConfigurationError(
            f"no convergence to {config.tolerance:g} after {MAX_HALVINGS} halvings"
        )
    det = np.linalg.det(cur)
    if abs(det - 1) > 10 * config.tolerance * max(1.0, np.abs(cur).max() ** 2):
        raise ConfigurationError(f"integrated matrix has det = {det}, tolerance too tight")
    return TransferMatrix.from_array(cur, k)


def scan_m22_minima(m22, k_min: float, k_max: float, points: int = 20001, width: float = 1e-13):
    """Local minima of ``|m22|`` on a dense grid, refined by bisection.

    Bisection acts on the sign of a central finite difference of ``|m22|^2``
    and therefore does not reuse any minimizer.  Returns ``(k, |m22(k)|)`` pairs.
    """
    ks = np.linspace(k_min, k_max, points)
    f = np.abs(np.array([m22(k) for k in ks])) ** 2
    found = []
    for i in range(1, points - 1):
        if not (f[i] <= f[i - 1] and f[i] < f[i + 1]):
            continue
        lo, hi = ks[i - 1], ks[i + 1]
        while hi - lo > width * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            h = max(1e-9 * mid, (hi - lo) * 1e-3)
            slope = abs(m22(mid + h)) ** 2 - abs(m22(mid - h)) ** 2
            if slope > 0:
                hi = mid
            elif slope < 0:
                lo = mid
            else:
                break
        kstar = 0.5 * (lo + hi)
        found.append((kstar, abs(m22(kstar))))
    return found


def reference_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Eigenvalues from the Schur form, sorted by real then imaginary part."""
    t, _ = sla.schur(np.asarray(h, dtype=complex), output="complex")
    w = np.diag(t)
    return w[np.lexsort((w.imag, w.real))]


@dataclass(frozen=True)
class HermitianPairReport:
    feasible: bool
    cone_dimension: int
    angle: float
    min_eigenvalue: float


def _hermitian_basis(n: int) -> list[np.ndarray]:
    basis = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1
        basis.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = e[j, i] = 1 / math.sqrt(2)
            basis.append(e)
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1j / math.sqrt(2)
            e[j, i] = -1j / math.sqrt(2)
            basis.append(e)
    return basis


def metric_cone(h: np.ndarray) -> list[np.ndarray]:
    """Orthonormal basis (Frobenius) of Hermitian ``X`` with ``H^dag X = X H``."""
    h = np.asarray(h, dtype=complex)
    basis = _hermitian_basis(h.shape[0])
    columns = []
    for e in basis:
        r = h.conj().T @ e - e @ h
        columns.append(np.concatenate([r.real.ravel(), r.imag.ravel()]))
    a = np.array(columns).T
    null = sla.null_space(a, rcond=1e-10)
    return [sum(c * e for c, e in zip(vec, basis)) for vec in null.T]


def _max_min_eigenvalue(cone: list[np.ndarray]) -> float:
    import cvxpy as cp

    n = cone[0].shape[0]
    c = cp.Variable(len(cone))
    t = cp.Variable()

    def realify(x):
        return np.block([[x.real, -x.imag], [x.imag, x.real]])

    blocks = [realify(x) for x in cone]
    expr = sum(c[i] * blocks[i] for i in range(len(cone)))
    constraints = [expr - t * np.eye(2 * n) >> 0, cp.norm(c, 2) <= 1]
    problem = cp.Problem(cp.Maximize(t), constraints)
    problem.solve(solver=cp.CLARABEL)
    if t.value is None:
        return -math.inf
    return float(t.value)


def hermitian_pair_check(h: np.ndarray, metric: np.ndarray | None) -> HermitianPairReport:
    """Test ``metric`` against the solution cone of ``H^dag X = X H``.

    The cone is found by a direct null-space solve over Hermitian matrices;
    feasibility of a positive-definite member is decided by a small SDP.
    """
    cone = metric_cone(h)
    if not cone:
        return HermitianPairReport(False, 0, math.nan, -math.inf)
    best = _max_min_eigenvalue(cone)
    feasible = best > 1e-7
    angle = math.nan
    if metric is not None:
        m = np.asarray(metric, dtype=complex)
        coeffs = [np.vdot(x, m).real for x in cone]
        proj = sum(c * x for c, x in zip(coeffs, cone))
        angle = math.atan2(np.linalg.norm(m - proj), np.linalg.norm(proj))
    return HermitianPairReport(feasible, len(cone), angle, best)
