"""Finite-dimensional metric operators for quasi-Hermitian matrices.

A diagonalizable ``H`` with real spectrum is Hermitian with respect to the
inner product ``<u, eta v>`` whenever the positive matrix ``eta`` satisfies
``H^dag = eta H eta^-1``.  ``eta^(1/2)`` then maps ``H`` to the Hermitian
matrix ``h = eta^(1/2) H eta^(-1/2)``.

The time-reversal operator is fixed as entrywise complex conjugation, so
``PT`` acts as ``v -> P conj(v)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment
from scipy.sparse.csgraph import connected_components

from .errors import ExceptionalPointError, InvalidInputError, NoPositiveMetricError

#: eigenvector matrices with sigma_min / sigma_max below this count as defective
DEFECTIVE_RATIO = 1e-8
_EPS = np.finfo(float).eps
# safety factors for the coalescence test; see _coalesced_defect
_CLUSTER_FACTOR = 1e3
_RANK_FACTOR = 1e3


@dataclass(frozen=True)
class BiorthonormalSystem:
    """Right eigenvectors ``psi_n`` and dual vectors ``phi_n`` as matrix columns.

    ``left[:, m].conj() @ right[:, n] == delta_mn``; the ``phi_n`` are
    eigenvectors of ``H^dag`` with eigenvalues ``conj(eigenvalues[n])``.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)

    def gram(self) -> np.ndarray:
        return self.left.conj().T @ self.right

    def resolution(self) -> np.ndarray:
        """``sum_n |psi_n><phi_n|``, which equals the identity."""
        return self.right @ self.left.conj().T


@dataclass(frozen=True)
class MetricDecomposition:
    metric: np.ndarray
    sqrt_metric: np.ndarray
    inv_sqrt_metric: np.ndarray
    hermitian_h: np.ndarray

    def residuals(self, h: np.ndarray) -> dict[str, float]:
        """Relative residuals of every invariant the decomposition must satisfy."""
        h = np.asarray(h, dtype=complex)
        eta = self.metric
        nh = max(np.linalg.norm(h), 1e-300)
        ne = np.linalg.norm(eta)
        hh = self.hermitian_h
        w_h = np.sort_complex(sla.eigvals(h))
        w_herm = np.sort(np.linalg.eigvalsh(0.5 * (hh + hh.conj().T)))
        return {
            "metric_hermitian": float(np.linalg.norm(eta - eta.conj().T) / ne),
            "metric_min_eigenvalue": float(np.linalg.eigvalsh(eta).min()),
            "sqrt_squared": float(np.linalg.norm(self.sqrt_metric @ self.sqrt_metric - eta) / ne),
            "pseudo_hermiticity": float(
                np.linalg.norm(h.conj().T @ eta - eta @ h) / (nh * ne)
            ),
            "h_hermitian": float(
                np.linalg.norm(hh - hh.conj().T) / max(np.linalg.norm(hh), 1e-300)
            ),
            "isospectral": float(np.abs(w_h.real - w_herm).max() / max(1.0, np.abs(w_h).max())),
        }


@dataclass(frozen=True)
class AntilinearSymmetryReport:
    commutes: bool
    commutator_residual: float
    spectrum_symmetric: bool
    spectrum_residual: float


@dataclass(frozen=True)
class COperatorReport:
    c: np.ndarray
    q: np.ndarray
    involution_residual: float
    commutes_h_residual: float
    commutes_pt_residual: float
    exp_q_residual: float
    tolerance: float

    @property
    def involution(self) -> bool:
        return self.involution_residual <= self.tolerance

    @property
    def commutes_h(self) -> bool:
        return self.commutes_h_residual <= self.tolerance

    @property
    def commutes_pt(self) -> bool:
        return self.commutes_pt_residual <= self.tolerance

    @property
    def is_c_operator(self) -> bool:
        return self.involution and self.commutes_h and self.commutes_pt


def as_square_matrix(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] == 0:
        raise InvalidInputError(f"expected a non-empty square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise InvalidInputError("matrix has non-finite entries")
    return h


def _coalesced_defect(h: np.ndarray, w: np.ndarray, cond_numbers: np.ndarray) -> str | None:
    # Eigenvalues closer than their own perturbation radius form a cluster.
    # A cluster of size m is semisimple only if H - mu I has m negligible
    # singular values; a Jordan block leaves fewer.
    n = len(w)
    norm = max(np.linalg.norm(h), 1.0)
    radius = _CLUSTER_FACTOR * _EPS * norm * cond_numbers
    link = np.abs(w[:, None] - w[None, :]) <= np.maximum(radius[:, None], radius[None, :])
    n_clusters, labels = connected_components(link, directed=False)
    for c in range(n_clusters):
        idx = np.flatnonzero(labels == c)
        if len(idx) < 2:
            continue
        mu = w[idx].mean()
        sv = np.linalg.svd(h - mu * np.eye(n), compute_uv=False)
        geometric = int(np.sum(sv <= _RANK_FACTOR * n * _EPS * norm))
        if geometric < len(idx):
            return (
                f"eigenvalue {mu:.6g} has algebraic multiplicity {len(idx)} "
                f"but only {geometric} eigenvector(s)"
            )
    return None


def biorthonormal_eig(h, scales=None) -> BiorthonormalSystem:
    """Right/left eigensystem normalized so that ``<phi_m|psi_n> = delta_mn``.

    By default ``||phi_n|| = ||psi_n||``.  ``scales`` multiplies each
    ``phi_n`` by ``s_n`` (and ``psi_n`` by ``1/conj(s_n)``) afterwards; this
    is the freedom that makes metric operators non-unique.

    Raises
    ------
    ExceptionalPointError
        If ``h`` is defective or numerically indistinguishable from a
        defective matrix.
    """
    h = as_square_matrix(h)
    w, v = sla.eig(h)
    v = v / np.linalg.norm(v, axis=0)
    sv = np.linalg.svd(v, compute_uv=False)
    if sv[-1] < DEFECTIVE_RATIO * sv[0]:
        raise ExceptionalPointError(
            f"eigenvectors are linearly dependent (sigma ratio {sv[-1] / sv[0]:.2e})", w
        )
    phi = np.linalg.inv(v).conj().T
    cond_numbers = np.linalg.norm(phi, axis=0)
    reason = _coalesced_defect(h, w, cond_numbers)
    if reason:
        raise ExceptionalPointError(reason, w)

    order = np.lexsort((w.imag, w.real))
    w, v, phi, cond_numbers = w[order], v[:, order], phi[:, order], cond_numbers[order]

    balance = np.sqrt(cond_numbers)
    psi = v * balance
    phi = phi / balance
    if scales is not None:
        s = np.asarray(scales, dtype=complex)
        if s.shape != w.shape or np.any(s == 0):
            raise InvalidInputError("scales must be non-zero, one per eigenvalue")
        phi = phi * s
        psi = psi / s.conj()
    return BiorthonormalSystem(w, psi, phi, h)


def is_spectrum_real(system: BiorthonormalSystem, tol: float = 1e-9) -> bool:
    w = system.eigenvalues
    return bool(np.all(np.abs(w.imag) <= tol * np.maximum(1.0, np.abs(w))))


def _conjugation_mismatch(w: np.ndarray) -> float:
    cost = np.abs(w[:, None] - w.conj()[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def check_antilinear_symmetry(h, p, tol: float = 1e-9, spectrum_tol: float = 1e-8):
    """Test ``[H, PT] = 0`` and the conjugation symmetry of the spectrum."""
    h = as_square_matrix(h)
    p = as_square_matrix(p)
    if p.shape != h.shape:
        raise InvalidInputError("P and H must have the same shape")
    if np.linalg.norm(p @ p - np.eye(len(p))) > 1e-12 * len(p):
        raise InvalidInputError("P is not an involution")
    scale = max(1.0, np.linalg.norm(h))
    comm = float(np.linalg.norm(p @ h.conj() @ p - h) / scale)
    w = sla.eigvals(h)
    mismatch = _conjugation_mismatch(w) / max(1.0, np.abs(w).max())
    return AntilinearSymmetryReport(comm <= tol, comm, mismatch <= spectrum_tol, mismatch)


def _hermitian_function(a: np.ndarray, f) -> np.ndarray:
    w, u = np.linalg.eigh(a)
    return (u * f(w)) @ u.conj().T


def metric_from_spectrum(system: BiorthonormalSystem, tol: float = 1e-9) -> MetricDecomposition:
    """``eta = sum_n |phi_n><phi_n|`` and the Hermitian matrix it induces."""
    if not is_spectrum_real(system, tol):
        offending = system.eigenvalues[
            np.abs(system.eigenvalues.imag) > tol * np.maximum(1.0, np.abs(system.eigenvalues))
        ]
        raise NoPositiveMetricError(
            "a positive metric requires a real spectrum; non-real eigenvalues: "
            + ", ".join(f"{x:.6g}" for x in offending),
            offending,
        )
    phi = system.left
    eta = phi @ phi.conj().T
    eta = 0.5 * (eta + eta.conj().T)
    w = np.linalg.eigvalsh(eta)
    if w.min() <= 0:
        raise ExceptionalPointError(f"metric lost positivity (min eigenvalue {w.min():.3e})")
    root = _hermitian_function(eta, np.sqrt)
    inv_root = _hermitian_function(eta, lambda x: 1 / np.sqrt(x))
    h_herm = root @ system.matrix @ inv_root
    return MetricDecomposition(eta, root, inv_root, h_herm)


def hermitize(h, scales=None, tol: float = 1e-9) -> tuple[BiorthonormalSystem, MetricDecomposition]:
    system = biorthonormal_eig(h, scales)
    return system, metric_from_spectrum(system, tol)


def c_operator_check(decomposition: MetricDecomposition, h, p, tol: float = 1e-8) -> COperatorReport:
    """Diagnose whether ``C = P eta`` satisfies the defining relations of a C operator.

    Also reports how well ``Q = -log(eta)`` reproduces ``eta = exp(-Q)``.
    """
    h = as_square_matrix(h)
    p = as_square_matrix(p)
    eta = decomposition.metric
    n = len(eta)
    eye = np.eye(n)
    c = p @ eta
    nc = max(np.linalg.norm(c), 1e-300)
    involution = float(np.linalg.norm(c @ c - eye) / np.sqrt(n))
    commutes_h = float(np.linalg.norm(c @ h - h @ c) / (nc * max(np.linalg.norm(h), 1e-300)))
    # C (PT) e_j versus (PT) C e_j on the real basis vectors e_j
    pt_residual = 0.0
    for j in range(n):
        e = eye[:, j]
        lhs = c @ (p @ e.conj())
        rhs = p @ (c @ e).conj()
        pt_residual = max(pt_residual, float(np.linalg.norm(lhs - rhs)))
    pt_residual /= nc
    q = -_hermitian_function(eta, np.log)
    exp_q = float(np.linalg.norm(sla.expm(-q) - eta) / np.linalg.norm(eta))
    return COperatorReport(c, q, involution, commutes_h, pt_residual, exp_q, tol)
