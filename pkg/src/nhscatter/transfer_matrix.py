"""Closed-form transfer matrices for deltas and piecewise-constant potentials.

Units are natural (hbar = 2m = 1), so the Schrodinger equation reads
``-psi'' + v(x) psi = k**2 psi``.  Away from the potential a solution is
``A exp(ikx) + B exp(-ikx)``; the transfer matrix maps the left coefficients
``(A-, B-)`` to the right ones ``(A+, B+)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AtSpectralSingularityError, InvalidInputError

#: Below this |m22| the amplitudes carry no significant digits.
M22_UNDERFLOW = 1e-30


@dataclass(frozen=True)
class Delta:
    x: float
    z: complex


@dataclass(frozen=True)
class Segment:
    a: float
    b: float
    v: complex

    @property
    def width(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class Potential:
    """Compactly supported potential built from Dirac deltas and constant slabs.

    ``deltas`` holds ``z * delta(x - x0)`` terms and ``segments`` holds
    ``v`` on the open interval ``(a, b)``.  Both are stored sorted by
    position.  Deltas may sit on segment edges but not strictly inside.
    """

    deltas: tuple[Delta, ...] = ()
    segments: tuple[Segment, ...] = ()

    def __post_init__(self):
        deltas = tuple(
            d if isinstance(d, Delta) else Delta(float(d[0]), complex(d[1])) for d in self.deltas
        )
        segments = tuple(
            s if isinstance(s, Segment) else Segment(float(s[0]), float(s[1]), complex(s[2]))
            for s in self.segments
        )
        for d in deltas:
            if not (math.isfinite(d.x) and np.isfinite(d.z)):
                raise InvalidInputError(f"delta at {d.x!r} with strength {d.z!r} is not finite")
        for s in segments:
            if not (math.isfinite(s.a) and math.isfinite(s.b) and np.isfinite(s.v)):
                raise InvalidInputError(f"segment {s!r} is not finite")
            if not s.b > s.a:
                raise InvalidInputError(f"segment ({s.a}, {s.b}) has non-positive width")
        deltas = tuple(sorted(deltas, key=lambda d: d.x))
        segments = tuple(sorted(segments, key=lambda s: s.a))
        for left, right in zip(segments, segments[1:]):
            if right.a < left.b:
                raise InvalidInputError(
                    f"segments ({left.a}, {left.b}) and ({right.a}, {right.b}) overlap"
                )
        for d in deltas:
            for s in segments:
                if s.a < d.x < s.b:
                    raise InvalidInputError(
                        f"delta at x={d.x} lies inside segment ({s.a}, {s.b})"
                    )
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "segments", segments)

    @property
    def is_empty(self) -> bool:
        return not self.deltas and not self.segments

    @property
    def support(self) -> tuple[float, float]:
        """Smallest closed interval outside which the potential vanishes."""
        points = [d.x for d in self.deltas]
        for s in self.segments:
            points.extend((s.a, s.b))
        if not points:
            return (0.0, 0.0)
        return (min(points), max(points))

    @property
    def is_real(self) -> bool:
        return all(d.z.imag == 0 for d in self.deltas) and all(
            s.v.imag == 0 for s in self.segments
        )

    def features(self) -> list[Delta | Segment]:
        """Deltas and segments in the order a wave crosses them, left to right.

        A delta on the left edge of a segment is crossed before the segment.
        """
        keyed = [((d.x, 0), d) for d in self.deltas] + [((s.a, 1), s) for s in self.segments]
        keyed.sort(key=lambda item: item[0])
        return [f for _, f in keyed]

    def shifted(self, d: float) -> "Potential":
        """Rigid translation ``v(x) -> v(x - d)``."""
        return Potential(
            tuple(Delta(x.x + d, x.z) for x in self.deltas),
            tuple(Segment(s.a + d, s.b + d, s.v) for s in self.segments),
        )

    def __call__(self, x: float) -> complex:
        """Value of the regular (segment) part at ``x``; deltas are not included."""
        for s in self.segments:
            if s.a < x < s.b:
                return s.v
        return 0j

    def to_dict(self) -> dict:
        return {
            "deltas": [{"x": d.x, "z": [d.z.real, d.z.imag]} for d in self.deltas],
            "segments": [
                {"a": s.a, "b": s.b, "v": [s.v.real, s.v.imag]} for s in self.segments
            ],
        }


def single_delta(z: complex, x: float = 0.0) -> Potential:
    return Potential(deltas=(Delta(x, complex(z)),))


def double_delta(z_minus: complex, z_plus: complex, a: float) -> Potential:
    """``z_minus delta(x + a) + z_plus delta(x - a)``."""
    if not a > 0:
        raise InvalidInputError(f"half-separation a must be positive, got {a!r}")
    return Potential(deltas=(Delta(-a, complex(z_minus)), Delta(a, complex(z_plus))))


def pt_barrier(zeta: float, a: float) -> Potential:
    """Gain/loss slab: ``i zeta`` on ``(-a, 0)`` and ``-i zeta`` on ``(0, a)``."""
    if not a > 0:
        raise InvalidInputError(f"barrier half-width a must be positive, got {a!r}")
    return Potential(
        segments=(Segment(-a, 0.0, 1j * zeta), Segment(0.0, a, -1j * zeta))
    )


@dataclass(frozen=True)
class TransferMatrix:
    m11: complex
    m12: complex
    m21: complex
    m22: complex
    k: float

    def __post_init__(self):
        if not all(np.isfinite(m) for m in (self.m11, self.m12, self.m21, self.m22)):
            raise InvalidInputError(f"transfer matrix at k={self.k} has non-finite entries")

    @classmethod
    def from_array(cls, m: np.ndarray, k: float) -> "TransferMatrix":
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]), k)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    @property
    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        if other.k != self.k:
            raise InvalidInputError(f"cannot compose matrices built at k={self.k} and k={other.k}")
        return TransferMatrix.from_array(self.matrix @ other.matrix, self.k)


@dataclass(frozen=True)
class ScatteringData:
    k: float
    t: complex
    r_left: complex
    r_right: complex
    deficit: float


@dataclass(frozen=True)
class JostCoefficients:
    """Asymptotic coefficients of the two Jost solutions.

    Attribute ``a_minus_plus`` is ``A^+_-``: the ``exp(ikx)`` coefficient of
    the solution ``psi_{k+}`` as ``x -> -inf``.  The superscript (second word)
    names the Jost solution, the subscript (first word) the asymptotic side.
    """

    a_plus_plus: complex
    b_plus_plus: complex
    a_minus_plus: complex
    b_minus_plus: complex
    a_plus_minus: complex
    b_plus_minus: complex
    a_minus_minus: complex
    b_minus_minus: complex

    def left_right(self, solution: str) -> tuple[np.ndarray, np.ndarray]:
        """``((A-, B-), (A+, B+))`` for solution ``'+'`` or ``'-'``."""
        if solution == "+":
            return (
                np.array([self.a_minus_plus, self.b_minus_plus]),
                np.array([self.a_plus_plus, self.b_plus_plus]),
            )
        if solution == "-":
            return (
                np.array([self.a_minus_minus, self.b_minus_minus]),
                np.array([self.a_plus_minus, self.b_plus_minus]),
            )
        raise InvalidInputError(f"solution must be '+' or '-', got {solution!r}")


def _check_k(k) -> np.ndarray:
    karr = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(karr)) or np.any(karr <= 0):
        raise InvalidInputError(f"wavenumber must be finite and positive, got {k!r}")
    return karr


def _delta_array(z: complex, x0: float, k: np.ndarray) -> np.ndarray:
    a = 1j * z / (2 * k)
    m = np.empty(k.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = 1 - a
    m[..., 0, 1] = -a
    m[..., 1, 0] = a
    m[..., 1, 1] = 1 + a
    if x0 != 0:
        # D M D^-1 with D = diag(exp(-ikx0), exp(ikx0)) only rephases off-diagonals
        phase = np.exp(-2j * k * x0)
        m[..., 0, 1] *= phase
        m[..., 1, 0] /= phase
    return m


def _segment_array(v: complex, a: float, b: float, k: np.ndarray) -> np.ndarray:
    width = b - a
    kappa = np.sqrt(k.astype(complex) ** 2 - v)
    c = np.cos(kappa * width)
    # sin(kappa L)/kappa, even in kappa and finite at kappa = 0
    s = width * np.sinc(kappa * width / np.pi)
    ea = np.exp(1j * k * a)
    eb = np.exp(1j * k * b)
    # (psi, psi') propagator P sandwiched between plane-wave bases:
    # M = W(b)^-1 P W(a), W(x) = [[e, 1/e], [ik e, -ik/e]]
    p11, p12, p21, p22 = c, s, -(kappa**2) * s, c
    w = np.empty(k.shape + (2, 2), dtype=complex)
    w[..., 0, 0] = p11 * ea + p12 * 1j * k * ea
    w[..., 0, 1] = p11 / ea - p12 * 1j * k / ea
    w[..., 1, 0] = p21 * ea + p22 * 1j * k * ea
    w[..., 1, 1] = p21 / ea - p22 * 1j * k / ea
    m = np.empty_like(w)
    m[..., 0, 0] = 0.5 / eb * (w[..., 0, 0] - 1j / k * w[..., 1, 0])
    m[..., 0, 1] = 0.5 / eb * (w[..., 0, 1] - 1j / k * w[..., 1, 1])
    m[..., 1, 0] = 0.5 * eb * (w[..., 0, 0] + 1j / k * w[..., 1, 0])
    m[..., 1, 1] = 0.5 * eb * (w[..., 0, 1] + 1j / k * w[..., 1, 1])
    return m


def delta_transfer(z: complex, k: float) -> TransferMatrix:
    """Transfer matrix of ``z delta(x)``.

    >>> delta_transfer(2j, 1.0).m22
    0j
    """
    k = float(_check_k(k))
    return TransferMatrix.from_array(_delta_array(complex(z), 0.0, np.asarray(k)), k)


def shifted_delta_transfer(z: complex, x0: float, k: float) -> TransferMatrix:
    """Transfer matrix of ``z delta(x - x0)``; ``m22`` does not depend on ``x0``."""
    k = float(_check_k(k))
    return TransferMatrix.from_array(_delta_array(complex(z), float(x0), np.asarray(k)), k)


def segment_transfer(v: complex, left: float, right: float, k: float) -> TransferMatrix:
    """Exact transfer matrix of the constant potential ``v`` on ``(left, right)``."""
    k = float(_check_k(k))
    if not (math.isfinite(left) and math.isfinite(right)) or not right > left:
        raise InvalidInputError(f"degenerate interval ({left!r}, {right!r})")
    return TransferMatrix.from_array(
        _segment_array(complex(v), float(left), float(right), np.asarray(k)), k
    )


def transfer_array(potential: Potential, k) -> np.ndarray:
    """Transfer matrices on an array of wavenumbers, shape ``k.shape + (2, 2)``.

    The left-most feature is the right-most factor of the product.
    """
    karr = _check_k(k)
    m = np.broadcast_to(np.eye(2, dtype=complex), karr.shape + (2, 2)).copy()
    for feat in potential.features():
        if isinstance(feat, Delta):
            f = _delta_array(feat.z, feat.x, karr)
        else:
            f = _segment_array(feat.v, feat.a, feat.b, karr)
        m = f @ m
    return m


def compose(potential: Potential, k: float) -> TransferMatrix:
    k = float(_check_k(k))
    return TransferMatrix.from_array(transfer_array(potential, k), k)


def m22_values(potential: Potential, k) -> np.ndarray:
    return transfer_array(potential, k)[..., 1, 1]


def scattering_data(m: TransferMatrix) -> ScatteringData:
    """Transmission and reflection amplitudes read off the transfer matrix."""
    if abs(m.m22) < M22_UNDERFLOW:
        raise AtSpectralSingularityError(m.k, m.m22)
    t = 1 / m.m22
    r_left = -m.m21 / m.m22
    r_right = m.m12 / m.m22
    return ScatteringData(m.k, t, r_left, r_right, abs(t) ** 2 + abs(r_left) ** 2)


def jost_coefficients(m: TransferMatrix) -> JostCoefficients:
    return JostCoefficients(
        a_plus_plus=1 + 0j,
        b_plus_plus=0j,
        a_minus_plus=m.m22,
        b_minus_plus=-m.m21,
        a_plus_minus=m.m12,
        b_plus_minus=m.m22,
        a_minus_minus=0j,
        b_minus_minus=1 + 0j,
    )


def delta_deficit(z: complex, k: float) -> float:
    """Closed form of ``|T|^2 + |R|^2`` for a single delta of strength ``z``."""
    z = complex(z)
    return 1.0 / (1.0 - 4 * k * z.imag / (4 * k**2 + abs(z) ** 2))

