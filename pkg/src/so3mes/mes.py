"""Dictionary between maximally entangled states, SU(2) and the SO(3) ball.

A maximally entangled state ``(alpha|00> + beta|01> - beta*|10> + alpha*|11>)/sqrt2``
is identified with the SU(2) matrix ``[[alpha, beta], [-beta*, alpha*]]``,
which in turn is a rotation by angle ``a`` about unit axis ``k``. Points
``a*k`` fill a ball of radius pi; the two SU(2) preimages of each rotation
are told apart by an explicit sheet sign.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmath
from .errors import InvalidAxisError, NotMaximallyEntangledError

MES_FORM_TOL = 1e-9
DEGENERATE_SIN = 1e-9
DEFAULT_AXIS = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class MesState:
    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > qmath.TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))

    def matrix(self) -> np.ndarray:
        return qmath.c2(self.alpha, self.beta,
                        -self.beta.conjugate(), self.alpha.conjugate())

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "MesState":
        return cls(complex(m[0, 0]), complex(m[0, 1]))

    def __neg__(self) -> "MesState":
        return MesState(-self.alpha, -self.beta)


@dataclass(frozen=True)
class BallPoint:
    axis: tuple[float, float, float]
    angle: float
    sheet: int

    def __post_init__(self):
        axis = tuple(float(x) for x in self.axis)
        if abs(math.sqrt(sum(x * x for x in axis)) - 1.0) > qmath.TOL:
            raise InvalidAxisError(f"axis {axis} is not a unit vector")
        if not (0.0 <= self.angle <= math.pi):
            raise ValueError(f"angle {self.angle!r} outside [0, pi]")
        if self.sheet not in (1, -1):
            raise ValueError(f"sheet must be +1 or -1, got {self.sheet!r}")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "angle", float(self.angle))

    def vector(self) -> np.ndarray:
        """Cartesian position ``angle * axis`` inside the ball."""
        return self.angle * np.asarray(self.axis)


def _unit_axis(axis) -> tuple[float, float, float]:
    k = np.asarray(axis, dtype=float)
    if k.shape != (3,) or abs(np.linalg.norm(k) - 1.0) > qmath.TOL:
        raise InvalidAxisError(f"axis {axis!r} is not a unit 3-vector")
    return tuple(float(x) for x in k)


def to_two_qubit(m: MesState) -> np.ndarray:
    a, b = m.alpha, m.beta
    s = np.array([a, b, -b.conjugate(), a.conjugate()], dtype=complex) / math.sqrt(2)
    s.setflags(write=False)
    return s


def from_two_qubit(s: np.ndarray, tol: float = MES_FORM_TOL) -> MesState:
    c00, c01, c10, c11 = np.asarray(s, dtype=complex)
    mismatch = max(abs(c11 - c00.conjugate()), abs(c10 + c01.conjugate()))
    if mismatch > tol:
        raise NotMaximallyEntangledError(
            f"state is not of the form (a, b, -b*, a*)/sqrt2 (mismatch {mismatch:.3e})")
    alpha, beta = math.sqrt(2) * c00, math.sqrt(2) * c01
    # numerical drift within the form tolerance is absorbed here
    norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    return MesState(alpha / norm, beta / norm)


def su2_from_axis_angle(axis, angle: float) -> MesState:
    kx, ky, kz = _unit_axis(axis)
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return MesState(complex(c, -kz * s), -complex(ky, kx) * s)


def axis_angle_from_su2(m: MesState) -> BallPoint:
    """Project an SU(2) element into the radius-pi ball.

    Raw angles beyond pi are folded back through
    ``D(k, pi + a) = -D(-k, pi - a)`` and flagged with ``sheet = -1``.
    """
    a, b = m.alpha, m.beta
    cos_half = a.real
    sin_half = math.sqrt(a.imag ** 2 + abs(b) ** 2)
    raw = 2.0 * math.atan2(sin_half, cos_half)
    if sin_half < DEGENERATE_SIN:
        axis = DEFAULT_AXIS
    else:
        k = -np.array([b.imag, b.real, a.imag]) / sin_half
        k /= np.linalg.norm(k)
        axis = tuple(float(x) for x in k)
    if raw <= math.pi:
        return BallPoint(axis, raw, 1)
    if axis is not DEFAULT_AXIS:
        axis = tuple(-x for x in axis)
    return BallPoint(axis, max(0.0, 2.0 * math.pi - raw), -1)


def su2_from_ball_point(p: BallPoint) -> MesState:
    """Inverse of :func:`axis_angle_from_su2`."""
    m = su2_from_axis_angle(p.axis, p.angle)
    return m if p.sheet == 1 else -m


def double_value_check(axis, angle: float, tol: float = qmath.TOL) -> bool:
    k = np.asarray(_unit_axis(axis))
    upper = su2_from_axis_angle(k, math.pi + angle)
    lower = su2_from_axis_angle(-k, math.pi - angle)
    return (abs(upper.alpha + lower.alpha) <= tol
            and abs(upper.beta + lower.beta) <= tol)
