"""Kerr-medium Jones matrices and the optical replay of the field dynamics.

An axis-aligned Kerr cell (retardance ``phi1``) followed by a cell whose
optical axis sits at angle ``delta`` from z (retardance ``phi2``) composes to
the same SU(2) element as the rotating-field propagator when

    phi1 = 2 * omega0 * t,   phi2 = omega * t,
    cos(2 delta) = (hbar omega - 2 B cos(theta)) / (2 hbar omega0),

with ``delta <= 0`` so that ``sin(2 delta)`` carries the sign of the
propagator's off-diagonal entry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import qmath
from .dynamics import FieldConfig, omega_zero
from .errors import InconsistentParametersError, InvalidGeometryError

CLAMP_TOL = 1e-9


def u1_matrix(phi1: float) -> np.ndarray:
    """Axis-aligned retarder: ``diag(exp(-i phi1/2), exp(i phi1/2))``."""
    e = complex(math.cos(phi1 / 2), -math.sin(phi1 / 2))
    return qmath.c2(e, 0, 0, e.conjugate())


def u2_matrix(phi2: float, delta: float) -> np.ndarray:
    """Retarder with its optical axis rotated by ``delta`` from z."""
    s = math.sin(phi2 / 2)
    a = complex(math.cos(phi2 / 2), s * math.cos(2 * delta))
    b = complex(0.0, s * math.sin(2 * delta))
    return qmath.c2(a, b, -b.conjugate(), a.conjugate())


def phase_from_field(lam: float, kerr_k: float, d: float, e: float) -> float:
    """Kerr retardance ``2 pi k d E^2 / lambda``."""
    if not lam > 0 or not d > 0:
        raise InvalidGeometryError(f"wavelength and thickness must be positive (got {lam}, {d})")
    return 2 * math.pi * kerr_k * d * e * e / lam


def field_for_phase(phi: float, lam: float = 1.0, kerr_k: float = 1.0, d: float = 1.0) -> float:
    """Electric field magnitude that produces retardance ``phi``."""
    if not lam > 0 or not d > 0:
        raise InvalidGeometryError(f"wavelength and thickness must be positive (got {lam}, {d})")
    ratio = phi * lam / (2 * math.pi * kerr_k * d)
    if ratio < 0:
        raise InconsistentParametersError(
            f"retardance {phi} has the wrong sign for Kerr constant {kerr_k}")
    return math.sqrt(ratio)


@dataclass(frozen=True)
class Physical:
    lam: float
    kerr_k: float
    d: float
    e_field: float


@dataclass(frozen=True)
class KerrStage:
    kind: Literal["axis-aligned", "rotated"]
    phi: float
    delta: float = 0.0
    physical: Physical | None = None

    def __post_init__(self):
        if self.kind not in ("axis-aligned", "rotated"):
            raise ValueError(f"unknown stage kind {self.kind!r}")
        if self.kind == "axis-aligned" and self.delta != 0:
            raise ValueError("axis-aligned stages have delta = 0")
        if self.physical is not None:
            p = self.physical
            phi = phase_from_field(p.lam, p.kerr_k, p.d, p.e_field)
            if abs(phi - self.phi) > 1e-12 * max(1.0, abs(phi)):
                raise InconsistentParametersError(
                    f"phi = {self.phi} but the physical parameters give {phi}")

    @classmethod
    def from_field(cls, kind, lam, kerr_k, d, e_field, delta=0.0) -> "KerrStage":
        phi = phase_from_field(lam, kerr_k, d, e_field)
        return cls(kind, phi, delta, Physical(lam, kerr_k, d, e_field))

    def jones(self) -> np.ndarray:
        if self.kind == "axis-aligned":
            return u1_matrix(self.phi)
        return u2_matrix(self.phi, self.delta)


def compose(stages: Sequence) -> np.ndarray:
    """Product of stages in the order light traverses them (first stage rightmost)."""
    m = qmath.I2
    for s in stages:
        j = s.jones() if isinstance(s, KerrStage) else np.asarray(s, dtype=complex)
        m = j @ m
    return m


@dataclass(frozen=True)
class OpticsSettings:
    phi1: float
    phi2: float
    delta: float

    def stages(self) -> tuple[KerrStage, KerrStage]:
        return (KerrStage("axis-aligned", self.phi1),
                KerrStage("rotated", self.phi2, self.delta))

    def matrix(self) -> np.ndarray:
        return u2_matrix(self.phi2, self.delta) @ u1_matrix(self.phi1)


def axis_angle_for(cfg: FieldConfig) -> float:
    """Optical-axis angle ``delta`` of the rotated stage for field ``cfg``."""
    w0 = omega_zero(cfg)
    if not w0 > 0:
        raise InconsistentParametersError("omega0 = 0: the axis angle is undefined")
    c = (cfg.hbar * cfg.omega - 2 * cfg.b * math.cos(cfg.theta)) / (2 * cfg.hbar * w0)
    if abs(c) > 1 + CLAMP_TOL:
        raise InconsistentParametersError(f"cos(2 delta) = {c} lies outside [-1, 1]")
    c = min(1.0, max(-1.0, c))
    return -0.5 * math.acos(c)


def map_dynamics_to_optics(cfg: FieldConfig, t: float) -> OpticsSettings:
    return OpticsSettings(2 * omega_zero(cfg) * t, cfg.omega * t, axis_angle_for(cfg))


def bright_port_amplitude(first: Sequence, second: Sequence = ()) -> complex:
    """``<(1,0)| (F (x) S) |(1,0)>`` for stage sequences on each photon."""
    out = qmath.apply_local(compose(first), compose(second), qmath.PHI_PLUS, tol=1e-10)
    return qmath.overlap(qmath.PHI_PLUS, out)


def mach_zehnder_intensity(first: Sequence, reference_phase: float = 0.0,
                           second: Sequence = ()) -> float:
    """Bright-port probability of an ideal balanced interferometer.

    ``first`` holds the stages (Jones matrices or :class:`KerrStage`) in the
    interferometer arm; ``second`` optionally transforms the partner photon.
    """
    v = bright_port_amplitude(first, second)
    return float(abs(1 + complex(math.cos(reference_phase), math.sin(reference_phase)) * v) ** 2 / 4)


def replay_settings(ratio: float, delta: float, phi2: float = math.pi) -> OpticsSettings:
    """Stage settings equivalent to ``omega0 / omega = ratio`` at ``omega t = phi2``."""
    return OpticsSettings(2 * ratio * phi2, phi2, delta)


def dual_replay_intensity(ratio: float, delta: float, reference_phase: float = 0.0) -> float:
    """Both photons pass identical stage pairs set for ``omega0/omega = ratio``, half a cycle."""
    st = replay_settings(ratio, delta).stages()
    return mach_zehnder_intensity(st, reference_phase, second=st)
