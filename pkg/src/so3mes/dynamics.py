"""Spin-1/2 in a rotating magnetic field.

The field ``B (sin(theta) cos(wt), sin(theta) sin(wt), cos(theta))`` couples
as ``H = sigma . B``. Going to the frame co-rotating with the field gives a
static Hamiltonian, so the two exact solutions are rotating-frame
eigenvectors with quasi-energies ``+-hbar*omega0``. Operators returned by
:func:`propagator` are expressed in the basis ``{psi+(0), psi-(0)}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmath
from .errors import AccuracyError, DegenerateGeometryError, NoSolutionError
from .mes import MesState

SIN_EPS = 1e-12


@dataclass(frozen=True)
class FieldConfig:
    b: float
    theta: float
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.b >= 0:
            raise ValueError(f"field strength must be >= 0, got {self.b!r}")
        if not self.omega > 0:
            raise ValueError(f"rotation frequency must be > 0, got {self.omega!r}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be > 0, got {self.hbar!r}")
        if not 0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")

    @property
    def degenerate(self) -> bool:
        """True when the field is static along +-z (sin(theta) ~ 0) or absent."""
        return abs(math.sin(self.theta)) <= SIN_EPS or self.b == 0


@dataclass(frozen=True)
class ExactSolutionPair:
    omega0: float
    a_plus: complex
    b_plus: complex
    a_minus: complex
    b_minus: complex
    omega: float

    def psi_plus(self, t) -> np.ndarray:
        return self._psi(self.a_plus, self.b_plus, -1, t)

    def psi_minus(self, t) -> np.ndarray:
        return self._psi(self.a_minus, self.b_minus, +1, t)

    def _psi(self, a, b, sign, t):
        t = np.asarray(t, dtype=float)
        phase = np.exp(sign * 1j * self.omega0 * t)
        half = np.exp(-0.5j * self.omega * t)
        return np.stack([a * half * phase, b * np.conj(half) * phase], axis=-1)

    def basis(self) -> np.ndarray:
        """Columns psi+(0), psi-(0): the lab-frame to eigenbasis change."""
        return np.array([[self.a_plus, self.a_minus],
                         [self.b_plus, self.b_minus]], dtype=complex)


def hamiltonian(cfg: FieldConfig, t: float) -> np.ndarray:
    c, s = math.cos(cfg.theta), math.sin(cfg.theta)
    e = complex(math.cos(cfg.omega * t), math.sin(cfg.omega * t))
    return cfg.b * np.array([[c, s * e.conjugate()], [s * e, -c]], dtype=complex)


def omega_zero(cfg: FieldConfig) -> float:
    hw = cfg.hbar * cfg.omega
    # written as a sum of squares so rounding never makes it negative
    disc = (hw - 2 * cfg.b * math.cos(cfg.theta)) ** 2 + (2 * cfg.b * math.sin(cfg.theta)) ** 2
    return math.sqrt(disc) / (2 * cfg.hbar)


def exact_solutions(cfg: FieldConfig) -> ExactSolutionPair:
    s = math.sin(cfg.theta)
    if abs(s) <= SIN_EPS or cfg.b == 0:
        raise DegenerateGeometryError(
            "sin(theta) = 0 or B = 0: use the static-field propagator instead")
    w0 = omega_zero(cfg)
    x = cfg.hbar * cfg.omega - 2 * cfg.b * math.cos(cfg.theta)
    y = 2 * cfg.b * s
    ratio_plus = (x + 2 * cfg.hbar * w0) / y
    ratio_minus = (x - 2 * cfg.hbar * w0) / y
    a_plus = 1.0 / math.sqrt(1.0 + ratio_plus ** 2)
    a_minus = 1.0 / math.sqrt(1.0 + ratio_minus ** 2)
    return ExactSolutionPair(w0, complex(a_plus), complex(a_plus * ratio_plus),
                             complex(a_minus), complex(a_minus * ratio_minus),
                             cfg.omega)


def _static_entries(cfg: FieldConfig, t: np.ndarray):
    # H = +-B sigma_z (or 0): lab basis states are already eigenstates
    c = cfg.b * math.cos(cfg.theta) if cfg.b else 0.0
    alpha = np.exp(-1j * c * t / cfg.hbar)
    return alpha, np.zeros_like(alpha)


def propagator_entries(cfg: FieldConfig, t, sol: ExactSolutionPair | None = None):
    """Vectorized ``(alpha, beta)`` of the propagator at times ``t``.

    ``alpha = <psi+(0)|psi+(t)>`` and ``beta = <psi+(0)|psi-(t)>``; the
    remaining entries follow from special unitarity.
    """
    t = np.asarray(t, dtype=float)
    if cfg.degenerate and sol is None:
        return _static_entries(cfg, t)
    sol = sol or exact_solutions(cfg)
    p0 = np.conj(sol.psi_plus(0.0))
    alpha = sol.psi_plus(t) @ p0
    beta = sol.psi_minus(t) @ p0
    return alpha, beta


def propagator(cfg: FieldConfig, t: float, sol: ExactSolutionPair | None = None) -> MesState:
    alpha, beta = propagator_entries(cfg, t, sol)
    return MesState(complex(alpha), complex(beta))


def propagator_lab(cfg: FieldConfig, t: float, sol: ExactSolutionPair | None = None) -> np.ndarray:
    """The time-evolution operator in the lab (|up>, |down>) basis."""
    if cfg.degenerate and sol is None:
        alpha, _ = _static_entries(cfg, np.asarray(t, dtype=float))
        return np.diag([complex(alpha), complex(alpha).conjugate()])
    sol = sol or exact_solutions(cfg)
    v0 = sol.basis()
    vt = np.stack([sol.psi_plus(t), sol.psi_minus(t)], axis=-1)
    return vt @ v0.conj().T


def closed_form_propagator(cfg: FieldConfig, t: float, as_printed: bool = False):
    """Closed-form ``(alpha, beta)`` in terms of omega0 and the field.

    With ``as_printed=True`` the amplitude ratio in beta is ``a+/a-``;
    otherwise ``a-/a+``, which is the ratio that agrees with
    :func:`propagator`.
    """
    sol = exact_solutions(cfg)
    w0, hb = sol.omega0, cfg.hbar
    c = math.cos(cfg.theta)
    half = cfg.omega * t / 2
    alpha = (math.cos(half) + 1j * math.sin(half)
             * (hb * cfg.omega - 2 * cfg.b * c) / (2 * hb * w0)) * np.exp(-1j * w0 * t)
    ratio = sol.a_plus / sol.a_minus if as_printed else sol.a_minus / sol.a_plus
    beta = (1j * math.sin(half) * ratio
            * (hb * (cfg.omega - 2 * w0) - 2 * cfg.b * c) / (2 * hb * w0)
            * np.exp(1j * w0 * t))
    return complex(alpha), complex(beta)


def _rk4_lab(cfg: FieldConfig, times, steps_per_period: int) -> list[np.ndarray]:
    """Integrate i hbar dU/dt = H(t) U from U(0)=I, recording U at ``times``."""
    times = np.asarray(times, dtype=float)
    order = np.argsort(times)
    period = 2 * math.pi / cfg.omega
    u = np.eye(2, dtype=complex)
    t_now = 0.0
    out = [None] * len(times)

    b, w, hb = cfg.b, cfg.omega, cfg.hbar
    hc, hs = b * math.cos(cfg.theta) / hb, b * math.sin(cfg.theta) / hb

    def rhs(tt, u00, u01, u10, u11):
        # -i/hbar H(t) U with H written out entrywise; much faster than numpy for 2x2
        e = complex(math.cos(w * tt), math.sin(w * tt)) * hs
        ec = e.conjugate()
        return (-1j * (hc * u00 + ec * u10), -1j * (hc * u01 + ec * u11),
                -1j * (e * u00 - hc * u10), -1j * (e * u01 - hc * u11))

    for idx in order:
        target = float(times[idx])
        if target < t_now:
            raise ValueError("times must be non-negative")
        n = max(1, math.ceil((target - t_now) / period * steps_per_period)) if target > t_now else 0
        if n:
            h = (target - t_now) / n
            h2, h6 = h / 2, h / 6
            x = (complex(u[0, 0]), complex(u[0, 1]), complex(u[1, 0]), complex(u[1, 1]))
            for i in range(n):
                tt = t_now + i * h
                k1 = rhs(tt, *x)
                k2 = rhs(tt + h2, *(xi + h2 * ki for xi, ki in zip(x, k1)))
                k3 = rhs(tt + h2, *(xi + h2 * ki for xi, ki in zip(x, k2)))
                k4 = rhs(tt + h, *(xi + h * ki for xi, ki in zip(x, k3)))
                x = tuple(xi + h6 * (a + 2 * b_ + 2 * c + d)
                          for xi, a, b_, c, d in zip(x, k1, k2, k3, k4))
            u = np.array([[x[0], x[1]], [x[2], x[3]]], dtype=complex)
            t_now = target
        out[idx] = u.copy()
    return out


def rk4_oracle(cfg: FieldConfig, t: float, steps: int = 10_000,
               basis: str = "eigen") -> np.ndarray:
    """Classical RK4 propagator; ``steps`` is the step count per field period.

    With ``basis="eigen"`` the result is rotated into the ``{psi+(0), psi-(0)}``
    basis so it is directly comparable with :func:`propagator`.
    """
    return rk4_oracle_many(cfg, [t], steps, basis)[0]


def rk4_oracle_many(cfg: FieldConfig, times, steps: int = 10_000,
                    basis: str = "eigen") -> list[np.ndarray]:
    if steps < 1:
        raise ValueError("steps must be positive")
    mats = _rk4_lab(cfg, times, steps)
    worst = max(qmath.unitarity_error(m) for m in mats)
    if worst > 1e-6:
        raise AccuracyError(
            f"RK4 with {steps} steps per period drifts from unitarity by {worst:.3e}")
    if basis == "lab" or cfg.degenerate:
        return mats
    v0 = exact_solutions(cfg).basis()
    return [v0.conj().T @ m @ v0 for m in mats]


def solve_field_for_ratio(theta: float, omega: float = 1.0, hbar: float = 1.0,
                          r: float = 1.0) -> float:
    """Field strength B > 0 that makes omega0 / omega equal ``r``."""
    c = math.cos(theta)
    disc = c * c - 1 + 4 * r * r
    if disc < 0:
        raise NoSolutionError(f"no real field gives omega0/omega = {r} at theta = {theta}")
    b = 0.5 * hbar * omega * (c + math.sqrt(disc))
    if b < 0:
        raise NoSolutionError(f"the field for omega0/omega = {r} would be negative ({b})")
    return b


def dual_state(m: MesState) -> np.ndarray:
    """``(U (x) U)|(1,0)>`` for the SU(2) element ``U`` carried by ``m``."""
    u = m.matrix()
    return qmath.apply_local(u, u, qmath.PHI_PLUS, tol=1e-10)


def dual_evolution(cfg: FieldConfig, t: float) -> np.ndarray:
    return dual_state(propagator(cfg, t))
