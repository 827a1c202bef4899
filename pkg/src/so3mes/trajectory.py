"""Trajectories of maximally entangled states in the SO(3) ball.

A continuous SU(2) path projects onto a path in the radius-pi ball that
jumps to the antipode whenever ``Re(alpha)`` changes sign. Those jumps
(breaks) are detected as flips of the stored sheet sign and located by
bisection in time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from . import qmath
from .dynamics import FieldConfig, exact_solutions, propagator_entries
from .errors import (InsufficientResolutionError, InternalConsistencyError,
                     NonCommensurateClosureError, NotApplicableError)
from .mes import (DEGENERATE_SIN, BallPoint, MesState, MES_FORM_TOL,
                  axis_angle_from_su2)

Mode = Literal["single", "dual"]

DEFAULT_STEPS = 4096
MAX_STEPS = 2 ** 20
BISECT_TOL = 1e-10
CLOSURE_TOL = 1e-6


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    point: BallPoint
    mes: MesState
    state: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class BreakEvent:
    t_lo: float
    t_hi: float
    exit: BallPoint
    reentry: BallPoint
    index: int  # index of the first sample after the break


@dataclass(frozen=True)
class Trajectory:
    cfg: FieldConfig
    mode: Mode
    t_max: float
    n_steps: int
    samples: tuple[TrajectorySample, ...]
    breaks: tuple[BreakEvent, ...]

    @property
    def closure_phase(self):
        return closure_phase(self)


def _path_entries(cfg: FieldConfig, mode: Mode, ts, sol=None):
    """``(alpha, beta)`` arrays of the traced SU(2) path at times ``ts``."""
    alpha, beta = propagator_entries(cfg, ts, sol)
    if mode == "single":
        return alpha, beta
    if mode == "dual":
        # (U (x) U)|(1,0)> = (U U^T (x) I)|(1,0)>; first row of U U^T
        return alpha * alpha + beta * beta, beta * np.conj(alpha) - alpha * np.conj(beta)
    raise ValueError(f"unknown mode {mode!r}")


def _path_states(cfg: FieldConfig, mode: Mode, ts, sol=None) -> np.ndarray:
    """Two-qubit states along the path, built from the local operators."""
    alpha, beta = propagator_entries(cfg, ts, sol)
    u = np.empty(alpha.shape + (2, 2), dtype=complex)
    u[..., 0, 0], u[..., 0, 1] = alpha, beta
    u[..., 1, 0], u[..., 1, 1] = -np.conj(beta), np.conj(alpha)
    if mode == "single":
        v = np.broadcast_to(qmath.I2, u.shape)
    else:
        v = u
    phi = qmath.PHI_PLUS.reshape(2, 2)
    # (U (x) V) applied to the 2x2-reshaped amplitude tensor is U c V^T
    out = u @ phi @ np.swapaxes(v, -1, -2)
    return out.reshape(alpha.shape + (4,))


def _mes_from_states(states: np.ndarray):
    c00, c01, c10, c11 = np.moveaxis(states, -1, 0)
    mismatch = np.maximum(np.abs(c11 - np.conj(c00)), np.abs(c10 + np.conj(c01)))
    bad = np.flatnonzero(mismatch > MES_FORM_TOL)
    if bad.size:
        raise InternalConsistencyError(
            f"sample {bad[0]} left the maximally entangled manifold "
            f"(mismatch {mismatch[bad[0]]:.3e})")
    alpha, beta = math.sqrt(2) * c00, math.sqrt(2) * c01
    norm = np.sqrt(np.abs(alpha) ** 2 + np.abs(beta) ** 2)
    return alpha / norm, beta / norm


def _point(m: MesState, prev_axis) -> BallPoint:
    p = axis_angle_from_su2(m)
    sin_half = math.sqrt(m.alpha.imag ** 2 + abs(m.beta) ** 2)
    if prev_axis is not None and sin_half < DEGENERATE_SIN:
        return BallPoint(prev_axis, p.angle, p.sheet)
    return p


def _bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = BISECT_TOL):
    f_lo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return lo, hi


def trace(cfg: FieldConfig, mode: Mode = "dual", t_max: float = math.pi,
          n_steps: int = DEFAULT_STEPS) -> Trajectory:
    """Sample the path at ``n_steps + 1`` uniform times in ``[0, t_max]``."""
    if mode not in ("single", "dual"):
        raise ValueError(f"unknown mode {mode!r}")
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    if t_max == 0:
        ts = np.zeros(1)
    else:
        if n_steps < 100:
            raise ValueError("n_steps must be at least 100")
        ts = np.arange(n_steps + 1) * (t_max / n_steps)
    sol = None if cfg.degenerate else exact_solutions(cfg)
    states = _path_states(cfg, mode, ts, sol)
    alpha, beta = _mes_from_states(states)

    def re_alpha(t: float) -> float:
        a, _ = _path_entries(cfg, mode, np.array([t]), sol)
        return float(a[0].real)

    def point_at(t: float) -> BallPoint:
        a, b = _path_entries(cfg, mode, np.array([t]), sol)
        return axis_angle_from_su2(MesState(complex(a[0]), complex(b[0])))

    samples, breaks = [], []
    prev_axis = None
    for i, t in enumerate(ts):
        m = MesState(complex(alpha[i]), complex(beta[i]))
        p = _point(m, prev_axis)
        prev_axis = p.axis
        if samples and p.sheet != samples[-1].point.sheet:
            lo, hi = _bisect(re_alpha, float(ts[i - 1]), float(t))
            breaks.append(BreakEvent(lo, hi, point_at(lo), point_at(hi), i))
        samples.append(TrajectorySample(float(t), p, m, states[i]))
    return Trajectory(cfg, mode, float(t_max), int(n_steps), tuple(samples), tuple(breaks))


def _sheet_flips(cfg: FieldConfig, mode: Mode, t_max: float, n_steps: int) -> int:
    if t_max == 0:
        return 0
    ts = np.arange(n_steps + 1) * (t_max / n_steps)
    alpha, _ = _path_entries(cfg, mode, ts)
    # sheet is -1 exactly when the raw angle exceeds pi, i.e. Re(alpha) < 0
    sheet = np.where(alpha.real < 0, -1, 1)
    return int(np.count_nonzero(sheet[1:] != sheet[:-1]))


def count_breaks(traj: Trajectory, max_steps: int = MAX_STEPS) -> int:
    """Break count, validated by retracing at doubled resolution.

    Doubling continues until two consecutive resolutions agree; the result
    must match the trajectory's own count.
    """
    count = len(traj.breaks)
    if traj.t_max == 0:
        return count
    n, prev = traj.n_steps, count
    while True:
        n *= 2
        if n > max_steps:
            raise InsufficientResolutionError(
                f"break count not stable up to {max_steps} steps")
        refined = _sheet_flips(traj.cfg, traj.mode, traj.t_max, n)
        if refined == prev:
            break
        prev = refined
    if refined != count:
        raise InsufficientResolutionError(
            f"{count} breaks at {traj.n_steps} steps but {refined} at {n}; "
            "increase n_steps")
    return count


def closure_phase(traj: Trajectory, tol: float = CLOSURE_TOL):
    """Return ``+1``, ``-1`` or ``"open"`` from <initial|final>."""
    v = qmath.overlap(traj.samples[0].state, traj.samples[-1].state)
    if abs(v) < 1 - tol:
        return "open"
    if abs(v - 1) <= tol:
        return 1
    if abs(v + 1) <= tol:
        return -1
    raise NonCommensurateClosureError(
        f"trajectory closes with overlap {v:.6g}, which is neither +1 nor -1")


def parity_theorem_check(traj: Trajectory) -> bool:
    phase = closure_phase(traj)
    if phase == "open":
        raise NotApplicableError("trajectory is open; the parity check needs a closed path")
    return phase == (-1) ** count_breaks(traj)


def concurrences(traj: Trajectory) -> np.ndarray:
    return np.array([qmath.concurrence(s.state) for s in traj.samples])


def ball_path(traj: Trajectory) -> np.ndarray:
    """``(n, 3)`` array of Cartesian ball positions."""
    return np.array([s.point.vector() for s in traj.samples])


