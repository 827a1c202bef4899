"""Randomized invariant checks run by ``so3mes verify``.

Each check returns the worst error it observed together with the tolerance
it is held to, so a report can show how much headroom every property has.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import qmath
from .dynamics import (FieldConfig, dual_evolution, omega_zero, propagator,
                       rk4_oracle_many, solve_field_for_ratio)
from .mes import double_value_check, su2_from_axis_angle
from .optics import dual_replay_intensity, map_dynamics_to_optics
from .trajectory import closure_phase, concurrences, count_breaks, trace


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)


def random_axis(rng: np.random.Generator) -> np.ndarray:
    k = rng.normal(size=3)
    return k / np.linalg.norm(k)


def random_config(rng: np.random.Generator) -> FieldConfig:
    return FieldConfig(b=rng.uniform(0.1, 3.0), theta=rng.uniform(0.05, math.pi - 0.05),
                       omega=rng.uniform(0.5, 2.0), hbar=rng.uniform(0.5, 2.0))


def check_double_valuedness(rng, n):
    worst = 0.0
    for _ in range(n):
        k, a = random_axis(rng), rng.uniform(0, math.pi)
        up = su2_from_axis_angle(k, math.pi + a)
        lo = su2_from_axis_angle(-k, math.pi - a)
        worst = max(worst, abs(up.alpha + lo.alpha), abs(up.beta + lo.beta))
        if not double_value_check(k, a):
            worst = max(worst, math.inf)
    return worst


def check_oracle(rng, n_cfg, n_t, steps=10_000):
    worst = 0.0
    for _ in range(n_cfg):
        cfg = random_config(rng)
        times = rng.uniform(0, 4 * math.pi / cfg.omega, size=n_t)
        for t, u in zip(times, rk4_oracle_many(cfg, times, steps)):
            worst = max(worst, float(np.max(np.abs(u - propagator(cfg, t).matrix()))))
    return worst


def check_unitarity(rng, n):
    worst = 0.0
    for _ in range(n):
        cfg = random_config(rng)
        t = rng.uniform(0, 20)
        worst = max(worst, qmath.unitarity_error(propagator(cfg, t).matrix()))
    return worst


def check_resonance(rng):
    worst = 0.0
    for r in (0.5, 1.0, 1.5, 2.0, 2.5):
        theta = rng.uniform(0.05, math.pi - 0.05)
        omega = rng.uniform(0.5, 2.0)
        b = solve_field_for_ratio(theta, omega, 1.0, r)
        worst = max(worst, abs(omega_zero(FieldConfig(b, theta, omega)) / omega - r))
    return worst


def check_split_identity():
    worst = 0.0
    theta = math.pi / 5
    for r, expected in ((1, -1), (2, -1), (3, -1), (0.5, 1), (1.5, 1), (2.5, 1)):
        cfg = FieldConfig(solve_field_for_ratio(theta, 1.0, 1.0, r), theta)
        v = qmath.overlap(qmath.PHI_PLUS, dual_evolution(cfg, math.pi))
        worst = max(worst, abs(v - expected))
    return worst


def check_parity(ratios, thetas, n_steps=4096):
    failures = 0
    for theta in thetas:
        for r in ratios:
            cfg = FieldConfig(solve_field_for_ratio(theta, 1.0, 1.0, r), theta)
            traj = trace(cfg, "dual", math.pi, n_steps)
            phase = closure_phase(traj)
            if phase == "open" or phase != (-1) ** count_breaks(traj):
                failures += 1
    return float(failures)


def check_concurrence(rng, n):
    worst = 0.0
    for _ in range(n):
        cfg = random_config(rng)
        traj = trace(cfg, "dual", math.pi / cfg.omega, 512)
        worst = max(worst, float(np.max(np.abs(concurrences(traj) - 1))))
    return worst


def check_optics(rng, n):
    worst = 0.0
    for _ in range(n):
        cfg = random_config(rng)
        t = rng.uniform(0, 4 * math.pi / cfg.omega)
        m = map_dynamics_to_optics(cfg, t).matrix()
        worst = max(worst, float(np.max(np.abs(m - propagator(cfg, t).matrix()))))
    return worst


def check_interferometer(rng):
    worst = 0.0
    delta = -rng.uniform(0, math.pi / 4)
    for n in range(4):
        worst = max(worst, dual_replay_intensity(n, delta),
                    1 - dual_replay_intensity(n + 0.5, delta))
    return worst


def run_all(seed: int = 0, quick: bool = False, corrupt: bool = False) -> list[CheckResult]:
    """Run every check; ``corrupt`` replaces all tolerances by -1 to self-test the harness."""
    rng = np.random.default_rng(seed)
    n = (lambda full, small: small if quick else full)
    plan: list[tuple[str, Callable[[], float], float]] = [
        ("double_valuedness", lambda: check_double_valuedness(rng, n(500, 50)), 1e-12),
        ("propagator_unitarity", lambda: check_unitarity(rng, n(200, 20)), 1e-10),
        ("oracle_agreement", lambda: check_oracle(rng, n(20, 3), n(10, 3)), 1e-8),
        ("resonance_round_trip", lambda: check_resonance(rng), 1e-9),
        ("split_identity", check_split_identity, 1e-6),
        ("parity_theorem", lambda: check_parity(
            (1, 1.5, 2, 2.5, 3) if not quick else (1, 1.5),
            (math.pi / 8, math.pi / 5, math.pi / 3) if not quick else (math.pi / 5,)), 0.0),
        ("entanglement_conservation", lambda: check_concurrence(rng, n(10, 2)), 1e-10),
        ("optics_correspondence", lambda: check_optics(rng, n(50, 10)), 1e-10),
        ("interferometer_pi_phase", lambda: check_interferometer(rng), 1e-6),
    ]
    return [CheckResult(name, fn(), -1.0 if corrupt else tol) for name, fn, tol in plan]
