import math

import numpy as np
import pytest

from so3mes import qmath
from so3mes.dynamics import FieldConfig, dual_evolution, propagator
from so3mes.errors import InsufficientResolutionError, NotApplicableError
from so3mes.mes import axis_angle_from_su2, from_two_qubit
from so3mes.trajectory import (ball_path, closure_phase, concurrences, count_breaks,
                               parity_theorem_check, trace)

from conftest import resonant


def brute_force_flips(cfg, mode, t_max, n):
    """Sheet flips counted straight from the public single-sample operations."""
    sheets = []
    for t in np.linspace(0, t_max, n + 1):
        if mode == "dual":
            m = from_two_qubit(dual_evolution(cfg, t))
        else:
            m = propagator(cfg, t)
        sheets.append(axis_angle_from_su2(m).sheet)
    return sum(a != b for a, b in zip(sheets, sheets[1:]))


def test_zero_time_trajectory(fig1_cfg):
    traj = trace(fig1_cfg, "dual", 0.0)
    assert len(traj.samples) == 1
    assert traj.samples[0].point.angle == pytest.approx(0, abs=1e-15)
    assert count_breaks(traj) == 0
    assert closure_phase(traj) == 1


def test_samples_uniform_and_increasing(fig1_cfg):
    traj = trace(fig1_cfg, "dual", math.pi, 256)
    ts = np.array([s.t for s in traj.samples])
    assert len(ts) == 257
    assert np.all(np.diff(ts) > 0)
    np.testing.assert_allclose(ts, np.arange(257) * math.pi / 256, atol=1e-15)


def test_trace_rejects_coarse_sampling(fig1_cfg):
    with pytest.raises(ValueError):
        trace(fig1_cfg, "dual", math.pi, 50)


def test_fig1(fig1_cfg):
    traj = trace(fig1_cfg, "dual", math.pi)
    assert count_breaks(traj) == 3
    assert closure_phase(traj) == -1
    assert parity_theorem_check(traj)


def test_fig2(fig2_cfg):
    traj = trace(fig2_cfg, "dual", math.pi)
    n = count_breaks(traj)
    assert n % 2 == 0 and n == 4
    assert closure_phase(traj) == 1
    assert parity_theorem_check(traj)


@pytest.mark.parametrize("mode,r", [("dual", 1.0), ("dual", 1.5), ("single", 1.0), ("single", 2.0)])
def test_break_count_matches_brute_force(mode, r):
    cfg = resonant(r)
    t_max = math.pi if mode == "dual" else 2 * math.pi
    traj = trace(cfg, mode, t_max, 512)
    assert len(traj.breaks) == brute_force_flips(cfg, mode, t_max, 512)


def test_truncated_trajectory_is_open(fig1_cfg):
    traj = trace(fig1_cfg, "dual", math.pi / 2)
    assert closure_phase(traj) == "open"
    with pytest.raises(NotApplicableError):
        parity_theorem_check(traj)


def test_single_mode_full_cycle(fig1_cfg):
    traj = trace(fig1_cfg, "single", 2 * math.pi)
    assert closure_phase(traj) == -1
    assert parity_theorem_check(traj)


def test_breaks_are_antipodal_surface_jumps(fig1_cfg, fig2_cfg):
    for cfg in (fig1_cfg, fig2_cfg):
        traj = trace(cfg, "dual", math.pi)
        for b in traj.breaks:
            assert b.t_hi - b.t_lo <= 1e-10
            assert b.exit.sheet == -b.reentry.sheet
            np.testing.assert_allclose(b.exit.vector(), -b.reentry.vector(), atol=1e-6)
            assert b.exit.angle == pytest.approx(math.pi, abs=1e-6)
            assert traj.samples[b.index - 1].t <= b.t_lo < b.t_hi <= traj.samples[b.index].t


def test_flips_only_near_surface(fig1_cfg):
    n = 4096
    traj = trace(fig1_cfg, "dual", math.pi, n)
    path = ball_path(traj)
    speed = np.max(np.linalg.norm(np.diff(path, axis=0), axis=1)[
        [i for i in range(n) if i + 1 not in {b.index for b in traj.breaks}]]) / (math.pi / n)
    for b in traj.breaks:
        for s in (traj.samples[b.index - 1], traj.samples[b.index]):
            assert s.point.angle > math.pi - 10 * (math.pi / n) * speed


def test_path_continuous_between_breaks(fig1_cfg):
    def max_jump(n):
        traj = trace(fig1_cfg, "dual", math.pi, n)
        d = np.linalg.norm(np.diff(ball_path(traj), axis=0), axis=1)
        skip = {b.index - 1 for b in traj.breaks}
        return max(x for i, x in enumerate(d) if i not in skip)

    ratio = max_jump(2048) / max_jump(1024)
    assert 0.4 < ratio < 0.6


def test_breaks_stable_under_doubling(fig2_cfg):
    counts = [len(trace(fig2_cfg, "dual", math.pi, n).breaks) for n in (4096, 8192, 16384)]
    assert len(set(counts)) == 1


def test_count_breaks_detects_undersampling():
    # fast internal precession with only 100 samples: flips get skipped
    cfg = resonant(60.0)
    traj = trace(cfg, "dual", math.pi, 100)
    with pytest.raises(InsufficientResolutionError):
        count_breaks(traj)


def test_concurrence_one_everywhere(fig1_cfg, fig2_cfg):
    for cfg in (fig1_cfg, fig2_cfg):
        for mode in ("single", "dual"):
            traj = trace(cfg, mode, math.pi)
            assert np.max(np.abs(concurrences(traj) - 1)) < 1e-10


def test_sample_points_derive_from_mes(fig1_cfg):
    traj = trace(fig1_cfg, "dual", math.pi, 200)
    for s in traj.samples[1:-1]:
        assert s.point == axis_angle_from_su2(s.mes)
        np.testing.assert_allclose(qmath.concurrence(s.state), 1, atol=1e-12)


def test_axis_carried_through_center():
    # static z field: the dual path stays on the z axis and crosses the center
    traj = trace(FieldConfig(1.0, 0.0), "single", 2 * math.pi, 400)
    for s in traj.samples[1:]:
        assert abs(abs(s.point.axis[2]) - 1) < 1e-9


@pytest.mark.parametrize("theta", [math.pi / 8, math.pi / 5, math.pi / 3])
@pytest.mark.parametrize("r", [1, 1.5, 2, 2.5, 3])
def test_parity_theorem_sweep(theta, r):
    traj = trace(resonant(r, theta), "dual", math.pi)
    assert closure_phase(traj) in (1, -1)
    assert parity_theorem_check(traj)
