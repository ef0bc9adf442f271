"""Fixed-step and adaptive integrators, dense output, Richardson reference."""

import math

import numpy as np
import pytest

import fastslow as fs


def decay(t, x):
    return -x


def test_fixed_step_is_fourth_order():
    errs = []
    hs = [0.1, 0.05, 0.025]
    for h in hs:
        traj = fs.integrate_fixed(decay, np.array([1.0]), 1.0, h)
        errs.append(abs(traj.states[-1, 0] - math.exp(-1.0)))
    order = math.log(errs[0] / errs[2]) / math.log(4)
    assert abs(order - 4.0) <= 0.1


def test_fixed_step_accuracy_at_small_h():
    traj = fs.integrate_fixed(decay, np.array([1.0]), 1.0, 1e-3)
    assert abs(traj.states[-1, 0] - math.exp(-1.0)) <= 1e-10


def test_fixed_step_exact_on_constant_field():
    traj = fs.integrate_fixed(lambda t, x: np.ones(1), np.array([0.0]), 2.0, 0.125)
    assert traj.times[-1] == 2.0
    assert traj.states[-1, 0] == 2.0  # 16 exact binary steps


def test_fixed_step_node_times_are_multiples():
    traj = fs.integrate_fixed(decay, np.array([1.0]), 1.0, 0.03)
    assert traj.times[0] == 0.0
    assert traj.times[-1] == 1.0
    assert np.all(np.diff(traj.times) > 0)
    # interior nodes sit at i*h exactly
    assert traj.times[7] == 7 * 0.03


def test_constant_frequency_keeps_action_bitwise(fm):
    fmc = fs.make_frequency("constant", (2.0,))
    x0 = np.array([0.0, 0.25, 0.0, 1.0])
    traj = fs.integrate_fixed(fs.action_angle_field(0.01, fmc), x0, 1.0, 1e-3)
    assert np.all(traj.states[:, 1] == 0.25)
    assert np.all(traj.states[:, 3] == 1.0)


def test_controlled_energy_drift(fm):
    eps = 0.01
    x0 = np.array([0.0, 0.25, 0.0, 1.0])
    traj = fs.integrate_controlled(fs.action_angle_field(eps, fm), x0, 1.0,
                                   rtol=1e-10, atol=1e-10)
    E = np.array([fs.energy_action_angle(fs.ActionAngleState(*st), eps, fm)
                  for st in traj.states])
    assert np.max(np.abs(E - E[0])) <= 1e-8


def test_controlled_step_count_scales_with_frequency(fm):
    x0 = np.array([0.0, 0.25, 0.0, 1.0])
    n = {}
    for eps in (0.01, 0.005):
        traj = fs.integrate_controlled(fs.action_angle_field(eps, fm), x0, 1.0,
                                       rtol=1e-10, atol=1e-10)
        n[eps] = traj.times.size
    ratio = n[0.005] / n[0.01]
    assert 2 / 1.5 <= ratio <= 2 * 1.5


def test_controlled_respects_max_step():
    traj = fs.integrate_controlled(decay, np.array([1.0]), 1.0, 1e-8, 1e-8,
                                   max_step=0.01)
    assert np.max(np.diff(traj.times)) <= 0.01 + 1e-12


def test_dense_eval_exact_at_nodes(fm):
    traj = fs.integrate_fixed(fs.action_angle_field(0.02, fm),
                              np.array([0.0, 0.25, 0.0, 1.0]), 1.0, 1e-4)
    for i in (0, 400, 5000, traj.times.size - 1):
        assert np.array_equal(fs.dense_eval(traj, float(traj.times[i])),
                              traj.states[i])


def test_dense_eval_midpoint_accuracy(fm):
    eps = 0.02
    x0 = np.array([0.0, 0.25, 0.0, 1.0])
    h = 2 * math.pi * eps / (80 * fm.omega_upper_bound)
    traj = fs.reference_solution(fs.action_angle_field(eps, fm), x0, 1.0, h)
    fine = fs.reference_solution(fs.action_angle_field(eps, fm), x0, 1.0, h / 4)
    tm = float(0.5 * (traj.times[100] + traj.times[101]))
    assert np.max(np.abs(fs.dense_eval(traj, tm) - fs.dense_eval(fine, tm))) <= 1e-10


def test_sample_matches_dense_eval(fm):
    traj = fs.integrate_fixed(fs.action_angle_field(0.04, fm),
                              np.array([0.0, 0.25, 0.0, 1.0]), 1.0, 1e-3)
    grid = np.linspace(0.0, 1.0, 101)
    xs = fs.sample(traj, grid)
    for j in (0, 17, 50, 100):
        assert np.array_equal(xs[j], fs.dense_eval(traj, float(grid[j])))


def test_richardson_reference_reports_error(fm):
    eps = 0.02
    x0 = np.array([0.0, 0.25, 0.0, 1.0])
    h1 = 2 * math.pi * eps / (40 * fm.omega_upper_bound)
    r1 = fs.reference_solution(fs.action_angle_field(eps, fm), x0, 1.0, h1)
    r2 = fs.reference_solution(fs.action_angle_field(eps, fm), x0, 1.0, h1 / 2)
    e1 = r1.meta["richardson_error"]
    e2 = r2.meta["richardson_error"]
    assert e1 > 0 and e2 > 0
    # fourth-order scheme: halving h divides the tag by ~16
    assert 12 <= e1 / e2 <= 22


def test_reference_error_cap_enforced(fm):
    x0 = np.array([0.0, 0.25, 0.0, 1.0])
    with pytest.raises(fs.NumericalError):
        fs.reference_solution(fs.action_angle_field(0.02, fm), x0, 1.0, 0.01,
                              error_cap=1e-14)


def test_nonfinite_rhs_raises():
    def bad(t, x):
        return np.array([float("nan")])
    with pytest.raises(fs.NumericalError):
        fs.integrate_fixed(bad, np.array([1.0]), 1.0, 0.1)
    with pytest.raises(fs.NumericalError):
        fs.integrate_controlled(bad, np.array([1.0]), 1.0, 1e-8, 1e-8)


def test_step_larger_than_horizon_rejected():
    with pytest.raises(ValueError):
        fs.integrate_fixed(decay, np.array([1.0]), 1.0, 2.0)
    with pytest.raises(ValueError):
        fs.integrate_fixed(decay, np.array([1.0]), 1.0, 0.0)


def test_step_budget_exhaustion_raises():
    with pytest.raises(fs.NumericalError):
        fs.integrate_controlled(decay, np.array([1.0]), 1.0, 1e-13, 1e-13,
                                max_steps=10)


def test_invert_monotone_recovers_times():
    traj = fs.integrate_fixed(lambda t, x: np.array([2.0 + np.sin(x[0])]),
                              np.array([0.0]), 1.0, 1e-3)
    targets = np.linspace(0.0, float(traj.states[-1, 0]), 20)
    ts = fs.invert_monotone(traj, targets)
    vals = fs.sample(traj, ts)[:, 0]
    assert np.max(np.abs(vals - targets)) <= 1e-10
