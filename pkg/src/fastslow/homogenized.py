"""Leading-order (homogenized) dynamics: the epsilon -> 0 limit.

The oscillator collapses to an adiabatic energy reservoir theta_star *
omega(y0) that back-reacts on the slow coordinate through the force
-theta_star * omega'(y0); the limit phase phi0 accumulates omega(y0) and
is the clock against which all oscillatory structure is measured.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .integrate import Trajectory, integrate_controlled, invert_monotone
from .model import FrequencyModel, SystemParams, derived_constants


@dataclass(frozen=True)
class HomogenizedState:
    """Limit state: phase phi0, action theta0 (constant), slow pair (y0, p0).

    Fields may hold floats or equal-length arrays; the formulas are
    arithmetic in the fields either way.
    """

    phi0: object
    y0: object
    p0: object
    theta0: object


def homogenized_rhs(s: HomogenizedState, fm: FrequencyModel) -> HomogenizedState:
    """Time derivative of the limit state; theta0 is conserved exactly."""
    w, w1, _, _ = fm.derivs(s.y0)
    return HomogenizedState(phi0=w, y0=s.p0, p0=-s.theta0 * w1,
                            theta0=0.0 * s.theta0)


def homogenized_field(fm: FrequencyModel, theta_star: float):
    """Vector field f(t, x) with x = [phi0, y0, p0]; theta0 enters as the
    constant theta_star."""

    def f(t, x):
        _, y0, p0 = x
        w, w1, _, _ = fm.derivs(y0)
        return np.array([w, p0, -theta_star * w1])

    return f


def solve_homogenized(params: SystemParams, fm: FrequencyModel,
                      rtol: float = 1e-12, atol: float = 1e-12,
                      max_step: float = 0.002) -> Trajectory:
    """Integrate the limit system over [0, horizon_T].

    States are [phi0, y0, p0]; meta records the component names and
    theta_star.  The step cap keeps the dense output smooth enough for
    downstream finite differencing.
    """
    dc = derived_constants(params, fm)
    x0 = np.array([0.0, params.y_star, params.p_star])
    traj = integrate_controlled(homogenized_field(fm, dc.theta_star), x0,
                                params.horizon_T, rtol, atol, max_step=max_step)
    traj.meta["components"] = ("phi0", "y0", "p0")
    traj.meta["theta_star"] = dc.theta_star
    return traj


def invert_phase(traj: Trajectory, r) -> np.ndarray:
    """Times t with phi0(t) = pi * r; r may be a scalar or an array.

    phi0 is strictly increasing (slope >= the frequency floor), so the
    crossing is unique; resolved to ~1e-12 in phase.
    """
    r = np.atleast_1d(np.asarray(r, float))
    return invert_monotone(traj, np.pi * r, component=0)


def eval_homogenized(traj: Trajectory, grid) -> HomogenizedState:
    """Dense samples of the limit state on a grid, as arrays."""
    from .integrate import sample

    xs = sample(traj, grid)
    theta_star = traj.meta["theta_star"]
    return HomogenizedState(phi0=xs[:, 0], y0=xs[:, 1], p0=xs[:, 2],
                            theta0=np.full(xs.shape[0], theta_star))
