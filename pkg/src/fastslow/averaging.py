"""Two-scale composition, its approximate inverse, and windowed averages.

A highly oscillatory signal u_eps(t) is compared against a two-scale field
u(t, s) (slow time t, fast periodic variable s) by composing the field at
s = fractional fast phase, or conversely by unfolding the signal onto the
(r, s) plane with a linear-in-s unfolding operator.  Windowed averages over
whole fast periods extract the slowly varying parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .integrate import Trajectory, invert_monotone, sample


@dataclass
class TwoScaleGrid:
    """Unfolded field values: values[i, j] at slow point r[i], fast point s[j]."""

    r: np.ndarray
    s: np.ndarray
    values: np.ndarray


def floor_frac(x):
    """Split x into (N, R) with N = floor(x) as a float and R = x - N.

    R lands in [0, 1); for negative x very close to an integer the
    subtraction can round to 1.0, which is clamped to the largest double
    below 1 so the interval contract holds.  N + R reproduces x exactly
    for x >= 0 and to <= 2 ulp otherwise.
    """
    if isinstance(x, np.ndarray):
        n = np.floor(x)
        r = x - n
        r = np.where(r >= 1.0, np.nextafter(1.0, 0.0), r)
        return n, r
    n = math.floor(x)
    r = x - n
    if r >= 1.0:
        r = math.nextafter(1.0, 0.0)
    return float(n), r


def two_scale_compose(t, s, epsilon: float):
    """h_eps(t, s) = eps*floor(t/eps) + eps*s; |h - t| <= eps."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    n, _ = floor_frac(np.asarray(t, float) / epsilon if isinstance(t, np.ndarray) else t / epsilon)
    return epsilon * n + epsilon * s


class TwoScaleInterpolant:
    """Unfolding of a sampled signal v(t) onto slow/fast variables.

    Evaluation at (t, s) blends v at the matching fast offset inside the
    two cells bracketing t, then subtracts s times the blended cell jump,
    which removes the sawtooth the blend would otherwise introduce:
    the result is continuous in t and exactly 1-periodic in s for signals
    sampled beyond the cell boundary.  Out-of-range evaluation points are
    clamped to the sampled interval and counted in .clamped.
    """

    def __init__(self, times: np.ndarray, values: np.ndarray, epsilon: float):
        if not epsilon > 0:
            raise ValueError("epsilon must be positive")
        times = np.asarray(times, float)
        values = np.asarray(values, float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be equal-length 1-D arrays")
        if times.size < 2:
            raise ValueError("need at least two samples")
        self.times = times
        self.values = values
        self.epsilon = epsilon
        self.clamped = 0

    def _v(self, t):
        t = np.asarray(t, float)
        lo, hi = self.times[0], self.times[-1]
        out = np.count_nonzero((t < lo) | (t > hi))
        if out:
            self.clamped += int(out)
        return np.interp(t, self.times, self.values)

    def __call__(self, t, s):
        t = np.asarray(t, float)
        s = np.asarray(s, float)
        eps = self.epsilon
        n, rho = floor_frac(t / eps)
        a = eps * n
        blend = ((1.0 - rho) * self._v(a + eps * s)
                 + rho * self._v(a + eps + eps * s))
        jump = ((1.0 - rho) * (self._v(a + eps) - self._v(a))
                + rho * (self._v(a + 2 * eps) - self._v(a + eps)))
        return blend - s * jump


def interpolate_two_scale(times, values, epsilon: float) -> TwoScaleInterpolant:
    """Build the unfolding interpolant of a sampled signal."""
    return TwoScaleInterpolant(times, values, epsilon)


def nonlinear_two_scale_error(u, limit, phase_traj: Trajectory, epsilon: float,
                              r_points: int = 512, s_points: int = 256):
    """Sup distance between an unfolded signal and its two-scale limit.

    u: vectorized callable of time (the finite-epsilon signal).
    limit: vectorized callable (t, s) -> limit values, 1-periodic in s.
    phase_traj: trajectory whose component 0 is the limit phase phi0;
    the signal is resampled at the times where phi0 passes pi*r, which
    is the slow-time change of variables that makes the fast variable
    exactly epsilon-periodic in r.

    The unfolding is evaluated on a uniform fine r-grid of spacing
    epsilon/s_points, so every lookup lands on a precomputed sample; the
    sup runs over interior slow points (three cells clear of the end).
    Returns (sup_error, info dict).
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    phi_T = float(phase_traj.states[-1, 0])
    r_max = phi_T / math.pi
    # resample the signal on the uniform fine r-grid via phase inversion
    n_cells = int(math.floor(r_max / epsilon))
    if n_cells < 4:
        raise ValueError("epsilon too large: fewer than four fast cells in range")
    k_max = s_points * n_cells
    r_fine = epsilon * np.arange(k_max + 1) / s_points
    t_fine = invert_monotone(phase_traj, np.pi * r_fine, component=0)
    v_fine = np.asarray(u(t_fine), float)

    r_lo, r_hi = 0.0, (n_cells - 3) * epsilon
    r_grid = np.linspace(r_lo, r_hi, r_points)
    n, rho = floor_frac(r_grid / epsilon)
    n = n.astype(int)
    j = np.arange(s_points)
    s_grid = j / s_points
    base = n[:, None] * s_points + j[None, :]
    blend = ((1.0 - rho)[:, None] * v_fine[base]
             + rho[:, None] * v_fine[base + s_points])
    cell_jump = v_fine[(n + 1) * s_points] - v_fine[n * s_points]
    next_jump = v_fine[(n + 2) * s_points] - v_fine[(n + 1) * s_points]
    jump = (1.0 - rho) * cell_jump + rho * next_jump
    unfolded = blend - s_grid[None, :] * jump[:, None]

    t_slow = invert_monotone(phase_traj, np.pi * r_grid, component=0)
    lim = np.asarray(limit(t_slow[:, None], s_grid[None, :]), float)
    err = float(np.max(np.abs(unfolded - lim)))
    return err, {"r_max": r_max, "cells": n_cells,
                 "r_window": (r_lo, r_hi), "s_points": s_points}


@dataclass(frozen=True)
class WindowedAverage:
    """Mean of a signal over a whole-period window centered near a time."""

    value: float
    t_lo: float
    t_hi: float
    slid_left: bool
    slid_right: bool


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def windowed_average(signal, t: float, epsilon: float, phase_traj: Trajectory,
                     m: int = 8, phase_scale: float = 2.0) -> WindowedAverage:
    """Average a vectorized signal over m whole fast periods around t.

    The window edges are found by inverting the phase (component 0 of
    phase_traj): the fast factor exp(i*phase_scale*phi/eps) completes
    exactly m cycles between them, so the oscillatory parts of the signal
    cancel to high order.  Windows that would stick out of the time range
    slide inward, keeping their width; slid windows are flagged.
    """
    if m < 1:
        raise ValueError("need at least one period")
    phi = float(sample(phase_traj, np.array([t]))[0, 0])
    half = math.pi * m * epsilon / phase_scale
    phi_lo_all = float(phase_traj.states[0, 0])
    phi_hi_all = float(phase_traj.states[-1, 0])
    if 2 * half > phi_hi_all - phi_lo_all:
        raise ValueError("window wider than the available phase range")
    lo = phi - half
    hi = phi + half
    slid_left = lo < phi_lo_all
    slid_right = hi > phi_hi_all
    if slid_left:
        lo, hi = phi_lo_all, phi_lo_all + 2 * half
    elif slid_right:
        lo, hi = phi_hi_all - 2 * half, phi_hi_all
    t_edges = invert_monotone(phase_traj, np.array([lo, hi]), component=0)
    t_lo, t_hi = float(t_edges[0]), float(t_edges[1])
    # composite Gauss-Legendre: 4 panels per fast period resolves the
    # oscillation far below the other error terms
    n_panels = 4 * m
    bounds = np.linspace(t_lo, t_hi, n_panels + 1)
    a = bounds[:-1]
    b = bounds[1:]
    midw = 0.5 * (b - a)
    nodes = (0.5 * (a + b)[:, None] + midw[:, None] * _GL_NODES[None, :]).ravel()
    vals = np.asarray(signal(nodes), float).reshape(n_panels, _GL_NODES.size)
    integral = float(np.sum((vals * _GL_WEIGHTS[None, :]) * midw[:, None]))
    return WindowedAverage(integral / (t_hi - t_lo), t_lo, t_hi,
                           slid_left, slid_right)


def estimate_order(epsilons, errors) -> tuple[float, float]:
    """Least-squares slope of log(error) against log(epsilon), with R^2.

    Returns (order, r_squared).  Requires >= 3 distinct positive
    epsilons and positive errors.
    """
    eps = np.asarray(epsilons, float)
    err = np.asarray(errors, float)
    if eps.size < 3:
        raise ValueError("need at least three epsilons for an order fit")
    if eps.size != err.size:
        raise ValueError("epsilons and errors must have equal length")
    if np.any(eps <= 0) or np.any(err <= 0):
        raise ValueError("epsilons and errors must be positive")
    if np.unique(eps).size != eps.size:
        raise ValueError("epsilons must be distinct")
    x = np.log(eps)
    y = np.log(err)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot == 0.0 and ss_res == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(r2)
