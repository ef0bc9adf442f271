"""Run configuration, file outputs, and the command-line interface.

Five commands: simulate (write trajectories), sweep (convergence orders),
thermo (thermodynamic series and balances), twoscale (unfolding errors),
check (analytic identity suite).  All outputs are deterministic: rerunning
a command with the same configuration reproduces every data file bitwise.

Configuration files are flat "section.key = value" lines; unknown keys are
rejected.  Exit codes: 0 success, 1 a quantitative gate failed, 2 bad
configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import averaging, dynamics, expansion, homogenized, integrate, model, thermo
from .integrate import NumericalError


class ConfigError(ValueError):
    """Bad configuration file or option."""


_PRESET_DEFAULT_COEFFS = {
    "sine": (2.0, 1.0),
    "constant": (2.0,),
    "fourier": (2.0, 0.25, 0.25),
}


@dataclass(frozen=True)
class RunConfig:
    """Complete, validated description of a run."""

    frequency_preset: str = "sine"
    frequency_coefficients: tuple = (2.0, 1.0)
    y_star: float = 0.0
    p_star: float = 1.0
    u_star: float = 1.0
    horizon_T: float = 1.0
    epsilons: tuple = (0.04, 0.02, 0.01, 0.005)
    step_factor: float = 40.0
    reference_factor: float = 80.0
    rtol: float = 1e-12
    atol: float = 1e-12
    max_slow_step: float = 0.002
    grid_points: int = 2001
    out_dir: str = "runs"
    window_periods: int = 8
    flip_theta1_sign: bool = False

    def frequency(self) -> model.FrequencyModel:
        try:
            return model.make_frequency(self.frequency_preset,
                                        self.frequency_coefficients)
        except ValueError as e:
            raise ConfigError(str(e)) from e

    def params(self) -> model.SystemParams:
        try:
            return model.SystemParams(self.y_star, self.p_star, self.u_star,
                                      self.horizon_T)
        except ValueError as e:
            raise ConfigError(str(e)) from e

    def echo(self) -> str:
        """Canonical flat-text form; reparsing reproduces this config."""
        lines = [
            f"frequency.preset = {self.frequency_preset}",
            "frequency.coefficients = " + ",".join(repr(c) for c in self.frequency_coefficients),
            f"initial.y_star = {self.y_star!r}",
            f"initial.p_star = {self.p_star!r}",
            f"initial.u_star = {self.u_star!r}",
            f"run.horizon_T = {self.horizon_T!r}",
            "run.epsilons = " + ",".join(repr(e) for e in self.epsilons),
            f"integrate.step_factor = {self.step_factor!r}",
            f"integrate.reference_factor = {self.reference_factor!r}",
            f"integrate.rtol = {self.rtol!r}",
            f"integrate.atol = {self.atol!r}",
            f"integrate.max_slow_step = {self.max_slow_step!r}",
            f"output.grid_points = {self.grid_points}",
            f"output.dir = {self.out_dir}",
            f"averaging.window_periods = {self.window_periods}",
            f"debug.flip_theta1_sign = {'true' if self.flip_theta1_sign else 'false'}",
        ]
        return "\n".join(lines) + "\n"


_KEY_FIELDS = {
    "frequency.preset": ("frequency_preset", str),
    "frequency.coefficients": ("frequency_coefficients", "floats"),
    "initial.y_star": ("y_star", float),
    "initial.p_star": ("p_star", float),
    "initial.u_star": ("u_star", float),
    "run.horizon_T": ("horizon_T", float),
    "run.epsilons": ("epsilons", "floats"),
    "integrate.step_factor": ("step_factor", float),
    "integrate.reference_factor": ("reference_factor", float),
    "integrate.rtol": ("rtol", float),
    "integrate.atol": ("atol", float),
    "integrate.max_slow_step": ("max_slow_step", float),
    "output.grid_points": ("grid_points", int),
    "output.dir": ("out_dir", str),
    "averaging.window_periods": ("window_periods", int),
    "debug.flip_theta1_sign": ("flip_theta1_sign", "bool"),
}


def parse_config_text(text: str) -> RunConfig:
    """Parse flat key = value lines into a validated RunConfig."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _KEY_FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        name, kind = _KEY_FIELDS[key]
        try:
            if kind == "floats":
                parsed = tuple(float(x) for x in val.split(",") if x.strip() != "")
                if not parsed:
                    raise ValueError("empty list")
            elif kind == "bool":
                if val.lower() not in ("true", "false"):
                    raise ValueError("expected true or false")
                parsed = val.lower() == "true"
            else:
                parsed = kind(val)
        except ValueError as e:
            raise ConfigError(f"line {lineno}: bad value for {key}: {e}") from e
        values[name] = parsed
    cfg = RunConfig(**values)
    validate_config(cfg)
    return cfg


def load_config(path: str | Path) -> RunConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    return parse_config_text(p.read_text())


def validate_config(cfg: RunConfig) -> None:
    if any(e <= 0 for e in cfg.epsilons):
        raise ConfigError("epsilons must be positive")
    if len(cfg.epsilons) > 1 and any(b >= a for a, b in zip(cfg.epsilons, cfg.epsilons[1:])):
        raise ConfigError("epsilons must be strictly decreasing")
    if not (cfg.rtol > 0 and cfg.atol > 0):
        raise ConfigError("tolerances must be positive")
    if not (cfg.step_factor > 0 and cfg.reference_factor > 0):
        raise ConfigError("step factors must be positive")
    if not cfg.max_slow_step > 0:
        raise ConfigError("max_slow_step must be positive")
    if cfg.grid_points < 5:
        raise ConfigError("grid_points must be at least 5")
    if cfg.window_periods < 1:
        raise ConfigError("window_periods must be at least 1")
    cfg.frequency()
    cfg.params()


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path: Path, header: list[str], columns: list) -> None:
    """Write columns (same length) as CSV with 17-significant-digit floats."""
    n = len(columns[0])
    rows = [",".join(header)]
    for i in range(n):
        rows.append(",".join(_fmt(col[i]) for col in columns))
    path.write_text("\n".join(rows) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out: Path, command: str, cfg: RunConfig, files: list[Path],
                   wall_seconds: float) -> Path:
    from . import __version__

    manifest = {
        "command": command,
        "version": __version__,
        "wall_seconds": round(wall_seconds, 3),
        "config": cfg.echo(),
        "files": {f.name: {"bytes": f.stat().st_size, "sha256": _sha256(f)}
                  for f in files},
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.horizon_T, cfg.grid_points)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("FASTSLOW_WORKERS", "1")))
    except ValueError:
        return 1


def _reference_run(cfg: RunConfig, fm, epsilon: float, representation: str):
    dc = model.derived_constants(cfg.params(), fm)
    base_h = 2.0 * math.pi * epsilon / (cfg.reference_factor * fm.omega_upper_bound)
    if representation == "action-angle":
        x0 = np.array([0.0, dc.theta_star, cfg.y_star, cfg.p_star])
        return integrate.reference_solution(dynamics.action_angle_field(epsilon, fm),
                                            x0, cfg.horizon_T, base_h)
    x0 = np.array([cfg.y_star, cfg.p_star, 0.0, cfg.u_star])
    return integrate.reference_solution(dynamics.cartesian_field(epsilon, fm),
                                        x0, cfg.horizon_T, base_h)


def _fast_run(cfg: RunConfig, fm, epsilon: float, representation: str):
    dc = model.derived_constants(cfg.params(), fm)
    h = 2.0 * math.pi * epsilon / (cfg.step_factor * fm.omega_upper_bound)
    if representation == "action-angle":
        x0 = np.array([0.0, dc.theta_star, cfg.y_star, cfg.p_star])
        return integrate.integrate_fixed(dynamics.action_angle_field(epsilon, fm),
                                         x0, cfg.horizon_T, h)
    x0 = np.array([cfg.y_star, cfg.p_star, 0.0, cfg.u_star])
    return integrate.integrate_fixed(dynamics.cartesian_field(epsilon, fm),
                                     x0, cfg.horizon_T, h)


def cmd_simulate(cfg: RunConfig, out: Path) -> int:
    """Write finite-epsilon, homogenized, and averaged trajectories."""
    t0 = time.perf_counter()
    fm = cfg.frequency()
    params = cfg.params()
    grid = _grid(cfg)
    files = []
    for eps in cfg.epsilons:
        traj = _fast_run(cfg, fm, eps, "action-angle")
        xs = integrate.sample(traj, grid)
        E = dynamics.energy_action_angle_arrays(xs[:, 0], xs[:, 1], xs[:, 2],
                                                xs[:, 3], eps, fm)
        w = fm.omega(xs[:, 2])
        e_perp = xs[:, 1] * w
        p1 = out / f"traj_eps{eps:g}.csv"
        write_csv(p1, ["t", "phi", "theta", "y", "p", "E", "E_perp", "E_par"],
                  [grid, xs[:, 0], xs[:, 1], xs[:, 2], xs[:, 3], E, e_perp,
                   E - e_perp])
        files.append(p1)

        ctraj = _fast_run(cfg, fm, eps, "cartesian")
        cs = integrate.sample(ctraj, grid)
        wc = fm.omega(cs[:, 0])
        ce_perp = 0.5 * cs[:, 3] ** 2 + 0.5 * (wc * cs[:, 2] / eps) ** 2
        ce_par = 0.5 * cs[:, 1] ** 2
        p2 = out / f"cart_eps{eps:g}.csv"
        write_csv(p2, ["t", "y", "eta", "z", "zeta", "E", "E_perp", "E_par"],
                  [grid, cs[:, 0], cs[:, 1], cs[:, 2], cs[:, 3],
                   ce_perp + ce_par, ce_perp, ce_par])
        files.append(p2)

    dc = model.derived_constants(params, fm)
    htraj = homogenized.solve_homogenized(params, fm, cfg.rtol, cfg.atol,
                                          cfg.max_slow_step)
    hs = integrate.sample(htraj, grid)
    e0 = 0.5 * hs[:, 2] ** 2 + dc.theta_star * fm.omega(hs[:, 1])
    p3 = out / "homogenized.csv"
    write_csv(p3, ["t", "phi0", "y0", "p0", "theta0", "E0"],
              [grid, hs[:, 0], hs[:, 1], hs[:, 2],
               np.full(grid.size, dc.theta_star), e0])
    files.append(p3)

    etraj = expansion.solve_expansion(params, fm, cfg.rtol, cfg.atol,
                                      cfg.max_slow_step)
    es = integrate.sample(etraj, grid)
    p4 = out / "averaged.csv"
    write_csv(p4, ["t", "phi2_bar", "theta2_bar", "y2_bar", "p2_bar"],
              [grid, es[:, 3], es[:, 4], es[:, 5], es[:, 6]])
    files.append(p4)

    mpath = write_manifest(out, "simulate", cfg, files, time.perf_counter() - t0)
    for f in files + [mpath]:
        print(f"wrote {f}")
    return 0


def _order_fit_smallest(epsilons, errors, k: int = 3):
    eps = np.asarray(epsilons, float)[-k:]
    errs = np.asarray(errors, float)[-k:]
    return averaging.estimate_order(eps, errs)


def cmd_sweep(cfg: RunConfig, out: Path) -> int:
    """Convergence orders of the reconstruction across epsilons."""
    t0 = time.perf_counter()
    fm = cfg.frequency()
    params = cfg.params()
    rep = expansion.residual_norms(params, fm, cfg.epsilons, cfg.rtol, cfg.atol,
                                   cfg.max_slow_step, cfg.grid_points,
                                   cfg.reference_factor, workers=_workers())
    eps = np.array(rep.epsilons)
    rows_eps, rows_var, rows_sup, rows_norm = [], [], [], []
    for fam in ("leading", "first", "second"):
        for var, sups in sorted(rep.families[fam].items()):
            for i, e in enumerate(eps):
                rows_eps.append(e)
                rows_var.append(f"{var}_{fam}")
                rows_sup.append(sups[i])
                rows_norm.append(rep.normalized[fam][var][i])
    p1 = out / "residuals.csv"
    write_csv(p1, ["epsilon", "variable", "sup_norm", "normalized_norm"],
              [rows_eps, rows_var, rows_sup, rows_norm])

    gates = []
    order_rows = []
    tiny = 1e-12  # residual indistinguishable from integrator rounding noise
    can_fit = len(eps) >= 3
    if can_fit:
        for fam, var, floor in (("leading", "y", 1.9), ("leading", "p", 1.9),
                                ("leading", "phi", 1.9), ("first", "theta", 1.9)):
            sups = rep.families[fam][var]
            if np.max(sups) <= tiny:
                gates.append((f"order {var}_{fam} >= {floor}, R^2 >= 0.98", True,
                              f"residual at rounding level ({np.max(sups):.1e})"))
                continue
            order, r2 = _order_fit_smallest(eps, sups)
            order_rows.append((f"{var}_{fam}", order, r2))
            gates.append((f"order {var}_{fam} >= {floor}, R^2 >= 0.98",
                          order >= floor and r2 >= 0.98,
                          f"order={order:.3f} R^2={r2:.5f}"))
        for var in sorted(rep.families["second"]):
            sups = rep.families["second"][var]
            if np.max(sups) <= tiny:
                continue
            order, r2 = _order_fit_smallest(eps, sups)
            order_rows.append((f"{var}_second", order, r2))
    if len(eps) >= 2:
        for var in sorted(rep.normalized["second"]):
            vals = rep.normalized["second"][var]
            raw = np.max(rep.families["second"][var])
            if raw <= tiny:
                gates.append((f"normalized second-order residual of {var} strictly decreasing",
                              True, f"residual at rounding level ({raw:.1e})"))
                continue
            ok = bool(np.all(np.diff(vals) < 0))
            gates.append((f"normalized second-order residual of {var} strictly decreasing",
                          ok, " -> ".join(f"{v:.3e}" for v in vals)))
    drift_ok = bool(np.all(rep.energy_drift <= 1e-8))
    gates.append(("energy drift <= 1e-8 at every epsilon", drift_ok,
                  " ".join(f"{v:.2e}" for v in rep.energy_drift)))

    p2 = out / "orders.csv"
    write_csv(p2, ["variable", "order", "r_squared"],
              [[r[0] for r in order_rows], [r[1] for r in order_rows],
               [r[2] for r in order_rows]] if order_rows else [[], [], []])

    lines = []
    ok_all = True
    for name, ok, detail in gates:
        ok_all &= ok
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    if not can_fit:
        lines.append("[INFO] fewer than three epsilons: order gates skipped")
    p3 = out / "summary.txt"
    p3.write_text("\n".join(lines) + "\n")
    files = [p1, p2, p3]
    mpath = write_manifest(out, "sweep", cfg, files, time.perf_counter() - t0)
    for f in files + [mpath]:
        print(f"wrote {f}")
    print("\n".join(lines))
    return 0 if ok_all else 1


def thermo_tables(cfg: RunConfig, fm, params) -> dict:
    """All thermodynamic series and scalar diagnostics for one config."""
    dc = model.derived_constants(params, fm)
    grid = _grid(cfg)
    dt = grid[1] - grid[0]
    etraj = expansion.solve_expansion(params, fm, cfg.rtol, cfg.atol,
                                      cfg.max_slow_step)
    base, corr = expansion.eval_expansion(etraj, grid)
    eps_ref = min(cfg.epsilons)
    cv = expansion.correctors(base, corr.phi2_bar, eps_ref, fm, dc.theta_star)
    th = thermo.expand_thermo(base, corr, cv, dc.theta_star, fm)
    ex = thermo.energy_expansion(base, corr, cv, eps_ref, dc.theta_star, fm)
    bundle = thermo.averaged_energy_bundle(base, corr, fm, dc.theta_star, dc)

    lead = thermo.check_first_law(ex.E0_perp, base.y0, th.S0, th.F0, th.T0, dt)
    w1 = fm.domega(base.y0)
    w2 = fm.d2omega(base.y0)
    force2 = w1 * corr.theta2_bar + dc.theta_star * w2 * corr.y2_bar
    second = thermo.check_first_law(ex.E2_perp_bar, corr.y2_bar, th.S2_doublebar,
                                    th.F0, th.T0, dt,
                                    second_order_work=(force2, base.y0))
    literal = thermo.check_first_law(ex.E2_perp_bar, corr.y2_bar, th.S2_doublebar,
                                     th.F0, th.T0, dt)
    rhs = expansion.averaged_rhs(corr, base, fm, dc.theta_star)
    hamilton_y = float(np.max(np.abs(rhs.y2_bar - bundle.dE2_dp0)))
    hamilton_p = float(np.max(np.abs(rhs.p2_bar + bundle.dE2_dy0)))
    w0 = fm.omega(base.y0)
    dyL = w1 / w0
    identity = (corr.theta2_bar + (base.p0 / w0) * corr.p2_bar
                + dc.theta_star * dyL * corr.y2_bar
                + dc.theta_star**2 * dyL * dyL / (16.0 * w0)
                - dc.theta_star * (base.p0 * dyL) ** 2 / (4.0 * w0 * w0))
    return {
        "grid": grid, "dt": dt, "base": base, "corr": corr, "cv": cv,
        "thermo": th, "energy": ex, "bundle": bundle,
        "first_law_leading": lead, "first_law_second": second,
        "first_law_literal": literal,
        "quasi_static_gap": float(np.max(np.abs(literal.residuals))),
        "hamilton_y": hamilton_y, "hamilton_p": hamilton_p,
        "e2_bar_sup": float(np.max(np.abs(ex.E2_bar))),
        "action_identity_sup": float(np.max(np.abs(identity))),
        "closed_form_gap": float(np.max(np.abs(
            corr.theta2_bar - dc.theta_star * bundle.S2_doublebar_closed))),
        "theta_star": dc.theta_star, "constants": dc,
    }


def cmd_thermo(cfg: RunConfig, out: Path) -> int:
    """Thermodynamic series, balance residuals, and oscillator diagnostics."""
    t0 = time.perf_counter()
    fm = cfg.frequency()
    params = cfg.params()
    tab = thermo_tables(cfg, fm, params)
    grid = tab["grid"]
    th = tab["thermo"]
    ex = tab["energy"]
    p1 = out / "thermo.csv"
    write_csv(p1, ["t", "T0", "F0", "S0", "S2_doublebar", "E2_perp_bar",
                   "E2_par_bar", "first_law_residual"],
              [grid, th.T0, th.F0, th.S0, th.S2_doublebar, ex.E2_perp_bar,
               ex.E2_par_bar, tab["first_law_second"].residuals])

    gates = [
        ("leading-order energy balance <= 1e-8",
         tab["first_law_leading"].max_residual <= 1e-8,
         f"{tab['first_law_leading'].max_residual:.3e}"),
        ("second-order energy balance <= 1e-6",
         tab["first_law_second"].max_residual <= 1e-6,
         f"{tab['first_law_second'].max_residual:.3e}"),
        ("averaged second-order energy vanishes <= 1e-8",
         tab["e2_bar_sup"] <= 1e-8, f"{tab['e2_bar_sup']:.3e}"),
        ("averaged action identity <= 1e-8",
         tab["action_identity_sup"] <= 1e-8, f"{tab['action_identity_sup']:.3e}"),
        ("closed-form doubly averaged entropy matches trajectory <= 1e-8",
         tab["closed_form_gap"] <= 1e-8, f"{tab['closed_form_gap']:.3e}"),
        ("Hamilton-form residuals <= 1e-7",
         max(tab["hamilton_y"], tab["hamilton_p"]) <= 1e-7,
         f"{tab['hamilton_y']:.3e} {tab['hamilton_p']:.3e}"),
    ]

    dc = tab["constants"]
    t_check = thermo.hertz_temperature_oracle(0.5 * params.u_star**2, params.y_star, fm)
    gates.append(("period-average temperature equals oscillator energy <= 1e-10",
                  abs(t_check - 0.5 * params.u_star**2) <= 1e-10,
                  f"{abs(t_check - 0.5 * params.u_star**2):.3e}"))
    rng = np.random.default_rng(20260819)
    vol_worst = 0.0
    for _ in range(10):
        E = float(rng.uniform(0.05, 2.0))
        yv = float(rng.uniform(-3.0, 3.0))
        cl = thermo.phase_space_volume(E, yv, fm)
        qu = thermo.phase_space_volume(E, yv, fm, method="area-quadrature")
        vol_worst = max(vol_worst, abs(qu - cl) / cl)
    gates.append(("enclosed-area quadrature within 0.5% of closed form",
                  vol_worst <= 0.005, f"{vol_worst:.3e}"))

    lines = []
    equip = []
    for eps in cfg.epsilons:
        ref = _reference_run(cfg, fm, eps, "action-angle")
        rep = thermo.equipartition_check(ref, eps, fm, m=cfg.window_periods,
                                         grid_points=cfg.grid_points)
        equip.append(rep)
        xs = integrate.sample(ref, grid)
        t_gap = np.abs(xs[:, 1] * fm.omega(xs[:, 2]) - tab["thermo"].T0)
        theta_gap = np.abs(xs[:, 1] - dc.theta_star)
        lines.append(f"[INFO] eps={eps:g}: equipartition gap {rep.gap_max:.3e}, "
                     f"sup|dz/dt*z| {rep.xi_sup:.3e}, "
                     f"sup|T_eps-T0|/eps {np.max(t_gap)/eps:.3e}, "
                     f"sup|theta_eps-theta*|/eps {np.max(theta_gap)/eps:.3e}")
    if len(cfg.epsilons) >= 2:
        gaps = [r.gap_max for r in equip]
        gates.append(("windowed equipartition gap decreasing across epsilons",
                      bool(np.all(np.diff(gaps) < 0)),
                      " -> ".join(f"{g:.3e}" for g in gaps)))
    if len(cfg.epsilons) >= 3:
        xi_order, _ = averaging.estimate_order(cfg.epsilons,
                                               [r.xi_sup for r in equip])
        gates.append(("virial product sup-norm order >= 0.9", xi_order >= 0.9,
                      f"{xi_order:.3f}"))
    gates.append(("quasi-static gap reported (work of second-order force), not asserted",
                  True, f"{tab['quasi_static_gap']:.3e}"))
    lines.append("[INFO] entropy normalization: additive constant -log(theta_star) "
                 f"= {dc.entropy_constant!r} pins initial entropy to zero")

    ok_all = True
    for name, ok, detail in gates:
        ok_all &= ok
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    p2 = out / "thermo_summary.txt"
    p2.write_text("\n".join(lines) + "\n")
    files = [p1, p2]
    mpath = write_manifest(out, "thermo", cfg, files, time.perf_counter() - t0)
    for f in files + [mpath]:
        print(f"wrote {f}")
    print("\n".join(lines))
    return 0 if ok_all else 1


def two_scale_error_table(cfg: RunConfig, fm, params, refs: dict | None = None) -> dict:
    """Unfolding errors of the five rescaled remainders, per epsilon.

    refs may carry precomputed reference trajectories keyed by epsilon.
    Returns {epsilon: {variable: sup_error}}.
    """
    dc = model.derived_constants(params, fm)
    theta_star = dc.theta_star
    etraj = expansion.solve_expansion(params, fm, cfg.rtol, cfg.atol,
                                      cfg.max_slow_step)

    def limit_for(var):
        def lim(t, s):
            tt = np.asarray(t).ravel()
            ss = np.asarray(s).ravel()
            base, corr = expansion.eval_expansion(etraj, tt)
            b = homogenized.HomogenizedState(base.phi0[:, None], base.y0[:, None],
                                             base.p0[:, None], base.theta0[:, None])
            cv = expansion.two_scale_limits(b, corr.phi2_bar[:, None],
                                            ss[None, :], fm, theta_star)
            if var == "theta1":
                return cv.theta1
            if var == "phi2":
                return corr.phi2_bar[:, None] + cv.phi2
            if var == "y2":
                return corr.y2_bar[:, None] + cv.y2
            if var == "p2":
                return corr.p2_bar[:, None] + cv.p2
            return corr.theta2_bar[:, None] + cv.theta2
        return lim

    out = {}
    for eps in cfg.epsilons:
        ref = refs.get(eps) if refs else None
        if ref is None:
            ref = _reference_run(cfg, fm, eps, "action-angle")

        def u_for(var):
            def u(ts):
                xs = integrate.sample(ref, ts)
                base, corr = expansion.eval_expansion(etraj, ts)
                cv = expansion.correctors(base, corr.phi2_bar, eps, fm, theta_star)
                if var == "theta1":
                    return (xs[:, 1] - theta_star) / eps
                if var == "phi2":
                    return (xs[:, 0] - base.phi0) / eps**2
                if var == "y2":
                    return (xs[:, 2] - base.y0) / eps**2
                if var == "p2":
                    return (xs[:, 3] - base.p0) / eps**2
                return ((xs[:, 1] - theta_star) / eps - cv.theta1) / eps
            return u

        errs = {}
        for var in ("theta1", "phi2", "y2", "p2", "theta2"):
            e, _ = averaging.nonlinear_two_scale_error(u_for(var), limit_for(var),
                                                       etraj, eps)
            errs[var] = e
        out[eps] = errs
    return out


def cmd_twoscale(cfg: RunConfig, out: Path) -> int:
    """Unfolding errors of the rescaled remainders against their limits."""
    t0 = time.perf_counter()
    fm = cfg.frequency()
    params = cfg.params()
    table = two_scale_error_table(cfg, fm, params)
    eps_list = list(table)
    variables = ("theta1", "phi2", "y2", "p2", "theta2")
    rows_eps, rows_var, rows_err = [], [], []
    for eps in eps_list:
        for var in variables:
            rows_eps.append(eps)
            rows_var.append(var)
            rows_err.append(table[eps][var])
    p1 = out / "twoscale.csv"
    write_csv(p1, ["epsilon", "variable", "sup_error"],
              [rows_eps, rows_var, rows_err])
    lines = []
    ok_all = True
    if len(eps_list) >= 2:
        for var in variables:
            seq = [table[e][var] for e in eps_list]
            ok = bool(np.all(np.diff(seq) < 0))
            ok_all &= ok
            lines.append(f"[{'PASS' if ok else 'FAIL'}] unfolding error of {var} "
                         "strictly decreasing: "
                         + " -> ".join(f"{v:.3e}" for v in seq))
    else:
        lines.append("[INFO] single epsilon: table emitted, no trend gate")
    p2 = out / "summary.txt"
    p2.write_text("\n".join(lines) + "\n")
    files = [p1, p2]
    mpath = write_manifest(out, "twoscale", cfg, files, time.perf_counter() - t0)
    for f in files + [mpath]:
        print(f"wrote {f}")
    print("\n".join(lines))
    return 0 if ok_all else 1


def cmd_check(cfg: RunConfig, out: Path) -> int:
    """Analytic identity suite; debug.flip_theta1_sign must make it fail."""
    t0 = time.perf_counter()
    fm = cfg.frequency()
    params = cfg.params()
    dc = model.derived_constants(params, fm)
    grid = _grid(cfg)
    etraj = expansion.solve_expansion(params, fm, cfg.rtol, cfg.atol,
                                      cfg.max_slow_step)
    base, corr = expansion.eval_expansion(etraj, grid)

    checks = []

    worst_e1 = 0.0
    for eps in cfg.epsilons:
        cv = expansion.correctors(base, corr.phi2_bar, eps, fm, dc.theta_star)
        theta1 = -cv.theta1 if cfg.flip_theta1_sign else cv.theta1
        cv_used = expansion.CorrectorValues(theta1, cv.phi2, cv.y2, cv.p2, cv.theta2)
        ex = thermo.energy_expansion(base, corr, cv_used, eps, dc.theta_star, fm)
        worst_e1 = max(worst_e1, float(np.max(np.abs(ex.E1_perp_osc + ex.E1_par_osc))))
    checks.append(("first_order_energy_identity", worst_e1, 1e-13))

    w = fm.omega(base.y0)
    w1 = fm.domega(base.y0)
    dyL = w1 / w
    ident = (corr.theta2_bar + (base.p0 / w) * corr.p2_bar
             + dc.theta_star * dyL * corr.y2_bar
             + dc.theta_star**2 * dyL * dyL / (16.0 * w)
             - dc.theta_star * (base.p0 * dyL) ** 2 / (4.0 * w * w))
    checks.append(("averaged_action_constraint", float(np.max(np.abs(ident))), 1e-8))

    cv = expansion.correctors(base, corr.phi2_bar, min(cfg.epsilons), fm, dc.theta_star)
    ex = thermo.energy_expansion(base, corr, cv, min(cfg.epsilons), dc.theta_star, fm)
    checks.append(("averaged_energy_zero", float(np.max(np.abs(ex.E2_bar))), 1e-8))

    rng = np.random.default_rng(12345)
    worst_eq = 0.0
    for _ in range(1000):
        s = dynamics.ActionAngleState(phi=float(rng.uniform(-3, 3)),
                                      theta=float(rng.uniform(1e-3, 2.0)),
                                      y=float(rng.uniform(-5, 5)),
                                      p=float(rng.uniform(-2, 2)))
        e = float(10 ** rng.uniform(-3, -1))
        d1 = dynamics.action_angle_rhs(s, e, fm)
        d2 = dynamics.action_angle_rhs_composed(s, e, fm)
        worst_eq = max(worst_eq, abs(d1.phi - d2.phi), abs(d1.theta - d2.theta),
                       abs(d1.y - d2.y), abs(d1.p - d2.p))
    checks.append(("eom_form_equivalence", worst_eq, 1e-14))

    worst_rt = 0.0
    worst_en = 0.0
    for _ in range(1000):
        s = dynamics.ActionAngleState(phi=float(rng.uniform(-3, 3)),
                                      theta=float(rng.uniform(1e-6, 2.0)),
                                      y=float(rng.uniform(-5, 5)),
                                      p=float(rng.uniform(-2, 2)))
        e = float(10 ** rng.uniform(-3, -1))
        c = dynamics.from_action_angle(s, e, fm)
        s2 = dynamics.to_action_angle(c, e, fm)
        c2 = dynamics.from_action_angle(s2, e, fm)
        worst_rt = max(worst_rt, abs(c.y - c2.y), abs(c.eta - c2.eta),
                       abs(c.z - c2.z), abs(c.zeta - c2.zeta))
        ea = dynamics.energy_action_angle(s, e, fm)
        ec = dynamics.energy_cartesian(c, e, fm)
        worst_en = max(worst_en, abs(ea - ec) / max(1.0, abs(ea)))
    checks.append(("transform_round_trip", worst_rt, 1e-12))
    checks.append(("energy_agreement", worst_en, 1e-13))

    fd = model.finite_difference_report(fm)
    checks.append(("derivative_consistency", max(fd.values()), 1e-6))

    lines = []
    ok_all = True
    results = {}
    for name, value, tol in checks:
        ok = value <= tol
        ok_all &= ok
        results[name] = {"value": value, "tolerance": tol, "pass": bool(ok)}
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: value={value:.3e} "
                     f"tol={tol:.0e}")
    p1 = out / "check.txt"
    p1.write_text("\n".join(lines) + "\n")
    p2 = out / "check.json"
    p2.write_text(json.dumps(results, indent=2, sort_keys=True) + "\n")
    files = [p1, p2]
    mpath = write_manifest(out, "check", cfg, files, time.perf_counter() - t0)
    for f in files + [mpath]:
        print(f"wrote {f}")
    print("\n".join(lines))
    return 0 if ok_all else 1


_COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "thermo": cmd_thermo,
    "twoscale": cmd_twoscale,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fastslow",
        description="Numerical laboratory for a fast-slow Hamiltonian oscillator")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        sp = sub.add_parser(name, help=fn.__doc__)
        sp.add_argument("--config", metavar="PATH", default=None,
                        help="configuration file (flat key = value lines)")
        sp.add_argument("--out", metavar="DIR", default=None,
                        help="output directory (default: output.dir from config)")
        sp.add_argument("--epsilon", metavar="CSV", default=None,
                        help="override run.epsilons, comma-separated")
        sp.add_argument("--preset", metavar="NAME", default=None,
                        help="override frequency preset with its default coefficients")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.preset is not None:
            name = {"custom-coefficients": "fourier", "custom": "fourier"}.get(
                args.preset, args.preset)
            if name not in _PRESET_DEFAULT_COEFFS:
                raise ConfigError(f"unknown preset {args.preset!r}")
            cfg = replace(cfg, frequency_preset=name,
                          frequency_coefficients=_PRESET_DEFAULT_COEFFS[name])
        if args.epsilon is not None:
            try:
                eps = tuple(float(x) for x in args.epsilon.split(",") if x.strip())
            except ValueError as e:
                raise ConfigError(f"bad --epsilon list: {e}") from e
            if not eps:
                raise ConfigError("--epsilon list is empty")
            cfg = replace(cfg, epsilons=eps)
        if args.out is not None:
            cfg = replace(cfg, out_dir=args.out)
        validate_config(cfg)
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2

    try:
        return _COMMANDS[args.command](cfg, out)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
