"""Numerical laboratory for a two-degree-of-freedom fast-slow oscillator.

A slow coordinate y is coupled to a harmonic oscillator whose frequency
omega(y)/epsilon is large.  The package simulates the coupled system at
finite epsilon, builds its second-order asymptotic reconstruction from the
homogenized limit plus oscillatory correctors and averaged corrections, and
verifies the thermodynamic reading of the oscillator (temperature, entropy,
force, energy balances) to the stated orders.

Modules
-------
model        frequency profiles, initial data, derived constants
phase        accurate reduction of the fast phase modulo its period
dynamics     equations of motion in both coordinate systems
integrate    fixed-step and adaptive integrators, dense output
homogenized  the leading-order averaged system
expansion    correctors, averaged second-order system, reconstruction
averaging    two-scale unfolding, windowed averages, order estimation
thermo       temperature, entropy, force, energy balances
lab          run configuration, file outputs, command line
"""

from .averaging import (
    TwoScaleGrid,
    TwoScaleInterpolant,
    WindowedAverage,
    estimate_order,
    floor_frac,
    interpolate_two_scale,
    nonlinear_two_scale_error,
    two_scale_compose,
    windowed_average,
)
from .dynamics import (
    ActionAngleState,
    CartesianState,
    action_angle_field,
    action_angle_rhs,
    action_angle_rhs_composed,
    cartesian_field,
    cartesian_rhs,
    energy_action_angle,
    energy_action_angle_arrays,
    energy_cartesian,
    from_action_angle,
    oscillator_energy_gap_arrays,
    split_energy,
    split_energy_cartesian,
    to_action_angle,
    to_action_angle_arrays,
)
from .expansion import (
    AveragedCorrection,
    CorrectorValues,
    ResidualReport,
    averaged_rhs,
    correctors,
    eval_expansion,
    initial_corrections,
    reconstruct,
    residual_norms,
    solve_expansion,
    two_scale_limits,
)
from .homogenized import (
    HomogenizedState,
    eval_homogenized,
    homogenized_rhs,
    invert_phase,
    solve_homogenized,
)
from .integrate import (
    NumericalError,
    Trajectory,
    dense_eval,
    integrate_controlled,
    integrate_fixed,
    invert_monotone,
    reference_solution,
    sample,
)
from .lab import ConfigError, RunConfig, load_config, main, parse_config_text
from .model import (
    DerivedConstants,
    FrequencyModel,
    LogDerivatives,
    SystemParams,
    derived_constants,
    finite_difference_report,
    log_derivatives,
    make_frequency,
)
from .phase import reduce_phase, reduced_sincos, reduced_sincos_array
from .thermo import (
    AveragedEnergyBundle,
    EnergyExpansion,
    EquipartitionReport,
    FirstLawReport,
    ThermoExpansion,
    ThermoState,
    averaged_energy_bundle,
    check_first_law,
    energy_expansion,
    equipartition_check,
    expand_thermo,
    fd4_derivative,
    hertz_temperature_oracle,
    phase_space_volume,
    thermo_state,
)

__version__ = "0.1.0"

__all__ = [
    "ActionAngleState", "AveragedCorrection", "AveragedEnergyBundle",
    "CartesianState", "ConfigError", "CorrectorValues", "DerivedConstants",
    "EnergyExpansion", "EquipartitionReport", "FirstLawReport",
    "FrequencyModel", "HomogenizedState", "LogDerivatives", "NumericalError",
    "ResidualReport", "RunConfig", "SystemParams", "ThermoExpansion",
    "ThermoState", "Trajectory", "TwoScaleGrid", "TwoScaleInterpolant",
    "WindowedAverage", "action_angle_field", "action_angle_rhs",
    "action_angle_rhs_composed", "averaged_energy_bundle", "averaged_rhs",
    "cartesian_field", "cartesian_rhs", "check_first_law", "correctors",
    "dense_eval", "derived_constants", "energy_action_angle",
    "energy_action_angle_arrays", "energy_cartesian", "energy_expansion",
    "equipartition_check", "oscillator_energy_gap_arrays",
    "estimate_order", "eval_expansion", "eval_homogenized", "expand_thermo",
    "fd4_derivative", "finite_difference_report", "floor_frac",
    "from_action_angle", "hertz_temperature_oracle", "homogenized_rhs",
    "initial_corrections", "integrate_controlled", "integrate_fixed",
    "interpolate_two_scale", "invert_monotone", "invert_phase",
    "load_config", "log_derivatives", "main", "make_frequency",
    "nonlinear_two_scale_error", "parse_config_text", "phase_space_volume",
    "reconstruct", "reduce_phase", "reduced_sincos", "reduced_sincos_array",
    "reference_solution", "residual_norms", "sample", "solve_expansion",
    "solve_homogenized", "split_energy", "split_energy_cartesian",
    "thermo_state", "to_action_angle", "to_action_angle_arrays",
    "two_scale_compose", "two_scale_limits", "windowed_average",
]
