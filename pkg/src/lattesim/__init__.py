"""Simulator for an iterated measurement-induced nonlinear qubit map."""

from .states import (
    BlochVector,
    DensityMatrix2,
    ExtendedComplex,
    INFINITY,
    as_point,
    bloch_from_density,
    bloch_from_z,
    chordal_distance,
    density_from_bloch,
    z_from_bloch,
)
from .riemann import (
    PureCycle,
    find_pure_cycles,
    inverse_lattes_branches,
    lattes_derivative,
    lattes_map,
    lattes_orbit,
    squaring_map,
)
from .bloch import (
    MixedCycle,
    bloch_map,
    bloch_map_jacobian,
    find_mixed_cycles,
    inverse_minus,
    inverse_plus,
    squaring_step,
    success_probability,
)
from .oracle import CNOT, LATTES_UNITARY, deviation_sweep, oracle_step_mixed, oracle_step_pure
from .experiments import (
    BackwardExperimentConfig,
    ConvergenceHistogram,
    ForwardExperimentConfig,
    histogram_to_table,
    median_iterations,
    run_backward,
    run_forward,
    sample_ball_uniform,
    substream,
    write_histogram_csv,
    write_histogram_json,
)

__all__ = [
    "BlochVector",
    "DensityMatrix2",
    "ExtendedComplex",
    "INFINITY",
    "as_point",
    "bloch_from_density",
    "bloch_from_z",
    "chordal_distance",
    "density_from_bloch",
    "z_from_bloch",
    "PureCycle",
    "find_pure_cycles",
    "inverse_lattes_branches",
    "lattes_derivative",
    "lattes_map",
    "lattes_orbit",
    "squaring_map",
    "MixedCycle",
    "bloch_map",
    "bloch_map_jacobian",
    "find_mixed_cycles",
    "inverse_minus",
    "inverse_plus",
    "squaring_step",
    "success_probability",
    "CNOT",
    "LATTES_UNITARY",
    "deviation_sweep",
    "oracle_step_mixed",
    "oracle_step_pure",
    "BackwardExperimentConfig",
    "ConvergenceHistogram",
    "ForwardExperimentConfig",
    "histogram_to_table",
    "median_iterations",
    "run_backward",
    "run_forward",
    "sample_ball_uniform",
    "substream",
    "write_histogram_csv",
    "write_histogram_json",
]

__version__ = "0.1.0"
