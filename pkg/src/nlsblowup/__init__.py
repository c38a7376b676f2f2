"""Blow-up times of focusing nonlinear Schroedinger equations.

Split-step spectral and relaxation integrators on periodic grids, blow-up
detection from energy growth, conformal-law predictions and a sweep harness
for studying how the blow-up time depends on the coupling, the chirp of the
data and the damping.
"""

from .diagnostics import BlowupVerdict, DiagRecord, detect_blowup, measure
from .grid import Grid, make_grid
from .harness import ConfigError, GridSpec, RefineSpec, RunConfig, compare_schemes, run_single, run_sweep
from .initial_data import ProfileSpec, build_initial
from .model import ModelParams, conformal, constant, damped
from .relaxation import RelaxationSolver
from .theory import monotonicity_report, predict_conformal
from .tssp import SplitStepSolver

__all__ = [
    "BlowupVerdict", "ConfigError", "DiagRecord", "Grid", "GridSpec", "ModelParams", "ProfileSpec",
    "RefineSpec", "RelaxationSolver", "RunConfig", "SplitStepSolver", "build_initial",
    "compare_schemes", "conformal", "constant", "damped", "detect_blowup", "make_grid", "measure",
    "monotonicity_report", "predict_conformal", "run_single", "run_sweep",
]
