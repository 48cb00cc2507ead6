"""PINN training and verification for the 1D focusing NLS on the real line."""

from .config import RunConfig, default_config, parse_config_file
from .harness import (
    ErrorMetrics,
    MonitorValues,
    RunReport,
    error_metrics,
    monitor_constants,
    oracle_comparison,
    q_error_curve,
    sweep,
    train,
)
from .jets import Jet, Jet2, loss_gradient, modulus_power, seed_input
from .lbfgs import LbfgsOptions, LbfgsState, run as lbfgs_run, step as lbfgs_step
from .network import Architecture, NetworkParams, forward, forward_values, init_glorot
from .norms import (
    AdmissiblePair,
    SpaceTimeGrid,
    admissible_q_grid,
    j_h1,
    j_inf_h1,
    j_pq,
    pair_from_alpha,
    pair_from_q,
)
from .propagator import SpectralField, analyze, evolve_at, propagated_mismatch_table
from .residual import LossEvaluator, ResidualSample, nls_residual, residual_from_jet
from .solutions import (
    ReferenceSolution,
    kuznetsov_ma,
    make_kuznetsov_ma,
    make_peregrine,
    make_soliton,
    make_standing_wave,
    peregrine,
    soliton,
    standing_wave,
)
from .splitstep import SplitStepConfig, splitstep_evolve, splitstep_table

__all__ = [
    "AdmissiblePair",
    "Architecture",
    "ErrorMetrics",
    "Jet",
    "Jet2",
    "LbfgsOptions",
    "LbfgsState",
    "LossEvaluator",
    "MonitorValues",
    "NetworkParams",
    "ReferenceSolution",
    "ResidualSample",
    "RunConfig",
    "RunReport",
    "SpaceTimeGrid",
    "SpectralField",
    "SplitStepConfig",
    "admissible_q_grid",
    "analyze",
    "default_config",
    "error_metrics",
    "evolve_at",
    "forward",
    "forward_values",
    "init_glorot",
    "j_h1",
    "j_inf_h1",
    "j_pq",
    "kuznetsov_ma",
    "lbfgs_run",
    "lbfgs_step",
    "loss_gradient",
    "make_kuznetsov_ma",
    "make_peregrine",
    "make_soliton",
    "make_standing_wave",
    "modulus_power",
    "monitor_constants",
    "nls_residual",
    "oracle_comparison",
    "pair_from_alpha",
    "pair_from_q",
    "parse_config_file",
    "peregrine",
    "propagated_mismatch_table",
    "q_error_curve",
    "residual_from_jet",
    "seed_input",
    "soliton",
    "splitstep_evolve",
    "splitstep_table",
    "standing_wave",
    "sweep",
    "train",
]
