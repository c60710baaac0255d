"""Gaussian-process bandit optimization with entropy-gated posterior compression.

A GP bandit engine that admits an observation into the posterior only when its
conditional entropy exceeds a budget, keeping the model order bounded while
preserving regret. Ships UCB/EI/MPI acquisition, dense and stochastic-inclusion
baselines, and a benchmark harness with paired-seed regret / model-order /
wall-clock reporting.
"""

from gpsieve.acquisition import (
    AcquisitionKind,
    BetaKind,
    BetaSchedule,
    beta,
    ei_score,
    mpi_score,
    select_action,
    tau,
    ucb_score,
)
from gpsieve.backend import BACKEND
from gpsieve.bandit import (
    BanditConfig,
    Policy,
    RegretSummary,
    RunRecord,
    regret_summary,
    run,
    run_bkb,
    run_dense,
)
from gpsieve.errors import ConfigError, GpSieveError, InputError, NumericalError
from gpsieve.harness import (
    AggregateReport,
    ExperimentSpec,
    PolicyEntry,
    clock_time_table,
    emit_plot_data,
    parse_config,
    run_experiment,
)
from gpsieve.kernels import KernelFamily, KernelSpec, kernel_eval, kernel_matrix, kernel_vector
from gpsieve.objectives import (
    CandidateDescriptor,
    CandidateSet,
    Objective,
    ObjectiveKind,
    Provenance,
    build_candidates,
    example1d_objective,
    example_function,
    load_tabulated,
    negated_rosenbrock_objective,
    observe,
    rosenbrock,
    save_tabulated,
)
from gpsieve.posterior import (
    ADMIT_ALWAYS,
    AdmissionDecision,
    GpPosterior,
    entropy_of_variance,
    variance_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "ADMIT_ALWAYS",
    "AcquisitionKind",
    "AdmissionDecision",
    "AggregateReport",
    "BACKEND",
    "BanditConfig",
    "BetaKind",
    "BetaSchedule",
    "CandidateDescriptor",
    "CandidateSet",
    "ConfigError",
    "ExperimentSpec",
    "GpPosterior",
    "GpSieveError",
    "InputError",
    "KernelFamily",
    "KernelSpec",
    "NumericalError",
    "Objective",
    "ObjectiveKind",
    "Policy",
    "PolicyEntry",
    "Provenance",
    "RegretSummary",
    "RunRecord",
    "beta",
    "build_candidates",
    "clock_time_table",
    "ei_score",
    "emit_plot_data",
    "entropy_of_variance",
    "example1d_objective",
    "example_function",
    "kernel_eval",
    "kernel_matrix",
    "kernel_vector",
    "load_tabulated",
    "mpi_score",
    "negated_rosenbrock_objective",
    "observe",
    "parse_config",
    "regret_summary",
    "rosenbrock",
    "run",
    "run_bkb",
    "run_dense",
    "run_experiment",
    "save_tabulated",
    "select_action",
    "tau",
    "ucb_score",
    "variance_threshold",
]
