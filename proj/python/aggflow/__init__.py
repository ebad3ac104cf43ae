"""Diffuse-interface incompressible two-phase flow on a staggered grid."""

from ._core import (
    AbortedAfterRetries,
    CompareMatchedResult,
    Config,
    ConvergenceLevel,
    ConvergenceResult,
    EnergyCsvRow,
    EnergyReport,
    IoError,
    LinearSolveFailed,
    NewtonDiverged,
    OuterNoConvergence,
    ParseError,
    PropertyResult,
    RunArtifacts,
    RunResult,
    RunSummary,
    SimState,
    StepNotAdmissible,
    ValidationError,
    __version__,
    compare_matched,
    config_from_text,
    convergence_study,
    echo_config,
    load_config,
    read_energy_csv,
    read_snapshot,
    run_simulation,
    verify_suite,
)

__all__ = [
    "AbortedAfterRetries",
    "CompareMatchedResult",
    "Config",
    "ConvergenceLevel",
    "ConvergenceResult",
    "EnergyCsvRow",
    "EnergyReport",
    "IoError",
    "LinearSolveFailed",
    "NewtonDiverged",
    "OuterNoConvergence",
    "ParseError",
    "PropertyResult",
    "RunArtifacts",
    "RunResult",
    "RunSummary",
    "SimState",
    "StepNotAdmissible",
    "ValidationError",
    "__version__",
    "compare_matched",
    "config_from_text",
    "convergence_study",
    "echo_config",
    "load_config",
    "read_energy_csv",
    "read_snapshot",
    "run_simulation",
    "verify_suite",
]
