"""Forward probabilistic diffusion as a scale-space."""

from __future__ import annotations

from scalespace_lab.probdiff.diagnostics import (
    JumpEquivalence,
    SteadyStateReport,
    jump_equivalence,
    ks_critical_value,
    steady_state_diagnostics,
)
from scalespace_lab.probdiff.entropy import (
    Admissibility,
    MarginalEntropySequence,
    Trend,
    admissible_interval,
    conditional_entropy,
    conditional_entropy_deficit,
    decomposed_entropy_step,
    entropy_increment,
    knn_entropy_estimate,
    marginal_entropy_sequence,
    sequence_trend,
    validate_schedule,
)
from scalespace_lab.probdiff.forward import (
    TrajectoryRecord,
    forward_step,
    jump_to_step,
    run_ensemble,
    run_trajectory,
)
from scalespace_lab.probdiff.gaussian import (
    CovarianceKind,
    GaussianStats,
    differential_entropy_gaussian,
    gaussian_marginal,
)
from scalespace_lab.probdiff.schedule import NoiseSchedule

__all__ = [
    "Admissibility",
    "CovarianceKind",
    "GaussianStats",
    "JumpEquivalence",
    "MarginalEntropySequence",
    "NoiseSchedule",
    "SteadyStateReport",
    "TrajectoryRecord",
    "Trend",
    "admissible_interval",
    "conditional_entropy",
    "conditional_entropy_deficit",
    "decomposed_entropy_step",
    "differential_entropy_gaussian",
    "entropy_increment",
    "forward_step",
    "gaussian_marginal",
    "jump_equivalence",
    "jump_to_step",
    "knn_entropy_estimate",
    "ks_critical_value",
    "marginal_entropy_sequence",
    "run_ensemble",
    "run_trajectory",
    "sequence_trend",
    "steady_state_diagnostics",
    "validate_schedule",
]
