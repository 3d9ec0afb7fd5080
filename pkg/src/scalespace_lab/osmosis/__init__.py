"""Linear osmosis filtering with canonical drift fields."""

from __future__ import annotations

from scalespace_lab.osmosis.drift import DriftField, canonical_drift
from scalespace_lab.osmosis.evolution import (
    OsmosisTrajectory,
    evolve,
    explicit_homogeneous_diffusion,
    implicit_step,
    solve_step,
    theoretical_steady_state,
)
from scalespace_lab.osmosis.guidance import (
    POSITIVITY_OFFSET,
    from_positive,
    noise_guidance,
    to_positive,
)
from scalespace_lab.osmosis.lyapunov import LyapunovAudit, audit_lyapunov, relative_entropy
from scalespace_lab.osmosis.operator import OsmosisOperator, assemble_operator

__all__ = [
    "POSITIVITY_OFFSET",
    "DriftField",
    "LyapunovAudit",
    "OsmosisOperator",
    "OsmosisTrajectory",
    "assemble_operator",
    "audit_lyapunov",
    "canonical_drift",
    "evolve",
    "explicit_homogeneous_diffusion",
    "from_positive",
    "implicit_step",
    "noise_guidance",
    "relative_entropy",
    "solve_step",
    "theoretical_steady_state",
    "to_positive",
]
