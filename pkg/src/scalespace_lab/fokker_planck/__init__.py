"""One-dimensional forward and backward drift-diffusion equations."""

from __future__ import annotations

from scalespace_lab.fokker_planck.compare import (
    ChainComparison,
    TimeComparison,
    chain_vs_pde_compare,
)
from scalespace_lab.fokker_planck.grid import (
    DensityGrid,
    GridSpec,
    boundary_mass,
    gaussian_density,
    histogram_density,
)
from scalespace_lab.fokker_planck.moments import (
    MomentFields,
    constant_rate,
    moments_from_schedule,
    schedule_moments,
    schedule_rate,
)
from scalespace_lab.fokker_planck.residuals import (
    GaussianKernel,
    ResidualNorms,
    fp_backward_residual,
    fp_forward_residual,
    observed_order,
)
from scalespace_lab.fokker_planck.solver import assemble_banded, fp_forward_solve

__all__ = [
    "ChainComparison",
    "DensityGrid",
    "GaussianKernel",
    "GridSpec",
    "MomentFields",
    "ResidualNorms",
    "TimeComparison",
    "assemble_banded",
    "boundary_mass",
    "chain_vs_pde_compare",
    "constant_rate",
    "fp_backward_residual",
    "fp_forward_residual",
    "fp_forward_solve",
    "gaussian_density",
    "histogram_density",
    "moments_from_schedule",
    "observed_order",
    "schedule_moments",
    "schedule_rate",
]
