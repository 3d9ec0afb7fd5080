"""Monte-Carlo bridge between the scalar Markov chain and its forward equation."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.stats import skew

from scalespace_lab.core.errors import DomainError
from scalespace_lab.core.limits import (
    DEFAULT_FP_DT,
    DEFAULT_FP_GRID,
    DEFAULT_FP_TIMES,
    DEFAULT_SEED,
    MIN_CHAIN_SAMPLES,
)
from scalespace_lab.core.rng import RngStream
from scalespace_lab.core.types import FloatArray
from scalespace_lab.fokker_planck.grid import (
    DensityGrid,
    GridSpec,
    boundary_mass,
    gaussian_density,
    histogram_density,
)
from scalespace_lab.fokker_planck.moments import constant_rate, schedule_moments
from scalespace_lab.fokker_planck.solver import fp_forward_solve
from scalespace_lab.probdiff.schedule import NoiseSchedule

LOG = logging.getLogger(__name__)

# Width of the narrow Gaussian standing in for the initial spike, in cells.
SPIKE_WIDTH_CELLS = 2.0


@dataclass(frozen=True, slots=True)
class TimeComparison:
    """Chain histogram against the PDE density at one step.

    Attributes:
        step: Chain step, equal to the PDE time
        l1_distance: ``h * sum |histogram - density|``
        sample_mean: Mean of the chain samples
        sample_variance: Variance of the chain samples
        sample_skewness: Skewness of the chain samples
        skewness_stderr: Standard error ``sqrt(6 / N)`` of the skewness
        outside_count: Chain samples outside the grid
        boundary_mass: PDE mass near the domain ends
    """

    step: int
    l1_distance: float
    sample_mean: float
    sample_variance: float
    sample_skewness: float
    skewness_stderr: float
    outside_count: int
    boundary_mass: float


@dataclass(frozen=True, slots=True)
class ChainComparison:
    """Outcome of ``chain_vs_pde_compare``.

    Attributes:
        u0: Common start value
        beta: Constant step variance
        samples: Number of chains
        grid: Grid used for histograms and the PDE
        times: One comparison per requested step
    """

    u0: float
    beta: float
    samples: int
    grid: GridSpec
    times: tuple[TimeComparison, ...]

    @property
    def max_l1(self) -> float:
        """Return the largest L1 distance over all steps."""
        return max(entry.l1_distance for entry in self.times)


def chain_vs_pde_compare(
    u0: float,
    schedule: NoiseSchedule,
    n_samples: int,
    grid: GridSpec | None = None,
    times: Sequence[int] = DEFAULT_FP_TIMES,
    *,
    rng: RngStream | None = None,
    dt: float = DEFAULT_FP_DT,
    theta: float = 1.0,
) -> ChainComparison:
    """Compare histograms of ``n_samples`` scalar chains with the PDE solution.

    The PDE starts from a normal density of standard deviation
    ``SPIKE_WIDTH_CELLS * h`` centred at ``u0`` and is advanced between the
    requested steps with unit time per chain step.

    Raises:
        DomainError: If the schedule is not constant, has too few steps for
            ``times``, or fewer than ``MIN_CHAIN_SAMPLES`` chains are asked for
    """
    if len(schedule) == 0 or not schedule.is_constant:
        raise DomainError("Chain/PDE comparison needs a constant, non-empty schedule")
    if n_samples < MIN_CHAIN_SAMPLES:
        raise DomainError(f"Need at least {MIN_CHAIN_SAMPLES} chains, got {n_samples}")
    steps = sorted(set(times))
    if not steps or steps[0] < 0 or steps[-1] > len(schedule):
        raise DomainError(f"Comparison steps must lie in 0..{len(schedule)}")
    spec = grid if grid is not None else GridSpec(*DEFAULT_FP_GRID)
    stream = rng if rng is not None else RngStream(DEFAULT_SEED)
    beta = schedule.beta(1)
    mom = schedule_moments(constant_rate(beta), constant=True)

    chains = np.full(n_samples, float(u0))
    density = gaussian_density(spec, u0, SPIKE_WIDTH_CELLS * spec.h)
    previous = 0
    results: list[TimeComparison] = []
    scale, spread = math.sqrt(1.0 - beta), math.sqrt(beta)
    for step in steps:
        for _ in range(previous, step):
            chains = scale * chains + spread * stream.normal(n_samples)
        density = fp_forward_solve(density, mom, float(step - previous), dt, theta)
        previous = step
        results.append(_compare_at(step, chains, density))
        LOG.info("Step %d: L1 = %.5f", step, results[-1].l1_distance)
    return ChainComparison(
        u0=float(u0),
        beta=beta,
        samples=n_samples,
        grid=spec,
        times=tuple(results),
    )


def _compare_at(step: int, chains: FloatArray, density: DensityGrid) -> TimeComparison:
    histogram = histogram_density(chains, density.spec)
    spread = float(np.std(chains))
    return TimeComparison(
        step=step,
        l1_distance=histogram.l1_distance(density),
        sample_mean=float(np.mean(chains)),
        sample_variance=spread * spread,
        sample_skewness=float(skew(chains)) if spread > 0.0 else 0.0,
        skewness_stderr=math.sqrt(6.0 / chains.size),
        outside_count=histogram.outside_count,
        boundary_mass=boundary_mass(density),
    )
