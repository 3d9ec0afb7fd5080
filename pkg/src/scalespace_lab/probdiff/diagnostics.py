"""Monte-Carlo checks of the steady state and of the direct jump."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.stats import ks_2samp

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.rng import RngStream
from scalespace_lab.core.types import FloatArray, ImageBuffer
from scalespace_lab.probdiff.forward import run_ensemble
from scalespace_lab.probdiff.schedule import NoiseSchedule

LOG = logging.getLogger(__name__)

# Off-diagonal correlations are averaged over the first pixels only.
MAX_CORRELATION_PIXELS = 512
KS_SIGNIFICANCE = 0.01


@dataclass(frozen=True, slots=True, eq=False)
class SteadyStateReport:
    """Sample moments of end states compared with N(0, I).

    Attributes:
        sample_count: Number of samples
        mean: Per-element sample mean
        variance: Per-element unbiased sample variance, None for one sample
        mean_abs_correlation: Mean absolute off-diagonal correlation, None if undefined
        max_abs_mean: Largest ``|mean|``
        max_variance_deviation: Largest ``|variance - 1|``, None for one sample
    """

    sample_count: int
    mean: FloatArray
    variance: FloatArray | None
    mean_abs_correlation: float | None
    max_abs_mean: float
    max_variance_deviation: float | None

    @property
    def variance_defined(self) -> bool:
        """Return whether enough samples were given to estimate variances."""
        return self.variance is not None

    def within(self, mean_tol: float, variance_tol: float, correlation_tol: float) -> bool:
        """Return whether all deviations from ``(0, 1, 0)`` are inside the tolerances."""
        if self.max_variance_deviation is None or self.mean_abs_correlation is None:
            return False
        return (
            self.max_abs_mean < mean_tol
            and self.max_variance_deviation < variance_tol
            and self.mean_abs_correlation < correlation_tol
        )


def steady_state_diagnostics(samples: Sequence[ImageBuffer]) -> SteadyStateReport:
    """Summarise how far samples are from i.i.d. standard normal values.

    With a single sample, the variance and correlation fields are None.

    Raises:
        DomainError: If no samples are given
        ShapeMismatchError: If samples differ in shape
    """
    if not samples:
        raise DomainError("Steady-state diagnostics need at least one sample")
    first = samples[0]
    if any(not first.same_shape(sample) for sample in samples):
        raise ShapeMismatchError("All samples must have the same shape")
    values = np.stack([sample.flat for sample in samples])
    count = values.shape[0]
    mean = values.mean(axis=0)
    if count < 2:
        LOG.warning("Only one sample: variance and correlation are undefined")
        return SteadyStateReport(
            sample_count=count,
            mean=mean,
            variance=None,
            mean_abs_correlation=None,
            max_abs_mean=float(np.abs(mean).max()),
            max_variance_deviation=None,
        )
    variance = values.var(axis=0, ddof=1)
    return SteadyStateReport(
        sample_count=count,
        mean=mean,
        variance=variance,
        mean_abs_correlation=_mean_abs_correlation(values[:, :MAX_CORRELATION_PIXELS]),
        max_abs_mean=float(np.abs(mean).max()),
        max_variance_deviation=float(np.abs(variance - 1.0).max()),
    )


def _mean_abs_correlation(values: FloatArray) -> float | None:
    width = values.shape[1]
    if width < 2:
        return 0.0
    centered = values - values.mean(axis=0)
    norms = np.sqrt(np.sum(centered * centered, axis=0))
    if np.any(norms == 0.0):
        return None
    standardized = centered / norms
    correlation = standardized.T @ standardized
    off_diagonal = correlation[~np.eye(width, dtype=bool)]
    return float(np.abs(off_diagonal).mean())


@dataclass(frozen=True, slots=True)
class JumpEquivalence:
    """Two-sample Kolmogorov-Smirnov comparison of jump and composed samples.

    Attributes:
        statistic: KS distance between the standardised samples
        pvalue: KS p-value
        critical_value: Distance rejected at ``KS_SIGNIFICANCE``
        jump_count: Number of pooled jump values
        composed_count: Number of pooled composed-step values
    """

    statistic: float
    pvalue: float
    critical_value: float
    jump_count: int
    composed_count: int

    @property
    def passed(self) -> bool:
        """Return whether the distance stays below the critical value."""
        return self.statistic < self.critical_value


def ks_critical_value(n: int, m: int, significance: float = KS_SIGNIFICANCE) -> float:
    """Return the asymptotic two-sample KS critical distance."""
    return math.sqrt(-0.5 * math.log(significance / 2.0)) * math.sqrt((n + m) / (n * m))


def jump_equivalence(
    u0: ImageBuffer,
    schedule: NoiseSchedule,
    i: int,
    count: int,
    rng: RngStream,
) -> JumpEquivalence:
    """Compare ``jump_to_step`` samples with ``i`` composed forward steps.

    Both sample sets are standardised with the closed-form mean
    ``sqrt(alpha_i) u0`` and standard deviation ``sqrt(1 - alpha_i)`` and
    pooled over all elements before the test. The two sets use independent
    child streams of ``rng``.

    Raises:
        DomainError: If ``i < 1`` or ``count < 1``
    """
    if i < 1:
        raise DomainError("Jump equivalence needs at least one step")
    jump_rng, chain_rng = rng.spawn(2)
    alpha = schedule.signal_variance(i)
    spread = math.sqrt(schedule.noise_variance(i))
    center = math.sqrt(alpha) * u0.flat
    composed = np.stack([state.flat for state in run_ensemble(u0, schedule, i, count, chain_rng)])
    jump_noise = jump_rng.normal(count * u0.size).reshape(count, u0.size)
    jump = center + spread * jump_noise
    jump_z = ((jump - center) / spread).ravel()
    composed_z = ((composed - center) / spread).ravel()
    result = ks_2samp(jump_z, composed_z)
    equivalence = JumpEquivalence(
        statistic=float(result.statistic),
        pvalue=float(result.pvalue),
        critical_value=ks_critical_value(jump_z.size, composed_z.size),
        jump_count=int(jump_z.size),
        composed_count=int(composed_z.size),
    )
    LOG.info(
        "Jump vs composed at step %d: KS=%.5f (critical %.5f)",
        i,
        equivalence.statistic,
        equivalence.critical_value,
    )
    return equivalence
