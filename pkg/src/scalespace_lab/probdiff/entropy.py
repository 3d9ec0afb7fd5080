"""Entropy Lyapunov sequences of the forward process.

All entropies are differential entropies in nats.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt
from scipy.spatial import cKDTree
from scipy.special import digamma

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.limits import DEFAULT_KNN_NEIGHBORS, KNN_JITTER, MAX_KNN_DIMENSION
from scalespace_lab.core.rng import RngStream
from scalespace_lab.probdiff.gaussian import (
    LOG_2PIE,
    CovarianceKind,
    GaussianStats,
    differential_entropy_gaussian,
    gaussian_marginal,
)

if TYPE_CHECKING:
    from scalespace_lab.core.types import FloatArray
    from scalespace_lab.probdiff.schedule import NoiseSchedule

LOG = logging.getLogger(__name__)

# Stream used for the duplicate-breaking jitter, fixed so estimates replay.
KNN_JITTER_SEED = 0


def _check_dimension(n: int) -> None:
    if n < 1:
        raise DomainError("Dimension n must be at least 1")


def admissible_interval(n: int) -> tuple[float, float]:
    """Return the beta range on which the entropy increment is non-negative.

    The bounds are the roots of ``beta^2 - beta + (2 pi e)^(-n) = 0``. The
    lower root is evaluated as ``eps / (1/2 + sqrt(1/4 - eps))`` to avoid
    cancellation; for large n it underflows to 0 and the interval becomes
    ``[0, 1]``.
    """
    _check_dimension(n)
    eps = math.exp(-n * LOG_2PIE)
    root = math.sqrt(0.25 - eps)
    lower = eps / (0.5 + root)
    return lower, 0.5 + root


@dataclass(frozen=True, slots=True)
class Admissibility:
    """Admissibility of one schedule step.

    Attributes:
        step: 1-based step index
        beta: Step variance
        admissible: Whether beta lies inside the admissible interval
        margin: Signed distance to the nearest bound, positive inside
    """

    step: int
    beta: float
    admissible: bool
    margin: float


def validate_schedule(schedule: NoiseSchedule, n: int) -> tuple[Admissibility, ...]:
    """Check every step of ``schedule`` against the admissible interval for n pixels."""
    lower, upper = admissible_interval(n)
    margins = np.minimum(schedule.betas - lower, upper - schedule.betas)
    report = tuple(
        Admissibility(step=i, beta=beta, admissible=margin >= 0.0, margin=margin)
        for i, (beta, margin) in enumerate(
            zip(schedule.betas.tolist(), margins.tolist(), strict=True), start=1
        )
    )
    rejected = sum(not entry.admissible for entry in report)
    if rejected:
        LOG.warning(
            "%d of %d betas lie outside the admissible interval [%.6g, %.6g] for n=%d",
            rejected,
            len(report),
            lower,
            upper,
            n,
        )
    return report


def entropy_increment(beta: float, n: int) -> float:
    """Return ``H(G) + ln sqrt((1 - beta) beta)`` with ``H(G) = (n/2) ln(2 pi e)``.

    This is zero at the admissible-interval bounds and negative outside.
    """
    _check_dimension(n)
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie strictly inside (0, 1), got {beta}")
    return 0.5 * (n * LOG_2PIE + math.log(beta) + math.log1p(-beta))


def conditional_entropy(schedule: NoiseSchedule, i: int, n: int) -> float:
    """Return ``H(U_i | U_0) = (n/2) ln(2 pi e (1 - alpha_i))``.

    Step 0 has a degenerate kernel; its conditional entropy is reported as
    ``-inf``.

    The exact sequence is strictly increasing in i. In float64 it is only
    non-decreasing: once ``alpha_i`` falls below about ``1e-13`` successive
    values can round to the same number, and below about ``1e-16`` the value
    is exactly ``(n/2) ln(2 pi e)``. ``conditional_entropy_deficit`` keeps
    the strict decrease resolvable for as long as ``alpha_i`` is a normal
    float.
    """
    _check_dimension(n)
    noise = schedule.noise_variance(i)
    if i == 0:
        return -math.inf
    return 0.5 * n * (LOG_2PIE + math.log(noise))


def conditional_entropy_deficit(schedule: NoiseSchedule, i: int, n: int) -> float:
    """Return ``H(N(0, I)) - H(U_i | U_0) = -(n/2) ln(1 - alpha_i)``.

    Strictly decreasing in i and still resolvable once the conditional
    entropy itself has rounded to ``(n/2) ln(2 pi e)``. Step 0 gives ``inf``.
    """
    _check_dimension(n)
    alpha = schedule.signal_variance(i)
    if i == 0:
        return math.inf
    return -0.5 * n * math.log1p(-alpha)


def decomposed_entropy_step(stats: GaussianStats, beta: float) -> float:
    """Return ``H(sqrt(1 - beta) U, sqrt(beta) G) - H(U)`` for independent Gaussian U, G.

    The joint entropy of the scaled signal and the scaled noise splits into
    ``H(U) + n ln sqrt(1 - beta) + H(G) + n ln sqrt(beta)``; the result is
    therefore ``entropy_increment(beta, n)`` exactly when n = 1.
    """
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie strictly inside (0, 1), got {beta}")
    n = stats.dimension
    signal = stats.affine(math.sqrt(1.0 - beta), 0.0)
    if signal.kind is CovarianceKind.FULL:
        joint_cov = np.zeros((2 * n, 2 * n))
        joint_cov[:n, :n] = signal.covariance
        joint_cov[n:, n:] = beta * np.eye(n)
        joint = GaussianStats.full(np.zeros(2 * n), joint_cov)
    else:
        variances = np.broadcast_to(signal.covariance, (n,))
        joint = GaussianStats.diagonal(
            np.zeros(2 * n), np.concatenate((variances, np.full(n, beta)))
        )
    return differential_entropy_gaussian(joint) - differential_entropy_gaussian(stats)


class Trend(StrEnum):
    """Measured monotone direction of a sequence."""

    NONDECREASING = "nondecreasing"
    NONINCREASING = "nonincreasing"
    CONSTANT = "constant"
    MIXED = "mixed"


def sequence_trend(values: npt.ArrayLike) -> Trend:
    """Return the monotone direction of ``values``, without tolerance."""
    steps = np.diff(np.asarray(values, dtype=np.float64))
    up, down = bool(np.any(steps > 0)), bool(np.any(steps < 0))
    if up and down:
        return Trend.MIXED
    if up:
        return Trend.NONDECREASING
    if down:
        return Trend.NONINCREASING
    return Trend.CONSTANT


@dataclass(frozen=True, slots=True, eq=False)
class MarginalEntropySequence:
    """Exact marginal entropies ``H(U_0) .. H(U_m)`` for a Gaussian start.

    Attributes:
        values: Entropy of every step, length m + 1
        trend: Measured monotone direction of ``values``
    """

    values: FloatArray
    trend: Trend


def marginal_entropy_sequence(
    stats0: GaussianStats,
    schedule: NoiseSchedule,
) -> MarginalEntropySequence:
    """Return the closed-form entropy of ``U_i`` for every step of ``schedule``."""
    values = np.array(
        [
            differential_entropy_gaussian(gaussian_marginal(stats0, schedule, i))
            for i in range(len(schedule) + 1)
        ]
    )
    values.setflags(write=False)
    return MarginalEntropySequence(values=values, trend=sequence_trend(values))


def knn_entropy_estimate(samples: npt.ArrayLike, k: int = DEFAULT_KNN_NEIGHBORS) -> float:
    """Estimate differential entropy from samples with the Kozachenko-Leonenko k-NN rule.

    Uses max-norm neighbour distances:
    ``psi(N) - psi(k) + d ln 2 + (d / N) sum ln eps_i``. If any k-th neighbour
    distance is zero (duplicate samples), the samples are perturbed once by
    ``KNN_JITTER`` times standard-normal draws from a fixed stream.

    Args:
        samples: Array of shape (N,) or (N, d)
        k: Neighbour order

    Returns:
        Entropy estimate in nats

    Raises:
        DomainError: If there are fewer than k + 1 samples, k < 1 or d > 4
    """
    points = np.asarray(samples, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, np.newaxis]
    if points.ndim != 2:
        raise ShapeMismatchError("Samples must be a vector or an (N, d) array")
    count, dimension = points.shape
    if k < 1:
        raise DomainError("Neighbour order k must be at least 1")
    if count < k + 1:
        raise DomainError(f"Need at least {k + 1} samples for k={k}, got {count}")
    if not 1 <= dimension <= MAX_KNN_DIMENSION:
        raise DomainError(f"k-NN entropy supports dimensions 1..{MAX_KNN_DIMENSION}")

    distances = _kth_neighbor_distances(points, k)
    if np.any(distances == 0.0):
        LOG.debug("Duplicate samples found; applying jitter of %g", KNN_JITTER)
        jitter = RngStream(KNN_JITTER_SEED).normal(points.size).reshape(points.shape)
        points = points + KNN_JITTER * jitter
        distances = _kth_neighbor_distances(points, k)
        if np.any(distances == 0.0):
            raise DomainError("Samples are too concentrated for a k-NN entropy estimate")

    const = digamma(count) - digamma(k) + dimension * math.log(2.0)
    return float(const + dimension * np.mean(np.log(distances)))


def _kth_neighbor_distances(points: FloatArray, k: int) -> FloatArray:
    tree = cKDTree(points)
    distances, _ = tree.query(points, k=k + 1, p=np.inf)
    kth: FloatArray = distances[:, -1]
    return kth
