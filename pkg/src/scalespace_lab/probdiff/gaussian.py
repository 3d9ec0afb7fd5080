"""Closed-form Gaussian statistics of the forward process."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.types import FloatArray

if TYPE_CHECKING:
    from scalespace_lab.probdiff.schedule import NoiseSchedule

LOG_2PIE = math.log(2.0 * math.pi * math.e)

_PSD_TOLERANCE = 1e-12


class CovarianceKind(StrEnum):
    """Storage form of a covariance."""

    SCALAR = "scalar"
    DIAGONAL = "diagonal"
    FULL = "full"


@dataclass(frozen=True, slots=True, eq=False)
class GaussianStats:
    """Mean and covariance of a multivariate Gaussian.

    ``covariance`` holds a single variance (``SCALAR``, meaning variance times
    identity), the diagonal (``DIAGONAL``) or the full symmetric matrix
    (``FULL``).

    Attributes:
        mean: Mean vector of length n
        covariance: Covariance in the storage form named by ``kind``
        kind: Storage form of ``covariance``
    """

    mean: FloatArray
    covariance: FloatArray
    kind: CovarianceKind

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=np.float64, copy=True).ravel()
        cov = np.array(self.covariance, dtype=np.float64, copy=True)
        kind = CovarianceKind(self.kind)
        n = mean.size
        if n < 1:
            raise ShapeMismatchError("Gaussian mean must have at least one entry")
        if kind is CovarianceKind.SCALAR:
            cov = cov.reshape(())
            if cov < 0:
                raise DomainError("Variance must be non-negative")
        elif kind is CovarianceKind.DIAGONAL:
            cov = cov.ravel()
            if cov.shape != (n,):
                raise ShapeMismatchError(f"Diagonal covariance must have {n} entries")
            if np.any(cov < 0):
                raise DomainError("Diagonal covariance entries must be non-negative")
        else:
            if cov.shape != (n, n):
                raise ShapeMismatchError(f"Full covariance must be {n}x{n}")
            atol = _PSD_TOLERANCE * max(1.0, float(np.abs(cov).max()))
            if not np.allclose(cov, cov.T, rtol=0.0, atol=atol):
                raise DomainError("Covariance must be symmetric")
            cov = 0.5 * (cov + cov.T)
            if np.any(np.diag(cov) < 0) or np.linalg.eigvalsh(cov).min() < -atol:
                raise DomainError("Covariance must be positive semi-definite")
        for name, array in (("mean", mean), ("covariance", cov)):
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def isotropic(cls, mean: npt.ArrayLike, variance: float = 1.0) -> GaussianStats:
        """Return ``N(mean, variance * I)``."""
        return cls(np.asarray(mean, dtype=np.float64), np.asarray(variance), CovarianceKind.SCALAR)

    @classmethod
    def standard(cls, n: int) -> GaussianStats:
        """Return ``N(0, I)`` in ``n`` dimensions."""
        return cls.isotropic(np.zeros(n), 1.0)

    @classmethod
    def diagonal(cls, mean: npt.ArrayLike, variances: npt.ArrayLike) -> GaussianStats:
        """Return a Gaussian with independent components."""
        mean_vector = np.asarray(mean, dtype=np.float64)
        return cls(mean_vector, np.asarray(variances), CovarianceKind.DIAGONAL)

    @classmethod
    def full(cls, mean: npt.ArrayLike, covariance: npt.ArrayLike) -> GaussianStats:
        """Return a Gaussian with a full covariance matrix."""
        return cls(np.asarray(mean, dtype=np.float64), np.asarray(covariance), CovarianceKind.FULL)

    @property
    def dimension(self) -> int:
        """Return n."""
        return int(self.mean.size)

    def covariance_matrix(self) -> FloatArray:
        """Return the covariance as a dense n x n matrix."""
        n = self.dimension
        if self.kind is CovarianceKind.SCALAR:
            return float(self.covariance) * np.eye(n)
        if self.kind is CovarianceKind.DIAGONAL:
            return np.diag(self.covariance)
        return np.array(self.covariance)

    def affine(self, scale: float, added_variance: float) -> GaussianStats:
        """Return the law of ``scale * X + sqrt(added_variance) * G`` for independent G."""
        factor = scale * scale
        if self.kind is CovarianceKind.FULL:
            cov = factor * self.covariance + added_variance * np.eye(self.dimension)
        else:
            cov = factor * self.covariance + added_variance
        return GaussianStats(scale * self.mean, cov, self.kind)


def gaussian_marginal(stats0: GaussianStats, schedule: NoiseSchedule, i: int) -> GaussianStats:
    """Return the law of ``U_i`` when ``U_0`` is Gaussian.

    The mean is ``sqrt(alpha_i) * mean0`` and the covariance
    ``alpha_i * cov0 + (1 - alpha_i) * I``.

    Raises:
        DomainError: If ``i`` lies outside ``0..len(schedule)``
    """
    alpha = schedule.signal_variance(i)
    return stats0.affine(math.sqrt(alpha), schedule.noise_variance(i))


def log_det(stats: GaussianStats) -> float:
    """Return ``ln det(covariance)``.

    Raises:
        DomainError: If the covariance is singular
    """
    n = stats.dimension
    if stats.kind is CovarianceKind.SCALAR:
        variance = float(stats.covariance)
        if variance <= 0.0:
            raise DomainError("Covariance is singular")
        return n * math.log(variance)
    if stats.kind is CovarianceKind.DIAGONAL:
        if np.any(stats.covariance <= 0.0):
            raise DomainError("Covariance is singular")
        return float(np.sum(np.log(stats.covariance)))
    sign, logdet = np.linalg.slogdet(stats.covariance)
    if sign <= 0:
        raise DomainError("Covariance is singular")
    return float(logdet)


def differential_entropy_gaussian(stats: GaussianStats) -> float:
    """Return the differential entropy in nats: ``(n/2) ln(2 pi e) + (1/2) ln det(cov)``.

    Raises:
        DomainError: If the covariance is singular
    """
    return 0.5 * stats.dimension * LOG_2PIE + 0.5 * log_det(stats)
