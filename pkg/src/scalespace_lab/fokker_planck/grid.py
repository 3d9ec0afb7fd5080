"""One-dimensional cell grids and discrete densities."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.limits import MIN_HISTOGRAM_SAMPLES
from scalespace_lab.core.types import FloatArray

LOG = logging.getLogger(__name__)

# Share of cells at each end counted by boundary_mass.
BOUNDARY_FRACTION = 0.02


@dataclass(frozen=True, slots=True)
class GridSpec:
    """Uniform cell grid on ``[lo, hi]``.

    Attributes:
        lo: Left domain bound
        hi: Right domain bound
        m: Number of cells
    """

    lo: float
    hi: float
    m: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.hi <= self.lo:
            raise DomainError(f"Grid bounds must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if self.m < 2:
            raise DomainError("A grid needs at least two cells")

    @property
    def h(self) -> float:
        """Return the cell width."""
        return (self.hi - self.lo) / self.m

    def centers(self) -> FloatArray:
        """Return the cell centres."""
        return self.lo + (np.arange(self.m) + 0.5) * self.h

    def edges(self) -> FloatArray:
        """Return the m + 1 cell edges."""
        return np.linspace(self.lo, self.hi, self.m + 1)

    def faces(self) -> FloatArray:
        """Return the m - 1 interior faces between neighbouring cells."""
        return self.edges()[1:-1]

    def refined(self, factor: int = 2) -> GridSpec:
        """Return the same domain with ``factor`` times as many cells."""
        return GridSpec(self.lo, self.hi, self.m * factor)


@dataclass(frozen=True, slots=True, eq=False)
class DensityGrid:
    """Piecewise-constant probability density on a grid.

    Attributes:
        spec: Grid the values live on
        values: Density per cell (1/length), non-negative
        outside_count: Samples that fell outside the domain, for histograms
    """

    spec: GridSpec
    values: FloatArray
    outside_count: int = 0

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64, copy=True).ravel()
        if values.shape != (self.spec.m,):
            raise ShapeMismatchError(f"Expected {self.spec.m} cell values, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise DomainError("Density values must be finite")
        if np.any(values < 0.0):
            raise DomainError("Density values must be non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def mass(self) -> float:
        """Return ``h * sum(values)``, correctly rounded."""
        return self.spec.h * math.fsum(self.values.tolist())

    def normalized(self) -> DensityGrid:
        """Return the density rescaled to unit mass.

        Raises:
            DomainError: If the density has zero mass
        """
        mass = self.mass()
        if mass <= 0.0:
            raise DomainError("Cannot normalise a density with zero mass")
        return DensityGrid(self.spec, self.values / mass, self.outside_count)

    def mean(self) -> float:
        """Return the first moment."""
        return float(self.spec.h * np.sum(self.spec.centers() * self.values))

    def variance(self) -> float:
        """Return the central second moment."""
        centered = self.spec.centers() - self.mean()
        return float(self.spec.h * np.sum(centered * centered * self.values))

    def l1_distance(self, other: DensityGrid) -> float:
        """Return ``h * sum |self - other|``.

        Raises:
            ShapeMismatchError: If the grids differ
        """
        if other.spec != self.spec:
            raise ShapeMismatchError("L1 distance needs densities on the same grid")
        return float(self.spec.h * np.sum(np.abs(self.values - other.values)))


def gaussian_density(spec: GridSpec, mean: float, std: float) -> DensityGrid:
    """Sample a normal density at the cell centres and normalise it.

    Raises:
        DomainError: If ``std`` is not positive
    """
    if std <= 0.0:
        raise DomainError("Standard deviation must be positive")
    z = (spec.centers() - mean) / std
    values = np.exp(-0.5 * z * z) / (std * math.sqrt(2.0 * math.pi))
    return DensityGrid(spec, values).normalized()


def histogram_density(samples: npt.ArrayLike, spec: GridSpec) -> DensityGrid:
    """Return the normalised histogram of ``samples`` on ``spec``.

    Samples outside ``[lo, hi]`` are left out of the normalisation, counted
    in ``outside_count`` and logged.

    Raises:
        DomainError: If there are fewer than ``MIN_HISTOGRAM_SAMPLES`` samples
            or none falls inside the domain
    """
    values = np.asarray(samples, dtype=np.float64).ravel()
    if values.size < MIN_HISTOGRAM_SAMPLES:
        raise DomainError(
            f"Histogram needs at least {MIN_HISTOGRAM_SAMPLES} samples, got {values.size}"
        )
    inside = (values >= spec.lo) & (values <= spec.hi)
    outside = int(values.size - np.count_nonzero(inside))
    if outside:
        LOG.warning("%d of %d samples lie outside [%g, %g]", outside, values.size, spec.lo, spec.hi)
    if outside == values.size:
        raise DomainError("No sample lies inside the histogram domain")
    counts, _ = np.histogram(values[inside], bins=spec.edges())
    density = counts / ((values.size - outside) * spec.h)
    return DensityGrid(spec, density, outside_count=outside)


def boundary_mass(grid: DensityGrid) -> float:
    """Return the mass in the outermost ``BOUNDARY_FRACTION`` of cells at both ends."""
    width = max(1, int(grid.spec.m * BOUNDARY_FRACTION))
    edge_values = np.concatenate((grid.values[:width], grid.values[-width:]))
    return float(grid.spec.h * np.sum(edge_values))
