"""Noise schedules of the forward process.

Schedules are 1-indexed: step ``i`` (``1 <= i <= len(schedule)``) uses
``beta(i)``, and all products run over ``j = 1..i``. Step 0 is the
unperturbed image, for which the empty product is 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from scalespace_lab.core.errors import DomainError, ScheduleFormatError
from scalespace_lab.core.types import FloatArray

if TYPE_CHECKING:
    from pathlib import Path

LOG = logging.getLogger(__name__)

COSINE_OFFSET = 0.008
COSINE_BETA_CLIP = (1e-4, 0.9999)


@dataclass(frozen=True, eq=False)
class NoiseSchedule:
    """Ordered per-step variances ``beta_1 .. beta_m`` of the forward chain.

    Attributes:
        betas: Step variances, each strictly inside (0, 1)
    """

    betas: FloatArray

    def __post_init__(self) -> None:
        betas = np.array(self.betas, dtype=np.float64, copy=True).ravel()
        if betas.size and not np.all((betas > 0.0) & (betas < 1.0)):
            bad = int(np.flatnonzero(~((betas > 0.0) & (betas < 1.0)))[0])
            raise DomainError(f"beta_{bad + 1} = {betas[bad]!r} is not strictly inside (0, 1)")
        betas.setflags(write=False)
        object.__setattr__(self, "betas", betas)

    @classmethod
    def constant(cls, beta: float, steps: int) -> NoiseSchedule:
        """Return ``steps`` copies of ``beta``."""
        _check_steps(steps)
        return cls(np.full(steps, beta, dtype=np.float64))

    @classmethod
    def linear(cls, steps: int, beta_start: float = 1e-4, beta_end: float = 2e-2) -> NoiseSchedule:
        """Return betas spaced evenly from ``beta_start`` to ``beta_end``."""
        _check_steps(steps)
        return cls(np.linspace(beta_start, beta_end, steps))

    @classmethod
    def quadratic(
        cls, steps: int, beta_start: float = 1e-4, beta_end: float = 2e-2
    ) -> NoiseSchedule:
        """Return betas whose square roots are spaced evenly."""
        _check_steps(steps)
        return cls(np.linspace(math.sqrt(beta_start), math.sqrt(beta_end), steps) ** 2)

    @classmethod
    def cosine(cls, steps: int, offset: float = COSINE_OFFSET) -> NoiseSchedule:
        """Return the squared-cosine schedule of signal variances.

        The signal variance follows ``cos^2(((i/m) + offset) / (1 + offset) * pi/2)``
        normalised to 1 at step 0; betas are clipped to ``COSINE_BETA_CLIP``.
        """
        _check_steps(steps)
        if steps == 0:
            return cls(np.empty(0))
        x = np.linspace(0.0, 1.0, steps + 1)
        signal = np.cos((x + offset) / (1.0 + offset) * math.pi / 2.0) ** 2
        signal = signal / signal[0]
        betas = 1.0 - signal[1:] / signal[:-1]
        return cls(np.clip(betas, *COSINE_BETA_CLIP))

    @classmethod
    def from_file(cls, path: Path) -> NoiseSchedule:
        """Parse a plain-text schedule with one beta per line.

        Blank lines and lines starting with ``#`` are ignored.

        Raises:
            ScheduleFormatError: If a line is not a real number
            DomainError: If a value is not strictly inside (0, 1)
        """
        values: list[float] = []
        for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError as exc:
                raise ScheduleFormatError(f"{path}:{number}: not a number: {line!r}") from exc
        LOG.debug("Read %d betas from %s", len(values), path)
        return cls(np.asarray(values, dtype=np.float64))

    def __len__(self) -> int:
        """Return the number of steps ``m``."""
        return int(self.betas.size)

    def beta(self, i: int) -> float:
        """Return ``beta_i`` for ``1 <= i <= m``."""
        if not 1 <= i <= len(self):
            raise DomainError(f"Step {i} is outside 1..{len(self)}")
        return float(self.betas[i - 1])

    def slice(self, start: int, stop: int) -> NoiseSchedule:
        """Return the schedule of steps ``start + 1 .. stop``, renumbered from 1."""
        if not 0 <= start <= stop <= len(self):
            raise DomainError(f"Invalid step range {start}..{stop} for {len(self)} steps")
        return NoiseSchedule(self.betas[start:stop])

    @property
    def is_constant(self) -> bool:
        """Return whether every step uses the same beta."""
        return bool(np.all(self.betas == self.betas[0])) if len(self) else True

    @cached_property
    def _signal(self) -> FloatArray:
        signal = np.concatenate(([1.0], np.cumprod(1.0 - self.betas)))
        signal.setflags(write=False)
        return signal

    @cached_property
    def _noise(self) -> FloatArray:
        noise = np.zeros(len(self) + 1)
        for index, beta in enumerate(self.betas.tolist(), start=1):
            noise[index] = noise[index - 1] + (1.0 - noise[index - 1]) * beta
        noise.setflags(write=False)
        return noise

    def _check_step(self, i: int) -> None:
        if not 0 <= i <= len(self):
            raise DomainError(f"Step {i} is outside 0..{len(self)}")

    def signal_variance(self, i: int) -> float:
        """Return ``alpha_i``, the product of ``1 - beta_j`` over ``j = 1..i``."""
        self._check_step(i)
        return float(self._signal[i])

    def noise_variance(self, i: int) -> float:
        """Return ``1 - alpha_i``.

        Accumulated as ``d_i = d_(i-1) + (1 - d_(i-1)) * beta_i`` so that
        ``noise_variance(1)`` is exactly ``beta_1`` and small values keep
        full relative precision.
        """
        self._check_step(i)
        return float(self._noise[i])

    def signal_variances(self) -> FloatArray:
        """Return ``alpha_0 .. alpha_m`` as a read-only array."""
        return self._signal

    def noise_variances(self) -> FloatArray:
        """Return ``1 - alpha_0 .. 1 - alpha_m`` as a read-only array."""
        return self._noise


def _check_steps(steps: int) -> None:
    if steps < 0:
        raise DomainError("Step count must be non-negative")

