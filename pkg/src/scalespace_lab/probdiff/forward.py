"""Forward Markov chain: rescale the image and add Gaussian noise."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.pixels import apply_permutation
from scalespace_lab.core.rng import RngStream, sample_standard_normal
from scalespace_lab.core.types import FloatArray, ImageBuffer, Permutation
from scalespace_lab.probdiff.schedule import NoiseSchedule

LOG = logging.getLogger(__name__)


def _check_beta(beta: float) -> None:
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie strictly inside (0, 1), got {beta}")


def _step(u: FloatArray, beta: float, noise: FloatArray) -> FloatArray:
    result: FloatArray = math.sqrt(1.0 - beta) * u + math.sqrt(beta) * noise
    return result


def forward_step(u_prev: ImageBuffer, beta: float, noise: ImageBuffer) -> ImageBuffer:
    """Return ``sqrt(1 - beta) * u_prev + sqrt(beta) * noise``.

    Raises:
        DomainError: If beta is not strictly inside (0, 1)
        ShapeMismatchError: If ``noise`` and ``u_prev`` differ in shape
    """
    _check_beta(beta)
    if not u_prev.same_shape(noise):
        raise ShapeMismatchError("Noise must have the shape of the image it perturbs")
    return ImageBuffer(_step(u_prev.data, beta, noise.data))


def jump_to_step(
    u0: ImageBuffer,
    schedule: NoiseSchedule,
    i: int,
    noise: ImageBuffer,
) -> ImageBuffer:
    """Sample ``U_i`` directly from ``U_0``.

    Returns ``sqrt(alpha_i) * u0 + sqrt(1 - alpha_i) * noise``. For ``i = 0``
    this is ``u0``; for ``i = 1`` it equals ``forward_step(u0, beta_1, noise)``
    bit for bit.

    Raises:
        DomainError: If ``i`` lies outside ``0..len(schedule)``
        ShapeMismatchError: If ``noise`` and ``u0`` differ in shape
    """
    signal = schedule.signal_variance(i)
    if not u0.same_shape(noise):
        raise ShapeMismatchError("Noise must have the shape of the image it perturbs")
    if i == 0:
        return u0
    return ImageBuffer(
        math.sqrt(signal) * u0.data + math.sqrt(schedule.noise_variance(i)) * noise.data
    )


@dataclass(frozen=True, slots=True, eq=False)
class TrajectoryRecord:
    """Recorded frames of one forward trajectory.

    Attributes:
        steps: Recorded step indices, strictly increasing from 0
        frames: Image at each recorded step
        schedule: Schedule the trajectory ran with
        seed: Seed of the noise stream
    """

    steps: tuple[int, ...]
    frames: tuple[ImageBuffer, ...]
    schedule: NoiseSchedule
    seed: int

    def __post_init__(self) -> None:
        if len(self.steps) != len(self.frames):
            raise ShapeMismatchError("Every recorded step needs exactly one frame")
        if not self.steps or self.steps[0] != 0:
            raise DomainError("A trajectory record starts at step 0")
        if any(b <= a for a, b in zip(self.steps, self.steps[1:], strict=False)):
            raise DomainError("Recorded steps must be strictly increasing")

    def frame(self, step: int) -> ImageBuffer:
        """Return the frame recorded at ``step``.

        Raises:
            KeyError: If ``step`` was not recorded
        """
        try:
            return self.frames[self.steps.index(step)]
        except ValueError as exc:
            raise KeyError(step) from exc


def normalize_record_steps(record_steps: Sequence[int], last: int) -> tuple[int, ...]:
    """Return sorted unique record steps including 0.

    Raises:
        DomainError: If a step is negative or exceeds ``last``
    """
    steps = sorted({0, *record_steps})
    if steps[0] < 0 or steps[-1] > last:
        raise DomainError(f"Record steps must lie in 0..{last}")
    return tuple(steps)


def run_trajectory(
    u0: ImageBuffer,
    schedule: NoiseSchedule,
    record_steps: Sequence[int],
    rng: RngStream,
    noise_permutation: Permutation | None = None,
) -> TrajectoryRecord:
    """Iterate ``forward_step`` and record the requested frames.

    Step 0 is always recorded and holds ``u0`` itself. Each step draws one
    standard-normal image from ``rng`` in storage order. If
    ``noise_permutation`` is given, every noise image is permuted with it
    before use, which is how a trajectory of a permuted input is paired
    with its base trajectory.

    Raises:
        DomainError: If a record step lies outside ``0..len(schedule)``
    """
    steps = normalize_record_steps(record_steps, len(schedule))
    u = u0.data
    frames = [u0]
    recorded = set(steps)
    for i in range(1, steps[-1] + 1):
        noise = sample_standard_normal(rng, u0.width, u0.height, u0.channels)
        if noise_permutation is not None:
            noise = apply_permutation(noise, noise_permutation)
        u = _step(u, schedule.beta(i), noise.data)
        if i in recorded:
            frames.append(ImageBuffer(u))
            LOG.debug("Recorded step %d", i)
    return TrajectoryRecord(
        steps=steps,
        frames=tuple(frames),
        schedule=schedule,
        seed=rng.seed,
    )


def run_ensemble(
    u0: ImageBuffer,
    schedule: NoiseSchedule,
    steps: int,
    count: int,
    rng: RngStream,
) -> list[ImageBuffer]:
    """Run ``count`` independent trajectories for ``steps`` steps and return the end states.

    All trajectories advance together; step i consumes ``count * u0.size``
    draws, trajectory-major.

    Raises:
        DomainError: If ``count < 1`` or ``steps`` exceeds the schedule
    """
    if count < 1:
        raise DomainError("Ensemble size must be at least 1")
    if not 0 <= steps <= len(schedule):
        raise DomainError(f"Step count must lie in 0..{len(schedule)}")
    states = np.broadcast_to(u0.flat, (count, u0.size)).copy()
    for i in range(1, steps + 1):
        noise = rng.normal(count * u0.size).reshape(count, u0.size)
        states = _step(states, schedule.beta(i), noise)
    LOG.debug("Ran %d trajectories for %d steps", count, steps)
    return [u0.with_data(state) for state in states]
