"""Tests for the forward Markov chain."""

from __future__ import annotations

import math

import numpy as np
import pytest

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.pixels import apply_permutation, random_permutation
from scalespace_lab.core.rng import RngStream, sample_standard_normal
from scalespace_lab.core.types import ImageBuffer
from scalespace_lab.probdiff.forward import (
    TrajectoryRecord,
    forward_step,
    jump_to_step,
    normalize_record_steps,
    run_ensemble,
    run_trajectory,
)
from scalespace_lab.probdiff.schedule import NoiseSchedule


def _image(width: int = 4, height: int = 3, channels: int = 1) -> ImageBuffer:
    values = np.linspace(-1.0, 1.0, width * height * channels)
    return ImageBuffer.from_flat(values, width, height, channels)


class TestForwardStep:
    """Tests for forward_step and jump_to_step."""

    def test_formula(self) -> None:
        u = _image()
        noise = ImageBuffer.full(4, 3, 2.0)
        out = forward_step(u, 0.36, noise)
        assert np.allclose(out.data, 0.8 * u.data + 0.6 * 2.0)

    def test_rejects_bad_arguments(self) -> None:
        u = _image()
        with pytest.raises(DomainError):
            forward_step(u, 1.0, u)
        with pytest.raises(ShapeMismatchError):
            forward_step(u, 0.5, ImageBuffer.full(3, 4, 0.0))
        with pytest.raises(ShapeMismatchError):
            jump_to_step(u, NoiseSchedule.constant(0.1, 2), 1, ImageBuffer.full(4, 3, 0.0, 2))

    def test_jump_to_first_step_is_bit_exact(self) -> None:
        u = _image(channels=3)
        noise = sample_standard_normal(RngStream(4), 4, 3, 3)
        schedule = NoiseSchedule(np.array([0.037, 0.2]))
        jumped = jump_to_step(u, schedule, 1, noise)
        stepped = forward_step(u, 0.037, noise)
        assert np.array_equal(jumped.data, stepped.data)

    def test_jump_to_step_zero_returns_start(self) -> None:
        u = _image()
        assert jump_to_step(u, NoiseSchedule.constant(0.1, 3), 0, u) is u

    def test_jump_uses_closed_form_weights(self) -> None:
        u = _image()
        noise = ImageBuffer.full(4, 3, 1.0)
        schedule = NoiseSchedule.constant(0.1, 4)
        alpha = 0.9**4
        out = jump_to_step(u, schedule, 4, noise)
        assert np.allclose(out.data, math.sqrt(alpha) * u.data + math.sqrt(1 - alpha))

    def test_jump_outside_schedule(self) -> None:
        u = _image()
        with pytest.raises(DomainError):
            jump_to_step(u, NoiseSchedule.constant(0.1, 3), 4, u)


class TestTrajectory:
    """Tests for run_trajectory and TrajectoryRecord."""

    def test_records_requested_steps(self) -> None:
        u0 = _image()
        schedule = NoiseSchedule.constant(0.02, 16)
        rng = RngStream(1)
        record = run_trajectory(u0, schedule, [8, 2, 2], rng)
        assert record.steps == (0, 2, 8)
        assert record.frame(0) is u0
        assert record.seed == 1
        assert rng.position == 8 * u0.size
        with pytest.raises(KeyError):
            record.frame(4)

    def test_matches_manual_iteration(self) -> None:
        u0 = _image(channels=2)
        schedule = NoiseSchedule.linear(5, 0.01, 0.1)
        record = run_trajectory(u0, schedule, [5], RngStream(9))
        rng = RngStream(9)
        u = u0
        for i in range(1, 6):
            u = forward_step(u, schedule.beta(i), sample_standard_normal(rng, 4, 3, 2))
        assert np.array_equal(record.frame(5).data, u.data)

    def test_same_seed_same_trajectory(self) -> None:
        u0 = _image()
        schedule = NoiseSchedule.constant(0.1, 10)
        first = run_trajectory(u0, schedule, [10], RngStream(3))
        second = run_trajectory(u0, schedule, [10], RngStream(3))
        assert np.array_equal(first.frame(10).data, second.frame(10).data)

    def test_permuted_input_gives_permuted_trajectory(self) -> None:
        u0 = ImageBuffer.from_flat(RngStream(21).normal(48) * 100.0, 4, 4, 3)
        schedule = NoiseSchedule.cosine(32)
        p = random_permutation(16, RngStream(22))
        base = run_trajectory(u0, schedule, [1, 7, 32], RngStream(5))
        permuted = run_trajectory(
            apply_permutation(u0, p), schedule, [1, 7, 32], RngStream(5), noise_permutation=p
        )
        for step in base.steps:
            expected = apply_permutation(base.frame(step), p)
            assert np.array_equal(permuted.frame(step).data, expected.data)

    def test_permutation_invariance_over_random_permutations(self) -> None:
        u0 = ImageBuffer.from_flat(RngStream(23).normal(64), 8, 8)
        schedule = NoiseSchedule.constant(0.02, 64)
        steps = range(65)
        base = run_trajectory(u0, schedule, steps, RngStream(6))
        permutation_rng = RngStream(24)
        mismatched = 0
        for _ in range(100):
            p = random_permutation(64, permutation_rng)
            permuted = run_trajectory(
                apply_permutation(u0, p), schedule, steps, RngStream(6), noise_permutation=p
            )
            for step in base.steps:
                got = np.frombuffer(permuted.frame(step).data.tobytes(), dtype=np.uint8)
                want = apply_permutation(base.frame(step), p).data.tobytes()
                mismatched += int(np.count_nonzero(got != np.frombuffer(want, dtype=np.uint8)))
        assert mismatched == 0

    def test_rejects_steps_beyond_schedule(self) -> None:
        with pytest.raises(DomainError, match=r"0\.\.3"):
            run_trajectory(_image(), NoiseSchedule.constant(0.1, 3), [4], RngStream(0))

    def test_normalize_record_steps(self) -> None:
        assert normalize_record_steps([], 5) == (0,)
        assert normalize_record_steps([3, 1, 3], 5) == (0, 1, 3)
        with pytest.raises(DomainError):
            normalize_record_steps([-1], 5)

    def test_record_validation(self) -> None:
        u0 = _image()
        schedule = NoiseSchedule.constant(0.1, 2)
        with pytest.raises(ShapeMismatchError):
            TrajectoryRecord((0, 1), (u0,), schedule, 0)
        with pytest.raises(DomainError):
            TrajectoryRecord((1,), (u0,), schedule, 0)
        with pytest.raises(DomainError):
            TrajectoryRecord((0, 2, 1), (u0, u0, u0), schedule, 0)


class TestEnsemble:
    """Tests for run_ensemble."""

    def test_draw_order_is_trajectory_major(self) -> None:
        u0 = _image()
        schedule = NoiseSchedule.constant(0.3, 2)
        states = run_ensemble(u0, schedule, 2, 3, RngStream(8))
        rng = RngStream(8)
        first = rng.normal(3 * u0.size).reshape(3, u0.size)
        second = rng.normal(3 * u0.size).reshape(3, u0.size)
        for index, state in enumerate(states):
            u = math.sqrt(1.0 - 0.3) * u0.flat + math.sqrt(0.3) * first[index]
            u = math.sqrt(1.0 - 0.3) * u + math.sqrt(0.3) * second[index]
            assert np.array_equal(state.flat, u)

    def test_zero_steps_returns_copies(self) -> None:
        u0 = _image()
        states = run_ensemble(u0, NoiseSchedule.constant(0.1, 1), 0, 2, RngStream(0))
        assert len(states) == 2
        assert all(np.array_equal(state.data, u0.data) for state in states)

    def test_rejects_bad_arguments(self) -> None:
        schedule = NoiseSchedule.constant(0.1, 2)
        with pytest.raises(DomainError):
            run_ensemble(_image(), schedule, 1, 0, RngStream(0))
        with pytest.raises(DomainError):
            run_ensemble(_image(), schedule, 3, 1, RngStream(0))
