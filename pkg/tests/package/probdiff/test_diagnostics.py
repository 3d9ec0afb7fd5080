"""Tests for Monte-Carlo diagnostics of the forward chain."""

from __future__ import annotations

import logging
import math

import numpy as np
import pytest

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.rng import RngStream
from scalespace_lab.core.types import ImageBuffer
from scalespace_lab.probdiff.diagnostics import (
    jump_equivalence,
    ks_critical_value,
    steady_state_diagnostics,
)
from scalespace_lab.probdiff.forward import run_ensemble
from scalespace_lab.probdiff.schedule import NoiseSchedule


def _image() -> ImageBuffer:
    return ImageBuffer.from_flat(np.linspace(0.0, 1.0, 16), 4, 4)


class TestSteadyState:
    """Tests for steady_state_diagnostics."""

    def test_long_chain_reaches_standard_normal(self) -> None:
        states = run_ensemble(_image(), NoiseSchedule.constant(0.02, 500), 500, 1000, RngStream(2))
        report = steady_state_diagnostics(states)
        assert report.sample_count == 1000
        assert report.variance_defined
        assert report.within(mean_tol=0.15, variance_tol=0.2, correlation_tol=0.06)

    def test_short_chain_keeps_its_mean(self) -> None:
        start = ImageBuffer.full(4, 4, 5.0)
        states = run_ensemble(start, NoiseSchedule.constant(0.02, 10), 10, 200, RngStream(3))
        report = steady_state_diagnostics(states)
        assert report.max_abs_mean > 3.0
        assert not report.within(0.15, 0.2, 0.06)

    def test_single_sample(self, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.WARNING):
            report = steady_state_diagnostics([_image()])
        assert report.variance is None
        assert report.mean_abs_correlation is None
        assert report.max_variance_deviation is None
        assert not report.within(1.0, 1.0, 1.0)
        assert "Only one sample" in caplog.text

    def test_constant_samples_have_undefined_correlation(self) -> None:
        report = steady_state_diagnostics([_image(), _image()])
        assert report.mean_abs_correlation is None

    def test_rejects_bad_input(self) -> None:
        with pytest.raises(DomainError):
            steady_state_diagnostics([])
        with pytest.raises(ShapeMismatchError):
            steady_state_diagnostics([_image(), ImageBuffer.full(2, 2, 0.0)])

    @pytest.mark.slow
    def test_ten_thousand_trajectories_at_step_2048(self) -> None:
        count = 10_000
        start = ImageBuffer.from_flat(np.linspace(-1.0, 1.0, 256), 16, 16)
        schedule = NoiseSchedule.constant(0.02, 2048)
        assert schedule.signal_variance(2048) < 1e-17
        states = run_ensemble(start, schedule, 2048, count, RngStream(0))
        report = steady_state_diagnostics(states)
        assert report.sample_count == count
        assert report.within(
            mean_tol=5.0 / math.sqrt(count),
            variance_tol=5.0 * math.sqrt(2.0 / count),
            correlation_tol=0.05,
        )


class TestJumpEquivalence:
    """Tests for jump_equivalence."""

    def test_critical_value(self) -> None:
        assert ks_critical_value(100, 100) == pytest.approx(0.23018, abs=1e-4)

    def test_jump_matches_composed_steps(self) -> None:
        schedule = NoiseSchedule.linear(20, 0.01, 0.05)
        result = jump_equivalence(_image(), schedule, 20, 400, RngStream(6))
        assert result.jump_count == 400 * 16
        assert result.composed_count == 400 * 16
        assert result.statistic < 1.5 * result.critical_value

    def test_requires_a_step(self) -> None:
        with pytest.raises(DomainError):
            jump_equivalence(_image(), NoiseSchedule.constant(0.1, 2), 0, 10, RngStream(0))
