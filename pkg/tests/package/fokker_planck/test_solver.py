"""Tests for the finite-volume forward solver."""

from __future__ import annotations

import math

import numpy as np
import pytest

from scalespace_lab.core.errors import DomainError, StabilityError
from scalespace_lab.fokker_planck.grid import DensityGrid, GridSpec, gaussian_density
from scalespace_lab.fokker_planck.moments import (
    MomentFields,
    constant_rate,
    schedule_moments,
    schedule_rate,
)
from scalespace_lab.fokker_planck.residuals import observed_order
from scalespace_lab.fokker_planck.solver import assemble_banded, fp_forward_solve
from scalespace_lab.probdiff.schedule import NoiseSchedule


class TestAssembleBanded:
    """Tests for assemble_banded."""

    def test_zero_column_sums(self) -> None:
        spec = GridSpec(-4.0, 4.0, 40)
        bands = assemble_banded(spec, schedule_moments(constant_rate(1.0)), 0.0)
        column_sums = bands[1].copy()
        column_sums[1:] += bands[0, 1:]
        column_sums[:-1] += bands[2, :-1]
        assert np.allclose(column_sums, 0.0, atol=1e-12)

    def test_off_diagonals_are_non_negative(self) -> None:
        spec = GridSpec(-6.0, 6.0, 120)
        bands = assemble_banded(spec, schedule_moments(constant_rate(0.02)), 0.0)
        assert np.all(bands[0, 1:] >= 0.0)
        assert np.all(bands[2, :-1] >= 0.0)
        assert np.all(bands[1] <= 0.0)

    def test_cell_peclet_bound(self) -> None:
        spec = GridSpec(-1000.0, 1000.0, 10)
        with pytest.raises(StabilityError, match="Peclet"):
            assemble_banded(spec, schedule_moments(constant_rate(1.0)), 0.0)


class TestFpForwardSolve:
    """Tests for fp_forward_solve."""

    def test_heat_kernel_second_order(self) -> None:
        coefficient = 1.0
        errors = []
        for m in (80, 160, 320):
            spec = GridSpec(-8.0, 8.0, m)
            p0 = gaussian_density(spec, 0.0, 1.0)
            solution = fp_forward_solve(
                p0, MomentFields.diffusion_only(coefficient), 1.0, dt=spec.h**2, theta=0.5
            )
            exact = gaussian_density(spec, 0.0, math.sqrt(1.0 + coefficient))
            errors.append(solution.l1_distance(exact))
        assert np.all(observed_order(errors) >= 1.8)

    @pytest.mark.parametrize("beta", [0.02, 1.0])
    def test_standard_normal_is_stationary(self, beta: float) -> None:
        spec = GridSpec(-6.0, 6.0, 600)
        p0 = gaussian_density(spec, 0.0, 1.0)
        mom = schedule_moments(constant_rate(beta), constant=True)
        solution = fp_forward_solve(p0, mom, 10.0, dt=0.1)
        assert solution.l1_distance(p0) < 1e-4

    @pytest.mark.parametrize("theta", [0.5, 1.0])
    def test_mass_and_positivity(self, theta: float) -> None:
        spec = GridSpec(-6.0, 6.0, 240)
        p0 = gaussian_density(spec, 2.0, 0.2)
        mom = schedule_moments(constant_rate(0.5), constant=True)
        solution = fp_forward_solve(p0, mom, 3.0, dt=0.004, theta=theta)
        assert solution.mass() == pytest.approx(1.0, abs=1e-12)
        assert np.all(solution.values >= 0.0)

    def test_mean_and_variance_follow_closed_form(self) -> None:
        spec = GridSpec(-6.0, 6.0, 600)
        p0 = gaussian_density(spec, 2.0, 0.3)
        schedule = NoiseSchedule(np.array([0.2, 0.6]))
        mom = schedule_moments(schedule_rate(schedule))
        solution = fp_forward_solve(p0, mom, 2.0, dt=0.002)
        decay = math.exp(-0.8)
        assert solution.mean() == pytest.approx(2.0 * math.exp(-0.4), abs=5e-3)
        assert solution.variance() == pytest.approx(p0.variance() * decay + 1.0 - decay, abs=5e-3)

    def test_zero_time_returns_start(self) -> None:
        p0 = gaussian_density(GridSpec(-3.0, 3.0, 30), 0.0, 1.0)
        assert fp_forward_solve(p0, MomentFields.diffusion_only(1.0), 0.0, 0.1) is p0

    def test_explicit_part_positivity_bound(self) -> None:
        p0 = gaussian_density(GridSpec(-3.0, 3.0, 60), 0.0, 1.0)
        with pytest.raises(StabilityError, match="positivity bound"):
            fp_forward_solve(p0, MomentFields.diffusion_only(1.0), 1.0, dt=1.0, theta=0.5)

    def test_rejects_bad_arguments(self) -> None:
        spec = GridSpec(-3.0, 3.0, 30)
        p0 = gaussian_density(spec, 0.0, 1.0)
        mom = MomentFields.diffusion_only(1.0)
        with pytest.raises(DomainError):
            fp_forward_solve(p0, mom, -1.0, 0.1)
        with pytest.raises(DomainError):
            fp_forward_solve(p0, mom, 1.0, 0.0)
        with pytest.raises(DomainError):
            fp_forward_solve(p0, mom, 1.0, 0.1, theta=0.3)
        with pytest.raises(DomainError, match="unit mass"):
            fp_forward_solve(DensityGrid(spec, np.ones(30)), mom, 1.0, 0.1)
