"""Stochastic moments of the forward chain in the continuum limit.

Step i of the chain corresponds to the time interval ``(i - 1, i]`` and
``beta_i`` to ``beta(t) * dt`` with ``dt = 1``. Expanding
``sqrt(1 - beta) u - u`` gives the conditional drift ``-(beta / 2) u`` and
the conditional second moment ``beta`` per unit time. In the form
``p_t = (1/2) (m2 p)'' + (m1 p)'`` these become ``m1 = (beta / 2) u`` and
``m2 = beta``, for which ``N(0, 1)`` is stationary.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from scalespace_lab.core.errors import DomainError
from scalespace_lab.core.types import FloatArray

if TYPE_CHECKING:
    from scalespace_lab.probdiff.schedule import NoiseSchedule

MomentFunction = Callable[[FloatArray, float], FloatArray]
BetaRate = Callable[[float], float]


@dataclass(frozen=True, slots=True)
class MomentFields:
    """Drift and diffusion coefficients ``m1(u, t)`` and ``m2(u, t)``.

    Attributes:
        m1: Drift coefficient (state per time)
        m2: Diffusion coefficient (state squared per time), positive
        time_independent: Whether both fields ignore t, which lets solvers
            assemble their operator once
    """

    m1: MomentFunction
    m2: MomentFunction
    time_independent: bool = False

    @classmethod
    def diffusion_only(cls, coefficient: float) -> MomentFields:
        """Return ``m1 = 0``, ``m2 = coefficient``: the heat equation."""
        if coefficient <= 0.0:
            raise DomainError("Diffusion coefficient must be positive")
        return cls(
            m1=lambda u, _t: np.zeros_like(u),
            m2=lambda u, _t: np.full_like(u, coefficient),
            time_independent=True,
        )

    def drift(self, u: FloatArray, t: float) -> FloatArray:
        """Evaluate ``m1`` on ``u``."""
        return np.asarray(self.m1(u, t), dtype=np.float64) * np.ones_like(u)

    def diffusion(self, u: FloatArray, t: float) -> FloatArray:
        """Evaluate ``m2`` on ``u``.

        Raises:
            DomainError: If ``m2`` is not positive on ``u``
        """
        values = np.asarray(self.m2(u, t), dtype=np.float64) * np.ones_like(u)
        if np.any(values <= 0.0):
            raise DomainError(f"Diffusion coefficient m2 must be positive (t={t})")
        return values


def moments_from_schedule(
    beta_rate: BetaRate,
    u: npt.ArrayLike,
    t: float,
) -> tuple[FloatArray, FloatArray]:
    """Return ``(m1, m2) = ((beta(t) / 2) u, beta(t))`` at state ``u`` and time ``t``.

    Raises:
        DomainError: If ``beta_rate(t)`` is not positive
    """
    rate = float(beta_rate(t))
    if rate <= 0.0:
        raise DomainError(f"beta rate must be positive, got {rate} at t={t}")
    state = np.asarray(u, dtype=np.float64)
    return 0.5 * rate * state, np.full_like(state, rate)


def schedule_moments(beta_rate: BetaRate, *, constant: bool = False) -> MomentFields:
    """Wrap ``moments_from_schedule`` as moment fields.

    Args:
        beta_rate: Noise rate as a function of time
        constant: Declare the rate time-independent
    """
    return MomentFields(
        m1=lambda u, t: moments_from_schedule(beta_rate, u, t)[0],
        m2=lambda u, t: moments_from_schedule(beta_rate, u, t)[1],
        time_independent=constant,
    )


def constant_rate(beta: float) -> BetaRate:
    """Return ``t -> beta``."""
    return lambda _t: beta


def schedule_rate(schedule: NoiseSchedule) -> BetaRate:
    """Return the piecewise-constant rate ``beta(t) = beta_ceil(t)`` of a schedule.

    Times at or before 0 use ``beta_1`` and times past the end use ``beta_m``.
    """
    if len(schedule) == 0:
        raise DomainError("An empty schedule has no rate")

    def rate(t: float) -> float:
        step = min(max(math.ceil(t), 1), len(schedule))
        return schedule.beta(step)

    return rate
