"""Finite-difference residuals of the forward and backward equations.

The closed-form transition density of the continuous-time chain is
Gaussian in both of its state arguments. Plugging it into second-order
central differences of either equation leaves a residual of order h^2
(the time difference uses a step equal to h).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Protocol

import numpy as np
import numpy.typing as npt
from scipy.integrate import quad

from scalespace_lab.core.errors import DomainError
from scalespace_lab.fokker_planck.moments import BetaRate, constant_rate

if TYPE_CHECKING:
    from scalespace_lab.core.types import FloatArray
    from scalespace_lab.fokker_planck.grid import GridSpec
    from scalespace_lab.fokker_planck.moments import MomentFields


class TransitionDensity(Protocol):
    """Density ``p(u, t | u_tau, tau)`` of a transition from ``(u_tau, tau)`` to ``(u, t)``."""

    def __call__(
        self,
        u: npt.ArrayLike,
        u_tau: npt.ArrayLike,
        tau: float,
        t: float,
    ) -> FloatArray:
        """Evaluate the density, broadcasting ``u`` against ``u_tau``."""
        ...


@dataclass(frozen=True, slots=True)
class GaussianKernel:
    """Transition density of ``du = -(beta(t) / 2) u dt + sqrt(beta(t)) dW``.

    Started at ``u_tau``, the state at time t is normal with mean
    ``exp(-B / 2) u_tau`` and variance ``1 - exp(-B)``, where B is the
    integral of beta over ``[tau, t]``.

    Attributes:
        beta_rate: Noise rate as a function of time
        constant_beta: The rate when it does not depend on time
    """

    beta_rate: BetaRate
    constant_beta: float | None = None

    @classmethod
    def constant(cls, beta: float) -> GaussianKernel:
        """Return the kernel for a time-independent rate."""
        if beta <= 0.0:
            raise DomainError("beta rate must be positive")
        return cls(constant_rate(beta), beta)

    def integrated_rate(self, tau: float, t: float) -> float:
        """Return the integral of beta over ``[tau, t]``."""
        if self.constant_beta is not None:
            return self.constant_beta * (t - tau)
        value, _ = quad(self.beta_rate, tau, t)
        return float(value)

    def mean_factor(self, tau: float, t: float) -> float:
        """Return ``exp(-B / 2)``."""
        return math.exp(-0.5 * self.integrated_rate(tau, t))

    def variance(self, tau: float, t: float) -> float:
        """Return ``1 - exp(-B)``."""
        return -math.expm1(-self.integrated_rate(tau, t))

    def __call__(
        self,
        u: npt.ArrayLike,
        u_tau: npt.ArrayLike,
        tau: float,
        t: float,
    ) -> FloatArray:
        """Evaluate the transition density.

        Raises:
            DomainError: If ``t <= tau``
        """
        if t <= tau:
            raise DomainError("The transition density needs t > tau")
        variance = self.variance(tau, t)
        mean = self.mean_factor(tau, t) * np.asarray(u_tau, dtype=np.float64)
        z = np.asarray(u, dtype=np.float64) - mean
        density: FloatArray = np.exp(-0.5 * z * z / variance) / math.sqrt(
            2.0 * math.pi * variance
        )
        return density


@dataclass(frozen=True, slots=True)
class ResidualNorms:
    """Size of a PDE residual on the interior cells of a grid.

    Attributes:
        max_norm: Largest absolute residual
        l2_norm: ``sqrt(h * sum r^2)``
        h: Cell width the residual was measured with
    """

    max_norm: float
    l2_norm: float
    h: float


def _norms(residual: FloatArray, h: float) -> ResidualNorms:
    return ResidualNorms(
        max_norm=float(np.abs(residual).max()),
        l2_norm=math.sqrt(h * float(np.sum(residual * residual))),
        h=h,
    )


def _on_grid(values: FloatArray, shape: tuple[int, ...]) -> FloatArray:
    return np.broadcast_to(np.asarray(values, dtype=np.float64), shape)


def fp_backward_residual(
    kernel: TransitionDensity,
    mom: MomentFields,
    spec: GridSpec,
    tau: float,
    t: float,
    u: float = 0.0,
) -> ResidualNorms:
    """Measure the backward-equation residual of ``kernel`` in ``(u_tau, tau)``.

    Evaluates ``p_tau + (1/2) m2 p'' - m1 p'`` with the target state ``u`` and
    time ``t`` held fixed, on the interior cell centres.

    Raises:
        DomainError: If ``tau + h >= t``
    """
    h = spec.h
    if tau + h >= t:
        raise DomainError("The backward residual needs tau + h < t")
    x = spec.centers()
    p = _on_grid(kernel(u, x, tau, t), x.shape)
    later = _on_grid(kernel(u, x, tau + h, t), x.shape)
    earlier = _on_grid(kernel(u, x, tau - h, t), x.shape)
    d_tau = (later - earlier)[1:-1] / (2.0 * h)
    d1 = (p[2:] - p[:-2]) / (2.0 * h)
    d2 = (p[2:] - 2.0 * p[1:-1] + p[:-2]) / (h * h)
    inner = x[1:-1]
    residual = d_tau + 0.5 * mom.diffusion(inner, tau) * d2 - mom.drift(inner, tau) * d1
    return _norms(residual, h)


def fp_forward_residual(
    kernel: TransitionDensity,
    mom: MomentFields,
    spec: GridSpec,
    tau: float,
    t: float,
    u_tau: float = 0.0,
) -> ResidualNorms:
    """Measure the forward-equation residual of ``kernel`` in ``(u, t)``.

    Evaluates ``p_t - (1/2) (m2 p)'' - (m1 p)'`` with the source state
    ``u_tau`` and time ``tau`` held fixed, on the interior cell centres.

    Raises:
        DomainError: If ``t - h <= tau``
    """
    h = spec.h
    if t - h <= tau:
        raise DomainError("The forward residual needs t - h > tau")
    x = spec.centers()
    p = _on_grid(kernel(x, u_tau, tau, t), x.shape)
    later = _on_grid(kernel(x, u_tau, tau, t + h), x.shape)
    earlier = _on_grid(kernel(x, u_tau, tau, t - h), x.shape)
    d_t = (later - earlier)[1:-1] / (2.0 * h)
    diffusive = mom.diffusion(x, t) * p
    advective = mom.drift(x, t) * p
    d2 = (diffusive[2:] - 2.0 * diffusive[1:-1] + diffusive[:-2]) / (h * h)
    d1 = (advective[2:] - advective[:-2]) / (2.0 * h)
    residual = d_t - 0.5 * d2 - d1
    return _norms(residual, h)


def observed_order(errors: npt.ArrayLike, ratio: float = 2.0) -> FloatArray:
    """Return ``log(e_k / e_(k+1)) / log(ratio)`` for successive refinements.

    Raises:
        DomainError: If fewer than two errors are given or any is not positive
    """
    values = np.asarray(errors, dtype=np.float64).ravel()
    if values.size < 2:
        raise DomainError("An observed order needs at least two errors")
    if np.any(values <= 0.0):
        raise DomainError("Errors must be positive to measure an order")
    orders: FloatArray = np.log(values[:-1] / values[1:]) / math.log(ratio)
    return orders
