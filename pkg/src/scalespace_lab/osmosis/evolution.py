"""Implicit osmosis evolution, its steady state and a d = 0 reference."""

from __future__ import annotations

import logging
import math
from collections import deque
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from scalespace_lab.core.errors import DomainError, ShapeMismatchError, SolverError, StabilityError
from scalespace_lab.core.limits import (
    DEFAULT_GRID_SPACING,
    DEFAULT_SOLVER_MAX_ITER,
    DEFAULT_SOLVER_TOL,
    DEFAULT_TAU,
)
from scalespace_lab.core.pixels import mean_value
from scalespace_lab.core.types import FloatArray, ImageBuffer
from scalespace_lab.linalg.bicgstab import SolveReport, bicgstab
from scalespace_lab.linalg.sparse import SparseMatrixCSR
from scalespace_lab.osmosis.drift import DriftField
from scalespace_lab.osmosis.operator import OsmosisOperator, assemble_operator

LOG = logging.getLogger(__name__)

StepObserver = Callable[[int, ImageBuffer, tuple[SolveReport, ...]], None]


def _check_positive(img: ImageBuffer, name: str) -> None:
    if np.any(img.data <= 0.0):
        raise DomainError(f"{name} must be strictly positive")


def _start_vectors(history: Sequence[FloatArray]) -> FloatArray:
    """Return one solver start per channel from the last iterates, newest last.

    As ``(I - tau A) u_k = u_{k-1}`` up to the solver tolerance, starting
    from ``u_k`` leaves the residual ``u_k - u_{k-1}`` and starting from the
    extrapolation ``2 u_k - u_{k-1}`` leaves ``u_k - 2 u_{k-1} + u_{k-2}``.
    Each channel takes the start with the smaller residual. Both starts have
    the channel sums of ``u_k``.
    """
    current = history[-1]
    if len(history) < 3:
        return current
    earlier, previous = history[-3], history[-2]
    change = current - previous
    curvature = change - (previous - earlier)
    extrapolate = np.linalg.norm(curvature, axis=0) < np.linalg.norm(change, axis=0)
    starts: FloatArray = np.where(extrapolate, current + change, current)
    return starts


def _solve_channels(
    u: ImageBuffer,
    systems: Sequence[SparseMatrixCSR],
    tol: float,
    max_iter: int,
    jacobi: bool,
    starts: FloatArray | None = None,
) -> tuple[ImageBuffer, tuple[SolveReport, ...]]:
    pixels = u.data.reshape(u.pixel_count, u.channels)
    guesses = pixels if starts is None else starts
    columns = []
    reports = []
    for c, system in enumerate(systems):
        rhs = pixels[:, c]
        x, report = bicgstab(
            system, rhs, x0=guesses[:, c], tol=tol, max_iter=max_iter, jacobi=jacobi
        )
        if not report.converged:
            raise SolverError(
                f"Implicit osmosis step did not converge in channel {c}: "
                f"{report.status} after {report.iterations} iterations, "
                f"relative residual {report.final_relative_residual:.3g}",
                report,
            )
        columns.append(x)
        reports.append(report)
    return u.with_data(np.stack(columns, axis=1)), tuple(reports)


def solve_step(
    u: ImageBuffer,
    op: OsmosisOperator,
    tau: float = DEFAULT_TAU,
    tol: float = DEFAULT_SOLVER_TOL,
    max_iter: int = DEFAULT_SOLVER_MAX_ITER,
    *,
    jacobi: bool = False,
) -> tuple[ImageBuffer, tuple[SolveReport, ...]]:
    """Solve ``(I - tau A) u_next = u`` per channel and return the solver reports too.

    Each solve starts from ``u``. Without the Jacobi preconditioner every
    update direction then sums to zero, so the channel means are kept.

    Raises:
        DomainError: If tau is not positive or u is not strictly positive
        ShapeMismatchError: If u does not fit the operator
        SolverError: If a channel solve does not converge
    """
    if tau <= 0.0:
        raise DomainError("Time step tau must be positive")
    _check_positive(u, "Osmosis input")
    op.check_fits(u)
    systems = [op.system_matrix(c, tau) for c in range(op.channels)]
    return _solve_channels(u, systems, tol, max_iter, jacobi)


def implicit_step(
    u: ImageBuffer,
    op: OsmosisOperator,
    tau: float = DEFAULT_TAU,
    tol: float = DEFAULT_SOLVER_TOL,
    max_iter: int = DEFAULT_SOLVER_MAX_ITER,
) -> ImageBuffer:
    """Return ``u_next`` with ``(I - tau A) u_next = u`` in every channel.

    Raises:
        DomainError: If tau is not positive or u is not strictly positive
        ShapeMismatchError: If u does not fit the operator
        SolverError: If a channel solve does not converge
    """
    u_next, _ = solve_step(u, op, tau, tol, max_iter)
    return u_next


@dataclass(frozen=True, slots=True, eq=False)
class OsmosisTrajectory:
    """Recorded frames of an osmosis evolution.

    Attributes:
        steps: Recorded step counts, strictly increasing from 0
        frames: Image after each recorded step count
        tau: Time step size
    """

    steps: tuple[int, ...]
    frames: tuple[ImageBuffer, ...]
    tau: float

    def frame(self, step: int) -> ImageBuffer:
        """Return the frame recorded after ``step`` steps.

        Raises:
            KeyError: If ``step`` was not recorded
        """
        try:
            return self.frames[self.steps.index(step)]
        except ValueError as exc:
            raise KeyError(step) from exc


def evolve(
    f: ImageBuffer,
    d: DriftField,
    tau: float = DEFAULT_TAU,
    record_steps: Sequence[int] = (0,),
    *,
    h: float = DEFAULT_GRID_SPACING,
    tol: float = DEFAULT_SOLVER_TOL,
    max_iter: int = DEFAULT_SOLVER_MAX_ITER,
    jacobi: bool = False,
    on_step: StepObserver | None = None,
) -> OsmosisTrajectory:
    """Run implicit osmosis steps from ``f`` and record the requested frames.

    Step 0 is always recorded. ``on_step`` is called after every step with
    the step count, the new image and the channel solver reports. The system
    matrices are built once; from the third step on each solve starts from
    the previous frame or its linear extrapolation, see ``_start_vectors``.

    Raises:
        DomainError: If f is not strictly positive, tau is not positive or a
            record step is negative
        ShapeMismatchError: If d does not fit f
        SolverError: If a step does not converge
    """
    if tau <= 0.0:
        raise DomainError("Time step tau must be positive")
    if not d.matches(f):
        raise ShapeMismatchError("Drift field does not fit the initial image")
    _check_positive(f, "Initial image")
    steps = tuple(sorted({0, *record_steps}))
    if steps[0] < 0:
        raise DomainError("Record steps must be non-negative")
    op = assemble_operator(d, f.width, f.height, h)
    systems = [op.system_matrix(c, tau) for c in range(op.channels)]
    recorded = set(steps)
    frames = [f]
    u = f
    history: deque[FloatArray] = deque([f.data.reshape(f.pixel_count, f.channels)], maxlen=3)
    for step in range(1, steps[-1] + 1):
        starts = _start_vectors(history)
        u, reports = _solve_channels(u, systems, tol, max_iter, jacobi, starts)
        history.append(u.data.reshape(u.pixel_count, u.channels))
        if on_step is not None:
            on_step(step, u, reports)
        if step in recorded:
            frames.append(u)
            LOG.debug(
                "Step %d: %s iterations",
                step,
                ",".join(str(report.iterations) for report in reports),
            )
    return OsmosisTrajectory(steps=steps, frames=tuple(frames), tau=tau)


def theoretical_steady_state(f: ImageBuffer, v: ImageBuffer) -> ImageBuffer:
    """Return ``(mean(f) / mean(v)) v`` channel by channel.

    Raises:
        ShapeMismatchError: If f and v differ in shape
        DomainError: If v is not strictly positive
    """
    if not f.same_shape(v):
        raise ShapeMismatchError("Initial and guidance images must have the same shape")
    _check_positive(v, "Guidance image")
    ratio = mean_value(f) / mean_value(v)
    return v.with_data(v.data * ratio)


def explicit_homogeneous_diffusion(
    f: ImageBuffer,
    t_end: float,
    h: float = DEFAULT_GRID_SPACING,
    dt: float | None = None,
) -> ImageBuffer:
    """Integrate ``u_t = laplace(u)`` with reflecting boundaries by explicit Euler.

    Uses the 5-point stencil with edge-replicated ghost pixels and equal
    steps no longer than ``dt`` (default ``h^2 / 8``).

    Raises:
        StabilityError: If ``dt > h^2 / 4``
        DomainError: If t_end is negative
    """
    if t_end < 0.0:
        raise DomainError("t_end must be non-negative")
    limit = 0.25 * h * h
    step = 0.5 * limit if dt is None else dt
    if step <= 0.0:
        raise DomainError("dt must be positive")
    if step > limit:
        raise StabilityError(f"Explicit diffusion needs dt <= h^2/4 = {limit:.6g}, got {step:.6g}")
    count = math.ceil(t_end / step - 1e-12) if t_end > 0.0 else 0
    u = np.array(f.data)
    if count:
        step = t_end / count
    ratio = step / (h * h)
    for _ in range(count):
        padded = np.pad(u, ((1, 1), (1, 1), (0, 0)), mode="edge")
        laplace = (
            padded[:-2, 1:-1] + padded[2:, 1:-1] + padded[1:-1, :-2] + padded[1:-1, 2:] - 4.0 * u
        )
        u = u + ratio * laplace
    return f.with_data(u)
