"""Stabilised bi-conjugate gradient solver (BiCGSTAB).

Plain, unpreconditioned BiCGSTAB with two safeguards: the recursive residual
is replaced by the true residual ``b - A x`` every
``TRUE_RESIDUAL_INTERVAL`` iterations and before convergence is declared, and
a breakdown (``|rho|``, ``|r_hat . v|`` or ``|omega|`` below
``BREAKDOWN_THRESHOLD``) restarts the iteration from the current iterate with
a fresh shadow residual. A breakdown directly after a restart ends the solve
with status ``breakdown``.

Started from ``x0``, every update adds multiples of vectors whose entries sum
to zero whenever ``A`` has zero column sums plus identity, so solves of
``(I - tau A) x = u`` with ``x0 = u`` keep ``sum(x) = sum(u)`` up to rounding.
The Jacobi option rescales search directions and gives up that property.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import numpy.typing as npt

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.limits import (
    BREAKDOWN_THRESHOLD,
    DEFAULT_SOLVER_MAX_ITER,
    DEFAULT_SOLVER_TOL,
    TRUE_RESIDUAL_INTERVAL,
)
from scalespace_lab.core.types import FloatArray
from scalespace_lab.linalg.sparse import SparseMatrixCSR, matvec

LOG = logging.getLogger(__name__)


class SolveStatus(StrEnum):
    """Termination reason of an iterative solve."""

    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    BREAKDOWN = "breakdown"


@dataclass(frozen=True, slots=True)
class SolveReport:
    """Outcome of one BiCGSTAB solve.

    Attributes:
        iterations: Iterations performed
        final_relative_residual: ``||b - A x|| / ||b||`` recomputed for the returned x
        status: Termination reason
        restarts: Number of breakdown restarts
    """

    iterations: int
    final_relative_residual: float
    status: SolveStatus
    restarts: int = 0

    @property
    def converged(self) -> bool:
        """Return whether the solve reached the requested tolerance."""
        return self.status is SolveStatus.CONVERGED


def _norm(vector: FloatArray) -> float:
    return float(np.linalg.norm(vector))


def bicgstab(
    a: SparseMatrixCSR,
    b: npt.ArrayLike,
    x0: npt.ArrayLike | None = None,
    tol: float = DEFAULT_SOLVER_TOL,
    max_iter: int = DEFAULT_SOLVER_MAX_ITER,
    *,
    jacobi: bool = False,
) -> tuple[FloatArray, SolveReport]:
    """Solve ``a x = b`` iteratively.

    Args:
        a: Square system matrix
        b: Right-hand side
        x0: Initial guess (default: zero vector)
        tol: Relative residual tolerance ``||b - A x|| / ||b||``
        max_iter: Iteration limit
        jacobi: Precondition with the inverse diagonal of ``a``

    Returns:
        The final iterate and the solve report. On breakdown or iteration
        limit the iterate is the better of the last one and the best one
        whose true residual was checked.

    Raises:
        ShapeMismatchError: If ``a`` is not square or vector sizes differ
        DomainError: If ``tol`` or ``max_iter`` is out of range, or Jacobi
            preconditioning meets a zero diagonal entry
    """
    if a.rows != a.cols:
        raise ShapeMismatchError(f"BiCGSTAB needs a square matrix, got {a.shape}")
    if tol <= 0:
        raise DomainError("Tolerance must be positive")
    if max_iter < 0:
        raise DomainError("max_iter must be non-negative")
    rhs = np.asarray(b, dtype=np.float64)
    if rhs.shape != (a.rows,):
        raise ShapeMismatchError(f"Right-hand side must have length {a.rows}")
    x = np.zeros(a.rows) if x0 is None else np.array(x0, dtype=np.float64, copy=True)
    if x.shape != (a.rows,):
        raise ShapeMismatchError(f"Initial guess must have length {a.rows}")

    norm_b = _norm(rhs)
    if norm_b == 0.0:
        return np.zeros(a.rows), SolveReport(0, 0.0, SolveStatus.CONVERGED)

    inverse_diagonal: FloatArray | None = None
    if jacobi:
        diagonal = a.diagonal()
        if np.any(diagonal == 0.0):
            raise DomainError("Jacobi preconditioning needs a nonzero diagonal")
        inverse_diagonal = 1.0 / diagonal

    def precondition(vector: FloatArray) -> FloatArray:
        return vector if inverse_diagonal is None else inverse_diagonal * vector

    def true_residual(iterate: FloatArray) -> FloatArray:
        return rhs - matvec(a, iterate)

    r = true_residual(x)
    relative = _norm(r) / norm_b
    best_x, best_relative = x.copy(), relative
    if relative <= tol:
        return x, SolveReport(0, relative, SolveStatus.CONVERGED)

    r_hat = r.copy()
    p = np.zeros(a.rows)
    v = np.zeros(a.rows)
    rho_prev = alpha = omega = 1.0
    fresh = True
    restarts = 0
    iterations = 0
    status = SolveStatus.MAX_ITER

    # x, r and p are updated in place; between the half steps r holds s.
    while iterations < max_iter:
        iterations += 1
        rho = float(r_hat @ r)
        breakdown = abs(rho) < BREAKDOWN_THRESHOLD
        if not breakdown:
            if fresh:
                p = r.copy()
            else:
                beta = (rho / rho_prev) * (alpha / omega)
                p -= omega * v
                p *= beta
                p += r
            p_hat = precondition(p)
            v = matvec(a, p_hat)
            denominator = float(r_hat @ v)
            breakdown = abs(denominator) < BREAKDOWN_THRESHOLD
        if not breakdown:
            alpha = rho / denominator
            x += alpha * p_hat
            r -= alpha * v
            if _norm(r) / norm_b <= tol:
                r = true_residual(x)
                relative = _norm(r) / norm_b
                if relative <= tol:
                    status = SolveStatus.CONVERGED
                    break
                fresh = False
                breakdown = True
            else:
                s_hat = precondition(r)
                t = matvec(a, s_hat)
                tt = float(t @ t)
                omega = float(t @ r) / tt if tt > 0.0 else 0.0
                if abs(omega) < BREAKDOWN_THRESHOLD:
                    fresh = False
                    breakdown = True
                else:
                    x += omega * s_hat
                    r -= omega * t
                    rho_prev = rho
                    fresh = False

        checked = True
        if breakdown:
            if fresh:
                status = SolveStatus.BREAKDOWN
                break
            restarts += 1
            LOG.debug("BiCGSTAB breakdown at iteration %d; restarting", iterations)
            r = true_residual(x)
            r_hat = r.copy()
            rho_prev = alpha = omega = 1.0
            fresh = True
        elif iterations % TRUE_RESIDUAL_INTERVAL == 0:
            r = true_residual(x)
        else:
            checked = False

        relative = _norm(r) / norm_b
        if checked and relative < best_relative:
            best_x, best_relative = x.copy(), relative
        if relative <= tol:
            r = true_residual(x)
            relative = _norm(r) / norm_b
            if relative <= tol:
                status = SolveStatus.CONVERGED
                break

    if status is not SolveStatus.CONVERGED:
        final_relative = _norm(true_residual(x)) / norm_b
        best_true = _norm(true_residual(best_x)) / norm_b
        if best_true < final_relative:
            x, final_relative = best_x, best_true
        LOG.debug("BiCGSTAB stopped: %s after %d iterations", status, iterations)
        return x, SolveReport(iterations, final_relative, status, restarts)

    return x, SolveReport(iterations, relative, status, restarts)
