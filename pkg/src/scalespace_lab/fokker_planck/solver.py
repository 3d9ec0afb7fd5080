"""Conservative finite-volume solver for the 1-D forward equation.

Solves ``p_t = d/du J`` with ``J = (1/2) d/du (m2 p) + m1 p`` on a cell grid.
The flux through the face between cells k and k+1 is

    J = (m2[k+1] p[k+1] - m2[k] p[k]) / (2h) + m1_face (p[k] + p[k+1]) / 2

and no flux crosses the two outer faces (reflecting boundaries). Each face
flux enters its two cells with opposite signs, so the operator has zero
column sums and mass is conserved. Time stepping uses the theta scheme
``(I - theta dt L) p_new = (I + (1 - theta) dt L) p``. Theta = 1 is implicit
Euler and theta = 1/2 is Crank-Nicolson.
"""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import solve_banded

from scalespace_lab.core.errors import DomainError, StabilityError
from scalespace_lab.core.limits import BOUNDARY_MASS_LIMIT
from scalespace_lab.fokker_planck.grid import DensityGrid, GridSpec, boundary_mass

if TYPE_CHECKING:
    from scalespace_lab.core.types import FloatArray
    from scalespace_lab.fokker_planck.moments import MomentFields

LOG = logging.getLogger(__name__)

_MASS_TOLERANCE = 1e-9


def assemble_banded(spec: GridSpec, mom: MomentFields, t: float) -> FloatArray:
    """Return the tridiagonal operator in ``solve_banded`` layout ``(3, m)``.

    Row 0 holds the super-diagonal (shifted right), row 1 the diagonal and
    row 2 the sub-diagonal (shifted left).

    Raises:
        StabilityError: If ``h |m1| > m2`` at a face, which would give
            negative off-diagonal entries
    """
    h = spec.h
    centers = spec.centers()
    faces = spec.faces()
    m2 = mom.diffusion(centers, t)
    m1_face = mom.drift(faces, t)
    limit = np.minimum(m2[:-1], m2[1:])
    violation = h * np.abs(m1_face) > limit
    if np.any(violation):
        face = float(faces[violation][0])
        raise StabilityError(
            f"Cell Peclet bound h*|m1| <= m2 violated at u={face:.6g}; refine the grid"
        )
    upper = (0.5 * m2[1:] / h + 0.5 * m1_face) / h
    lower = (0.5 * m2[:-1] / h - 0.5 * m1_face) / h

    bands = np.zeros((3, spec.m))
    bands[0, 1:] = upper
    bands[2, :-1] = lower
    bands[1, :-1] -= lower
    bands[1, 1:] -= upper
    return bands


def _apply_banded(bands: FloatArray, p: FloatArray) -> FloatArray:
    result = bands[1] * p
    result[:-1] += bands[0, 1:] * p[1:]
    result[1:] += bands[2, :-1] * p[:-1]
    return result


def fp_forward_solve(
    p0: DensityGrid,
    mom: MomentFields,
    t_end: float,
    dt: float,
    theta: float = 1.0,
) -> DensityGrid:
    """Advance a density from t = 0 to ``t_end``.

    The step count is ``ceil(t_end / dt)`` with the step shortened so the
    steps end exactly at ``t_end``. Moments are evaluated at
    ``t + theta * dt`` within each step.

    Args:
        p0: Initial density with unit mass
        mom: Drift and diffusion coefficients
        t_end: Final time, non-negative
        dt: Largest allowed time step
        theta: Implicitness in [1/2, 1]

    Returns:
        The density at ``t_end``

    Raises:
        DomainError: If arguments are out of range or p0 is not normalised
        StabilityError: If the grid violates the cell Peclet bound, or an
            explicit part (theta < 1) violates ``(1 - theta) dt max|L_kk| <= 1``
    """
    if t_end < 0.0:
        raise DomainError("t_end must be non-negative")
    if dt <= 0.0:
        raise DomainError("dt must be positive")
    if not 0.5 <= theta <= 1.0:
        raise DomainError("theta must lie in [1/2, 1]")
    if abs(p0.mass() - 1.0) > _MASS_TOLERANCE:
        raise DomainError(f"Initial density must have unit mass, got {p0.mass()!r}")
    if t_end == 0.0:
        return p0

    spec = p0.spec
    steps = max(1, math.ceil(t_end / dt - 1e-12))
    step = t_end / steps
    p = np.array(p0.values)
    bands = assemble_banded(spec, mom, theta * step)
    for n in range(steps):
        if n and not mom.time_independent:
            bands = assemble_banded(spec, mom, (n + theta) * step)
        p = _theta_step(bands, p, step, theta)

    result = DensityGrid(spec, p)
    drift = abs(result.mass() - 1.0)
    LOG.debug("Solved %d steps of %.4g; mass drift %.3g", steps, step, drift)
    leaked = boundary_mass(result)
    if leaked > BOUNDARY_MASS_LIMIT:
        LOG.warning(
            "Boundary mass %.3g exceeds %.0e on [%g, %g]; widen the domain",
            leaked,
            BOUNDARY_MASS_LIMIT,
            spec.lo,
            spec.hi,
        )
    return result


def _theta_step(bands: FloatArray, p: FloatArray, dt: float, theta: float) -> FloatArray:
    explicit = 1.0 - theta
    if explicit > 0.0:
        diagonal_peak = float(np.abs(bands[1]).max())
        if explicit * dt * diagonal_peak > 1.0:
            raise StabilityError(
                f"dt={dt:.6g} exceeds the positivity bound "
                f"{1.0 / (explicit * diagonal_peak):.6g} for theta={theta}"
            )
        rhs = p + explicit * dt * _apply_banded(bands, p)
    else:
        rhs = p
    system = -theta * dt * bands
    system[1] += 1.0
    solution: FloatArray = solve_banded((1, 1), system, rhs)
    return solution
