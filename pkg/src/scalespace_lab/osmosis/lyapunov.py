"""Relative entropy of an osmosis state and a monotonicity audit of its history."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.limits import DEFAULT_GRID_SPACING
from scalespace_lab.core.types import ImageBuffer
from scalespace_lab.probdiff.entropy import Trend, sequence_trend

LOG = logging.getLogger(__name__)

DEFAULT_LYAPUNOV_SLACK = 1e-12


def relative_entropy(
    u: ImageBuffer,
    w: ImageBuffer,
    h: float = DEFAULT_GRID_SPACING,
    *,
    compensated: bool = True,
) -> float:
    """Return ``L = -h^2 * sum u ln(u / w)`` over all pixels and channels.

    With ``compensated`` the sum is correctly rounded (``math.fsum``);
    otherwise it is numpy's pairwise sum, whose error stays far below
    ``DEFAULT_LYAPUNOV_SLACK`` times the image mass.

    Raises:
        ShapeMismatchError: If u and w differ in shape
        DomainError: If u or w has a non-positive entry
    """
    if not u.same_shape(w):
        raise ShapeMismatchError("Relative entropy needs images of equal shape")
    if np.any(u.data <= 0.0) or np.any(w.data <= 0.0):
        raise DomainError("Relative entropy needs strictly positive images")
    terms = u.data * np.log(u.data / w.data)
    total = math.fsum(terms.ravel().tolist()) if compensated else float(np.sum(terms))
    return -h * h * total


@dataclass(frozen=True, slots=True)
class LyapunovAudit:
    """Monotonicity audit of a Lyapunov sequence.

    Attributes:
        direction: Measured trend of the sequence
        violations: Steps ``k`` where ``L_k - L_{k-1}`` falls below ``-slack``
        max_violation: Largest such decrease, 0 when there is none
        monotone: Whether the sequence is nondecreasing within the slack
    """

    direction: Trend
    violations: tuple[int, ...]
    max_violation: float
    monotone: bool


def audit_lyapunov(
    values: Sequence[float],
    slack: float = DEFAULT_LYAPUNOV_SLACK,
    reference: float = 1.0,
) -> LyapunovAudit:
    """Check that ``values`` never decreases by more than ``slack * reference``.

    ``reference`` scales the slack to the magnitude of the sequence, e.g. the
    total mass ``h^2 sum u`` of the evolving image.

    Differences within the slack count as flat when the direction is
    measured. With the leading minus ``L`` increases toward 0 in exact
    arithmetic; the measured direction is reported either way.
    """
    if slack < 0.0 or reference <= 0.0:
        raise DomainError("Slack must be non-negative and reference positive")
    bound = slack * reference
    diffs = np.diff(np.asarray(values, dtype=np.float64))
    violations = tuple(int(k) + 1 for k in np.flatnonzero(diffs < -bound))
    max_violation = float(-diffs.min()) if violations else 0.0
    significant = np.where(np.abs(diffs) > bound, diffs, 0.0)
    direction = sequence_trend(np.concatenate(([0.0], np.cumsum(significant))))
    if violations:
        LOG.warning(
            "Relative entropy decreased at %d steps (largest drop %.3g, measured trend %s)",
            len(violations),
            max_violation,
            direction,
        )
    return LyapunovAudit(
        direction=direction,
        violations=violations,
        max_violation=max_violation,
        monotone=not violations,
    )
