"""Osmosis run of an image toward a guidance image, with conservation and Lyapunov metrics."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from scalespace_lab.core.errors import DomainError, ShapeMismatchError
from scalespace_lab.core.limits import (
    DEFAULT_GRID_SPACING,
    DEFAULT_GUIDANCE,
    DEFAULT_INPUT,
    DEFAULT_RECORD_STEPS,
    DEFAULT_SOLVER_MAX_ITER,
    DEFAULT_SOLVER_TOL,
    DEFAULT_TAU,
)
from scalespace_lab.core.paths import DEFAULT_OSMOSIS_OUTDIR
from scalespace_lab.core.pixels import mean_value
from scalespace_lab.core.rng import RngStream
from scalespace_lab.core.types import CommandResult, ImageBuffer
from scalespace_lab.experiments.common import (
    frame_name,
    image_suffix,
    run_command,
    select_record_steps,
    write_metric_log,
)
from scalespace_lab.fileio.display import display_metadata, write_sidecar
from scalespace_lab.fileio.metrics import MetricLog
from scalespace_lab.fileio.pnm import write_pnm
from scalespace_lab.fileio.testimage import load_input_image
from scalespace_lab.linalg.bicgstab import SolveReport
from scalespace_lab.osmosis.drift import canonical_drift
from scalespace_lab.osmosis.evolution import evolve, theoretical_steady_state
from scalespace_lab.osmosis.guidance import (
    POSITIVITY_OFFSET,
    from_positive,
    noise_guidance,
    to_positive,
)
from scalespace_lab.osmosis.lyapunov import audit_lyapunov, relative_entropy

LOG = logging.getLogger(__name__)

COMMAND = "osmosis"
METRICS_FILE = "metrics.csv"
GUIDANCE_FILE_STEM = "guidance"
NOISE_PREFIX = "noise:"


@dataclass(frozen=True, slots=True)
class OsmosisRunConfig:
    """Configuration of an osmosis run.

    Attributes:
        input_spec: PNM path or ``synthetic:WxH[xC]``
        guidance: PNM path, ``synthetic:...`` or ``noise:SEED``
        outdir: Directory for frames, sidecars and the metric log
        tau: Implicit time step
        record_steps: Steps whose frames are written; the last one ends the run
        h: Grid spacing
        tol: Relative residual tolerance of every solve
        max_iter: Iteration limit of every solve
        excel: Also write the metric log as a workbook
    """

    input_spec: str = DEFAULT_INPUT
    guidance: str = DEFAULT_GUIDANCE
    outdir: Path = DEFAULT_OSMOSIS_OUTDIR
    tau: float = DEFAULT_TAU
    record_steps: tuple[int, ...] = DEFAULT_RECORD_STEPS
    h: float = DEFAULT_GRID_SPACING
    tol: float = DEFAULT_SOLVER_TOL
    max_iter: int = DEFAULT_SOLVER_MAX_ITER
    excel: bool = False


def resolve_guidance(spec: str, like: ImageBuffer) -> ImageBuffer:
    """Return the positive guidance image for ``spec``.

    ``noise:SEED`` builds noise guidance of the shape of ``like``; anything
    else is loaded like an input image and offset into the positive range.

    Raises:
        DomainError: If the seed is not an integer
        ShapeMismatchError: If a loaded guidance image differs in shape
    """
    if spec.startswith(NOISE_PREFIX):
        seed_text = spec[len(NOISE_PREFIX) :]
        try:
            seed = int(seed_text)
        except ValueError as exc:
            raise DomainError(f"Invalid noise seed {seed_text!r}") from exc
        return noise_guidance(like.width, like.height, like.channels, RngStream(seed))
    guidance, _ = load_input_image(spec)
    if not guidance.same_shape(like):
        raise ShapeMismatchError(
            f"Guidance {guidance.width}x{guidance.height}x{guidance.channels} does not match "
            f"input {like.width}x{like.height}x{like.channels}"
        )
    return to_positive(guidance)


class _StepMetrics:
    """Collect one metric row per osmosis step.

    Rows use numpy sums; only the initial mean is correctly rounded.
    """

    def __init__(self, f: ImageBuffer, steady: ImageBuffer, h: float) -> None:
        self.log = MetricLog()
        self.entropies: list[float] = []
        self._initial_mean = mean_value(f)
        self._steady = steady
        self._h = h
        self.record(0, f, ())

    def record(self, step: int, u: ImageBuffer, reports: tuple[SolveReport, ...]) -> None:
        means = u.data.reshape(u.pixel_count, u.channels).mean(axis=0)
        entropy = relative_entropy(u, self._steady, self._h, compensated=False)
        drift = np.abs(means - self._initial_mean) / self._initial_mean
        row: dict[str, float | int] = {
            "mean_value": float(np.mean(means)),
            "mean_drift": float(drift.max()),
            "relative_entropy": entropy,
            "lyapunov_increment": entropy - self.entropies[-1] if self.entropies else 0.0,
            "distance_to_steady": float(np.abs(u.data - self._steady.data).max()),
        }
        if reports:
            row["solver_iterations"] = max(report.iterations for report in reports)
            row["solver_residual"] = max(report.final_relative_residual for report in reports)
            row["solver_restarts"] = sum(report.restarts for report in reports)
        self.entropies.append(entropy)
        self.log.append(step, row)


def _write_frame(
    path: Path,
    frame: ImageBuffer,
    maxval: int,
    step: int | None,
    **extra: float | str,
) -> list[Path]:
    clamped = write_pnm(from_positive(frame), path, maxval)
    metadata = display_metadata(
        step,
        maxval,
        None,
        clamped,
        offset=POSITIVITY_OFFSET,
        **extra,
    )
    return [path, write_sidecar(path, metadata)]


def _run(config: OsmosisRunConfig) -> list[Path]:
    LOG.info("Reading %s", config.input_spec)
    image, maxval = load_input_image(config.input_spec)
    f = to_positive(image)
    v = resolve_guidance(config.guidance, image)
    steps = select_record_steps(config.record_steps)
    drift = canonical_drift(v, config.h)
    steady = theoretical_steady_state(f, v)
    metrics = _StepMetrics(f, steady, config.h)

    LOG.info("Running %d implicit osmosis steps with tau=%g", steps[-1], config.tau)
    trajectory = evolve(
        f,
        drift,
        config.tau,
        steps,
        h=config.h,
        tol=config.tol,
        max_iter=config.max_iter,
        on_step=metrics.record,
    )
    mass = config.h * config.h * math.fsum(f.data.ravel().tolist())
    audit = audit_lyapunov(metrics.entropies, reference=mass)
    LOG.info(
        "Relative entropy trend: %s, %d violations",
        audit.direction,
        len(audit.violations),
    )

    outputs: list[Path] = []
    outputs += _write_frame(
        config.outdir / f"{GUIDANCE_FILE_STEM}{image_suffix(image.channels)}",
        v,
        maxval,
        None,
        guidance=config.guidance,
    )
    for step, frame in zip(trajectory.steps, trajectory.frames, strict=True):
        outputs += _write_frame(
            config.outdir / frame_name(step, frame.channels),
            frame,
            maxval,
            step,
            tau=config.tau,
            guidance=config.guidance,
        )
    outputs.extend(
        write_metric_log(metrics.log, config.outdir / METRICS_FILE, excel=config.excel)
    )
    return outputs


def run_osmosis(config: OsmosisRunConfig) -> CommandResult:
    """Evolve an image by osmosis toward its guidance and write frames and metrics.

    Grey values are offset by ``POSITIVITY_OFFSET`` before filtering and the
    offset is removed from every written frame.

    Args:
        config: Run configuration

    Returns:
        Result listing every written file
    """
    return run_command(COMMAND, lambda: _run(config))
