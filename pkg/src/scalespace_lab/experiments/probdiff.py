"""Forward-noising run of an image with entropy metrics."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from scalespace_lab.core.limits import (
    DEFAULT_INPUT,
    DEFAULT_MAXVAL,
    DEFAULT_RECORD_STEPS,
    DEFAULT_SEED,
    DISPLAY_RANGE,
)
from scalespace_lab.core.paths import DEFAULT_PROBDIFF_OUTDIR
from scalespace_lab.core.rng import RngStream
from scalespace_lab.core.types import CommandResult, ImageBuffer
from scalespace_lab.experiments.common import (
    ScheduleConfig,
    frame_name,
    run_command,
    select_record_steps,
    write_metric_log,
)
from scalespace_lab.fileio.display import display_metadata, to_display, write_sidecar
from scalespace_lab.fileio.metrics import MetricLog
from scalespace_lab.fileio.pnm import write_pnm
from scalespace_lab.fileio.testimage import load_input_image
from scalespace_lab.probdiff.entropy import (
    Admissibility,
    conditional_entropy,
    conditional_entropy_deficit,
    entropy_increment,
    validate_schedule,
)
from scalespace_lab.probdiff.forward import run_trajectory
from scalespace_lab.probdiff.schedule import NoiseSchedule

LOG = logging.getLogger(__name__)

COMMAND = "probdiff"
METRICS_FILE = "metrics.csv"


@dataclass(frozen=True, slots=True)
class ProbdiffRunConfig:
    """Configuration of a forward-noising run.

    Attributes:
        input_spec: PNM path or ``synthetic:WxH[xC]``
        outdir: Directory for frames, sidecars and the metric log
        schedule: Noise schedule
        record_steps: Steps whose frames are written
        seed: Seed of the noise stream
        maxval: Maxval of the noise-range frame files
        excel: Also write the metric log as a workbook
    """

    input_spec: str = DEFAULT_INPUT
    outdir: Path = DEFAULT_PROBDIFF_OUTDIR
    schedule: ScheduleConfig = field(default_factory=ScheduleConfig)
    record_steps: tuple[int, ...] = DEFAULT_RECORD_STEPS
    seed: int = DEFAULT_SEED
    maxval: int = DEFAULT_MAXVAL
    excel: bool = False


def scale_to_unit(img: ImageBuffer, maxval: int) -> ImageBuffer:
    """Map grey values ``[0, maxval]`` affinely onto ``[-1, 1]``."""
    return img.with_data(2.0 * img.data / maxval - 1.0)


def entropy_row(
    schedule: NoiseSchedule,
    step: int,
    n: int,
    admissibility: Admissibility,
) -> dict[str, float | int]:
    """Return the schedule and entropy metrics of one step ``>= 1``."""
    beta = schedule.beta(step)
    return {
        "beta": beta,
        "signal_variance": schedule.signal_variance(step),
        "noise_variance": schedule.noise_variance(step),
        "entropy_increment": entropy_increment(beta, n),
        "conditional_entropy": conditional_entropy(schedule, step, n),
        "conditional_entropy_deficit": conditional_entropy_deficit(schedule, step, n),
        "admissible": int(admissibility.admissible),
        "admissibility_margin": admissibility.margin,
    }


def _frame_stats(frame: ImageBuffer) -> dict[str, float]:
    return {
        "frame_mean": float(np.mean(frame.data)),
        "frame_variance": float(np.var(frame.data)),
    }


def _write_frames(
    config: ProbdiffRunConfig,
    image: ImageBuffer,
    input_maxval: int,
    frames: dict[int, ImageBuffer],
    schedule: NoiseSchedule,
) -> list[Path]:
    outputs: list[Path] = []
    for step, frame in frames.items():
        path = config.outdir / frame_name(step, frame.channels)
        if step == 0:
            clamped = write_pnm(image, path, input_maxval)
            metadata = display_metadata(step, input_maxval, None, clamped)
        else:
            clamped = write_pnm(to_display(frame, config.maxval), path, config.maxval)
            metadata = display_metadata(
                step,
                config.maxval,
                DISPLAY_RANGE,
                clamped,
                beta=schedule.beta(step),
                seed=config.seed,
            )
        outputs.extend((path, write_sidecar(path, metadata)))
    return outputs


def _run(config: ProbdiffRunConfig) -> list[Path]:
    LOG.info("Reading %s", config.input_spec)
    image, input_maxval = load_input_image(config.input_spec)
    schedule = config.schedule.build()
    steps = select_record_steps(config.record_steps, len(schedule))
    n = image.size
    admissibility = validate_schedule(schedule, n)

    LOG.info(
        "Running %d forward steps on %dx%dx%d",
        steps[-1],
        image.width,
        image.height,
        image.channels,
    )
    u0 = scale_to_unit(image, input_maxval)
    record = run_trajectory(u0, schedule, steps, RngStream(config.seed))
    frames = dict(zip(record.steps, record.frames, strict=True))

    outputs = _write_frames(config, image, input_maxval, frames, schedule)

    log = MetricLog()
    log.append(0, {"signal_variance": 1.0, "noise_variance": 0.0, **_frame_stats(frames[0])})
    for step in range(1, len(schedule) + 1):
        row: dict[str, float | int] = entropy_row(schedule, step, n, admissibility[step - 1])
        if step in frames:
            row.update(_frame_stats(frames[step]))
        log.append(step, row)
    outputs.extend(write_metric_log(log, config.outdir / METRICS_FILE, excel=config.excel))
    return outputs


def run_probdiff(config: ProbdiffRunConfig) -> CommandResult:
    """Noise an image along a schedule, write the recorded frames and metrics.

    Frame 0 is the input image re-emitted in its own grey values. Later
    frames live on the noise range and go through the display transform.

    Args:
        config: Run configuration

    Returns:
        Result listing every written file
    """
    return run_command(COMMAND, lambda: _run(config))
