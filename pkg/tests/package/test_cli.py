"""Tests for the CLI module."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from types import SimpleNamespace
from unittest.mock import patch

import pandas as pd
import pytest

import scalespace_lab.cli as cli
from scalespace_lab.cli import JsonFormatter, main, parse_args
from scalespace_lab.core.types import CommandResult
from scalespace_lab.experiments.common import ScheduleKind


class TestParseArgs:
    """Tests for argument parsing."""

    def test_probdiff_defaults(self) -> None:
        args = parse_args(["probdiff"])
        assert args.command == "probdiff"
        assert args.input == "synthetic:481x321x3"
        assert args.beta == 0.02
        assert args.steps == 8192
        assert args.record == (0, 1, 2, 4, 8, 32, 128, 512, 2048, 8192)
        assert args.schedule_kind is ScheduleKind.CONSTANT
        assert args.schedule is None
        assert args.outdir == Path("data/output/probdiff")
        assert args.excel is False

    def test_probdiff_options(self) -> None:
        args = parse_args(
            [
                "probdiff",
                "--input",
                "photo.pgm",
                "--schedule-kind",
                "cosine",
                "--steps",
                "100",
                "--record",
                "0, 10,100",
                "--seed",
                "7",
                "--excel",
            ]
        )
        assert args.input == "photo.pgm"
        assert args.schedule_kind is ScheduleKind.COSINE
        assert args.steps == 100
        assert args.record == (0, 10, 100)
        assert args.seed == 7
        assert args.excel is True

    def test_osmosis_defaults(self) -> None:
        args = parse_args(["osmosis"])
        assert args.guidance == "noise:42"
        assert args.tau == 1.0
        assert args.grid_spacing == 1.0
        assert args.tol == 1e-9
        assert args.max_iter == 10_000
        assert args.outdir == Path("data/output/osmosis")

    def test_fp_compare_options(self) -> None:
        args = parse_args(
            ["fp-compare", "--grid=-4,4,80", "--times", "1,2", "--theta", "0.5"]
        )
        assert args.grid == (-4.0, 4.0, 80)
        assert args.times == (1, 2)
        assert args.theta == 0.5
        assert args.samples == 100_000
        assert args.output == Path("data/output/fp_compare.csv")

    def test_entropy_report_options(self) -> None:
        args = parse_args(["entropy-report", "--schedule", "betas.txt", "--n", "12288"])
        assert args.schedule == Path("betas.txt")
        assert args.n == 12288
        assert args.output == Path("data/output/entropy_report.csv")

    def test_no_command(self) -> None:
        args = parse_args([])
        assert args.command is None

    def test_log_options(self) -> None:
        args = parse_args(["--log-level", "DEBUG", "--log-format", "json", "probdiff"])
        assert args.log_level == "DEBUG"
        assert args.log_format == "json"

    def test_log_format_default(self) -> None:
        args = parse_args(["probdiff"])
        assert args.log_format == "text"

    @pytest.mark.parametrize(
        "argv",
        [
            ["probdiff", "--beta", "1.5"],
            ["probdiff", "--beta", "0"],
            ["probdiff", "--steps", "-1"],
            ["probdiff", "--steps", "0"],
            ["probdiff", "--maxval", "0"],
            ["probdiff", "--maxval", "65536"],
            ["probdiff", "--maxval", "high"],
            ["probdiff", "--record", ","],
            ["probdiff", "--record", "1,x"],
            ["osmosis", "--tau", "0"],
            ["osmosis", "--tol", "fast"],
            ["osmosis", "--max-iter", "0"],
            ["fp-compare", "--samples", "0"],
            ["fp-compare", "--grid", "4,-4,80"],
            ["fp-compare", "--grid=-4,4"],
            ["fp-compare", "--grid=-4,4,1"],
            ["entropy-report", "--schedule-kind", "sigmoid"],
            ["entropy-report", "--n", "0"],
        ],
    )
    def test_rejects_invalid_values(self, argv: list[str]) -> None:
        with pytest.raises(SystemExit) as exc_info:
            parse_args(argv)
        assert exc_info.value.code == 2

    def test_zero_counts_name_the_range(self, capsys: pytest.CaptureFixture[str]) -> None:
        with pytest.raises(SystemExit):
            parse_args(["fp-compare", "--samples", "0"])
        assert "must be a positive integer" in capsys.readouterr().err
        with pytest.raises(SystemExit):
            parse_args(["probdiff", "--maxval", "0"])
        assert "must be an integer in 1..65535" in capsys.readouterr().err

    def test_help_lists_defaults(self) -> None:
        help_text = " ".join(cli._build_parser().format_help().split())
        assert "probdiff" in help_text
        assert "entropy-report" in help_text
        assert "--guidance noise:42" in help_text


class TestJsonFormatter:
    """Tests for structured JSON logging."""

    def test_includes_exception_traceback(self) -> None:
        try:
            raise RuntimeError("boom")
        except RuntimeError:
            exc_info = sys.exc_info()

        record = logging.LogRecord(
            name="scalespace_lab",
            level=logging.ERROR,
            pathname=__file__,
            lineno=1,
            msg="failed",
            args=(),
            exc_info=exc_info,
        )

        payload = json.loads(JsonFormatter().format(record))

        assert payload["message"] == "failed"
        assert payload["level"] == "ERROR"
        assert "RuntimeError: boom" in payload["exception"]

    def test_omits_exception_when_absent(self) -> None:
        record = logging.LogRecord(
            name="scalespace_lab",
            level=logging.INFO,
            pathname=__file__,
            lineno=1,
            msg="step %d",
            args=(3,),
            exc_info=None,
        )

        payload = json.loads(JsonFormatter().format(record))

        assert payload["message"] == "step 3"
        assert payload["logger"] == "scalespace_lab"
        assert "exception" not in payload


class TestCommandConfigs:
    """Tests for turning parsed options into run configurations."""

    def test_schedule_options_reach_the_runner(self) -> None:
        args = parse_args(
            ["entropy-report", "--schedule-kind", "linear", "--beta-start", "0.001", "--steps", "5"]
        )
        captured: list[object] = []

        def fake_run(config: object) -> CommandResult:
            captured.append(config)
            return CommandResult(success=True, command="entropy-report")

        with patch("scalespace_lab.cli.run_entropy_report", side_effect=fake_run):
            assert cli.run_entropy_report_command(args) == 0

        schedule = captured[0].schedule  # type: ignore[attr-defined]
        assert schedule.kind is ScheduleKind.LINEAR
        assert schedule.beta_start == 0.001
        assert schedule.steps == 5

    def test_osmosis_options_reach_the_runner(self) -> None:
        args = parse_args(["osmosis", "--grid-spacing", "0.5", "--max-iter", "20"])
        failed = CommandResult(success=False, command="osmosis", error="did not converge")

        with patch("scalespace_lab.cli.run_osmosis", return_value=failed) as run:
            assert cli.run_osmosis_command(args) == 1

        config = run.call_args.args[0]
        assert config.h == 0.5
        assert config.max_iter == 20

    def test_fp_compare_options_reach_the_runner(self) -> None:
        args = argparse.Namespace(
            output=Path("fp.csv"),
            beta=0.1,
            u0=-1.0,
            samples=2000,
            grid=(-5.0, 5.0, 50),
            times=(3,),
            seed=4,
            dt=0.05,
            theta=0.5,
            excel=True,
        )
        ok = CommandResult(success=True, command="fp-compare")

        with patch("scalespace_lab.cli.run_fp_compare", return_value=ok) as run:
            assert cli.run_fp_compare_command(args) == 0

        config = run.call_args.args[0]
        assert config.u0 == -1.0
        assert config.theta == 0.5
        assert config.excel is True


class TestMain:
    """Tests for main function."""

    def test_no_command_returns_success(self) -> None:
        parser = SimpleNamespace(
            parse_args=lambda _argv=None: SimpleNamespace(
                command=None, log_level="INFO", log_format="text"
            ),
            print_help=lambda: None,
        )
        with patch("scalespace_lab.cli._build_parser", return_value=parser):
            assert main([]) == 0

    def test_probdiff_command_success(self, tmp_path: Path) -> None:
        exit_code = main(
            [
                "probdiff",
                "--input",
                "synthetic:6x4",
                "--steps",
                "3",
                "--record",
                "0,3",
                "--outdir",
                str(tmp_path),
            ]
        )
        assert exit_code == 0
        assert (tmp_path / "frame_00003.pgm").exists()
        assert (tmp_path / "metrics.csv").exists()

    def test_osmosis_command_success(self, tmp_path: Path) -> None:
        exit_code = main(
            [
                "osmosis",
                "--input",
                "synthetic:5x4",
                "--record",
                "2",
                "--outdir",
                str(tmp_path),
            ]
        )
        assert exit_code == 0
        assert (tmp_path / "guidance.pgm").exists()
        assert (tmp_path / "frame_00002.pgm").exists()

    def test_fp_compare_command_success(self, tmp_path: Path) -> None:
        output = tmp_path / "fp.csv"
        exit_code = main(
            [
                "fp-compare",
                "--samples",
                "2000",
                "--grid=-6,6,120",
                "--times",
                "2",
                "--output",
                str(output),
            ]
        )
        assert exit_code == 0
        assert pd.read_csv(output)["step"].tolist() == [2]

    def test_entropy_report_command_success(self, tmp_path: Path) -> None:
        output = tmp_path / "report.csv"
        exit_code = main(
            ["entropy-report", "--steps", "10", "--n", "3", "--output", str(output), "--excel"]
        )
        assert exit_code == 0
        assert output.exists()
        assert output.with_suffix(".xlsx").exists()

    def test_missing_input_returns_error(self, tmp_path: Path) -> None:
        exit_code = main(
            [
                "probdiff",
                "--input",
                str(tmp_path / "missing.pgm"),
                "--outdir",
                str(tmp_path / "out"),
            ]
        )
        assert exit_code == 1

    def test_too_few_samples_returns_error(self, tmp_path: Path) -> None:
        exit_code = main(
            ["fp-compare", "--samples", "10", "--output", str(tmp_path / "fp.csv")]
        )
        assert exit_code == 1
        assert not (tmp_path / "fp.csv").exists()

    def test_unknown_command_returns_error(self) -> None:
        parser = SimpleNamespace(
            parse_args=lambda _argv=None: SimpleNamespace(
                command="unknown", log_level="INFO", log_format="text"
            ),
            print_help=lambda: None,
        )
        with patch("scalespace_lab.cli._build_parser", return_value=parser):
            assert main([]) == 1

    def test_main_handles_handler_exception(self) -> None:
        parser = SimpleNamespace(
            parse_args=lambda _argv=None: SimpleNamespace(
                command="probdiff", log_level="INFO", log_format="text"
            ),
            print_help=lambda: None,
        )
        with (
            patch("scalespace_lab.cli._build_parser", return_value=parser),
            patch(
                "scalespace_lab.cli.run_probdiff_command", side_effect=RuntimeError("boom")
            ),
        ):
            assert main([]) == 1

    def test_main_returns_130_on_keyboard_interrupt(self) -> None:
        parser = SimpleNamespace(
            parse_args=lambda _argv=None: SimpleNamespace(
                command="osmosis", log_level="INFO", log_format="text"
            ),
            print_help=lambda: None,
        )
        with (
            patch("scalespace_lab.cli._build_parser", return_value=parser),
            patch("scalespace_lab.cli.run_osmosis_command", side_effect=KeyboardInterrupt),
        ):
            assert main([]) == 130
