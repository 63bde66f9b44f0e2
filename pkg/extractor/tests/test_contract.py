"""Cross-package contract: extractor outputs must be consumable by the
facepulse CLI without error. The boundary is exercised through a real
subprocess so no Python-level imports leak across it."""

import json
import subprocess
import sys

import pytest

from landmark_extractor.cli import cli_main
from landmark_extractor.extract import ExtractionJob, extract
from landmark_extractor.validate import validate_outputs

from samplevideos import write_oval_video


def facepulse_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "facepulse.cli", *args],
        capture_output=True,
        text=True,
    )


class TestPrimaryContract:
    def test_outputs_feed_primary_extract(self, tmp_path):
        # 12 s of video so the primary has a full heart-rate window
        video = write_oval_video(tmp_path / "clip.mp4", n_frames=360)
        out = tmp_path / "streams"
        result = extract(ExtractionJob(video, out, backend_name="centroid"))
        assert result.frame_count == 360

        report = validate_outputs(out)
        assert report.ok, report.violations

        report_path = tmp_path / "hr.json"
        proc = facepulse_cli(
            "extract",
            "--frames", str(out / "frames.json"),
            "--payload", str(out / "frames.rgb"),
            "--landmarks", str(out / "landmarks.jsonl"),
            "--out", str(report_path),
        )
        assert proc.returncode == 0, proc.stderr
        hr_report = json.loads(report_path.read_text())
        assert hr_report["n_detected"] == 360
        assert len(hr_report["roi_timeline"]) == 360

    def test_undetected_streams_give_clean_insufficient_exit(self, flat_video, tmp_path):
        out = tmp_path / "streams"
        cli_main(["--input", str(flat_video), "--out", str(out), "--backend", "centroid"])
        proc = facepulse_cli(
            "extract",
            "--frames", str(out / "frames.json"),
            "--payload", str(out / "frames.rgb"),
            "--landmarks", str(out / "landmarks.jsonl"),
            "--out", str(tmp_path / "hr.json"),
        )
        assert proc.returncode == 3  # insufficient data, not a crash


class TestCli:
    def test_happy_path_exit_zero(self, oval_video, tmp_path):
        code = cli_main(
            ["--input", str(oval_video), "--out", str(tmp_path / "out"), "--backend", "centroid"]
        )
        assert code == 0

    def test_missing_input_exit_one(self, tmp_path):
        code = cli_main(
            ["--input", str(tmp_path / "nope.mp4"), "--out", str(tmp_path / "out")]
        )
        assert code == 1

    def test_downsample_flag(self, oval_video, tmp_path, capsys):
        code = cli_main(
            [
                "--input", str(oval_video),
                "--out", str(tmp_path / "out"),
                "--backend", "centroid",
                "--downsample", "2",
            ]
        )
        assert code == 0
        header = json.loads((tmp_path / "out" / "frames.json").read_text())
        assert (header["width"], header["height"]) == (96, 96)
