import csv
import json

import numpy as np
import pytest

from facepulse.cli import cli_main
from facepulse.pipeline import HrReport


def run_synth(tmp_path, name="clip", **over):
    args = {
        "--seed": "7",
        "--hr": "72",
        "--duration": "12",
        "--noise-sd": "2",
    }
    args.update(over)
    out = tmp_path / name
    argv = ["synth", "--out", str(out)]
    for k, v in args.items():
        argv += [k, v]
    assert cli_main(argv) == 0
    return out


class TestSynthCommand:
    def test_writes_all_files(self, tmp_path):
        out = run_synth(tmp_path)
        for name in ("frames.json", "frames.rgb", "landmarks.jsonl", "truth.json"):
            assert (out / name).exists()
        header = json.loads((out / "frames.json").read_text())
        assert header["frame_count"] == 360
        truth = json.loads((out / "truth.json").read_text())
        assert truth["hr_bpm"] == 72.0
        assert len(truth["peak_times_s"]) in (14, 15)

    def test_bad_yaw_profile_is_usage_error(self, tmp_path):
        code = cli_main(
            ["synth", "--out", str(tmp_path / "x"), "--seed", "1", "--yaw-profile", "nonsense"]
        )
        assert code == 2


class TestExtractCommand:
    def test_happy_path(self, tmp_path, capsys):
        out = run_synth(tmp_path)
        report_path = tmp_path / "report.json"
        code = cli_main(
            [
                "extract",
                "--frames", str(out / "frames.json"),
                "--payload", str(out / "frames.rgb"),
                "--landmarks", str(out / "landmarks.jsonl"),
                "--out", str(report_path),
            ]
        )
        assert code == 0
        report = HrReport.from_json(report_path.read_text())
        assert report.video_hr_bpm == pytest.approx(72.0, abs=1.5)
        assert "video_hr_bpm" in capsys.readouterr().out

    def test_missing_file_is_data_error(self, tmp_path):
        code = cli_main(
            [
                "extract",
                "--frames", str(tmp_path / "no.json"),
                "--payload", str(tmp_path / "no.rgb"),
                "--landmarks", str(tmp_path / "no.jsonl"),
                "--out", str(tmp_path / "r.json"),
            ]
        )
        assert code == 1

    def test_too_short_stream_is_insufficient(self, tmp_path):
        out = run_synth(tmp_path, **{"--duration": "3"})
        code = cli_main(
            [
                "extract",
                "--frames", str(out / "frames.json"),
                "--payload", str(out / "frames.rgb"),
                "--landmarks", str(out / "landmarks.jsonl"),
                "--out", str(tmp_path / "r.json"),
            ]
        )
        assert code == 3

    def test_config_file_with_flag_override(self, tmp_path):
        out = run_synth(tmp_path)
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"hr_window_s": 6.0, "roi_size": 24}))
        report_path = tmp_path / "report.json"
        code = cli_main(
            [
                "extract",
                "--frames", str(out / "frames.json"),
                "--payload", str(out / "frames.rgb"),
                "--landmarks", str(out / "landmarks.jsonl"),
                "--out", str(report_path),
                "--config", str(config),
                "--hr-window", "4.0",
            ]
        )
        assert code == 0
        report = HrReport.from_json(report_path.read_text())
        assert len(report.estimates) == 3  # 12 s / 4 s windows


class TestEvalCommand:
    def write_csv(self, path, rows):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["subject", "hr_bpm"])
            writer.writerows(rows)

    def test_happy_path(self, tmp_path):
        est = tmp_path / "est.csv"
        truth = tmp_path / "truth.csv"
        self.write_csv(est, [("a", 72.0), ("b", 81.0)])
        self.write_csv(truth, [("a", 70.0), ("b", 80.0)])
        out = tmp_path / "eval.json"
        rows = tmp_path / "rows.csv"
        code = cli_main(
            ["eval", "--estimates", str(est), "--truth", str(truth), "--out", str(out), "--csv", str(rows)]
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["mae_bpm"] == pytest.approx(1.5)
        assert rows.exists()

    def test_key_mismatch_is_data_error(self, tmp_path):
        est = tmp_path / "est.csv"
        truth = tmp_path / "truth.csv"
        self.write_csv(est, [("a", 72.0)])
        self.write_csv(truth, [("b", 80.0)])
        code = cli_main(["eval", "--estimates", str(est), "--truth", str(truth), "--out", str(tmp_path / "o.json")])
        assert code == 1


class TestPsdCommand:
    def test_writes_spectra_csv(self, tmp_path):
        out = run_synth(tmp_path)
        spectra = tmp_path / "spectra.csv"
        code = cli_main(
            [
                "psd",
                "--frames", str(out / "frames.json"),
                "--payload", str(out / "frames.rgb"),
                "--landmarks", str(out / "landmarks.jsonl"),
                "--out", str(spectra),
            ]
        )
        assert code == 0
        with open(spectra) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["freq_hz", "welch_power", "csd_magnitude"]
        freqs = [float(r[0]) for r in rows[1:]]
        welch = [float(r[1]) for r in rows[1:]]
        in_band = [(f, p) for f, p in zip(freqs, welch) if 0.7 <= f <= 4.0]
        peak_freq = max(in_band, key=lambda fp: fp[1])[0]
        assert peak_freq == pytest.approx(1.2, abs=0.15)


class TestBenchCommand:
    def test_reports_throughput(self, capsys):
        code = cli_main(["bench", "--duration", "10", "--seed", "3"])
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["frames"] == 300
        assert out["frames_per_s"] > 0


class TestUsage:
    def test_unknown_subcommand_exits_2(self, capsys):
        assert cli_main(["frobnicate"]) == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_no_subcommand_exits_2(self):
        assert cli_main([]) == 2
