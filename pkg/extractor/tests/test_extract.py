import filecmp
import json

import numpy as np
import pytest

from landmark_extractor.backends import (
    FOREHEAD_CENTER,
    LEFT_CHEEK,
    NUM_LANDMARKS,
    RIGHT_CHEEK,
    CentroidTemplateBackend,
    build_template,
    make_backend,
)
from landmark_extractor.extract import ExtractionJob, InputError, extract
from landmark_extractor.validate import validate_outputs

from samplevideos import write_oval_video


def read_records(path):
    return [json.loads(line) for line in open(path) if line.strip()]


class TestBackend:
    def test_template_shape_and_anchor_sides(self):
        template = build_template()
        assert template.shape == (NUM_LANDMARKS, 3)
        assert template[LEFT_CHEEK][0] < 0 < template[RIGHT_CHEEK][0]
        assert template[FOREHEAD_CENTER][1] < 0  # above center, y grows downward

    def test_flat_frame_undetected(self):
        backend = CentroidTemplateBackend()
        assert backend.detect(np.full((120, 160, 3), 90, dtype=np.uint8)) is None

    def test_structured_frame_detected_in_bounds(self):
        backend = CentroidTemplateBackend()
        frame = np.full((120, 160, 3), 25, dtype=np.uint8)
        frame[30:90, 50:110] = (170, 125, 105)
        points = backend.detect(frame)
        assert points is not None and points.shape == (NUM_LANDMARKS, 3)
        assert points[:, :2].min() >= 0.0 and points[:, :2].max() <= 1.0
        # centroid of the block sits near the frame center
        assert points[FOREHEAD_CENTER][0] == pytest.approx(0.5, abs=0.1)

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            make_backend("nonsense")


class TestExtract:
    def test_record_per_frame_and_schema(self, oval_video, tmp_path):
        result = extract(ExtractionJob(oval_video, tmp_path / "out", backend_name="centroid"))
        records = read_records(result.landmarks_path)
        assert len(records) == result.frame_count
        header = json.loads(result.header_path.read_text())
        assert header["frame_count"] == result.frame_count
        assert result.payload_path.stat().st_size == (
            header["width"] * header["height"] * 3 * header["frame_count"]
        )
        assert result.detected_count == result.frame_count  # oval present throughout

    def test_flat_video_all_undetected(self, flat_video, tmp_path):
        result = extract(ExtractionJob(flat_video, tmp_path / "out", backend_name="centroid"))
        records = read_records(result.landmarks_path)
        assert len(records) == result.frame_count > 0
        assert all(not r["detected"] for r in records)
        assert all(r["points"] == [] for r in records)

    def test_downsample_header_arithmetic(self, oval_video, tmp_path):
        result = extract(
            ExtractionJob(oval_video, tmp_path / "out", downsample_factor=4, backend_name="centroid")
        )
        assert (result.width, result.height) == (48, 48)  # 192/4

    def test_fps_resample_decimates(self, oval_video, tmp_path):
        full = extract(ExtractionJob(oval_video, tmp_path / "full", backend_name="centroid"))
        half = extract(
            ExtractionJob(oval_video, tmp_path / "half", target_fps=15.0, backend_name="centroid")
        )
        assert half.fps == 15.0
        assert half.frame_count == full.frame_count // 2

    def test_idempotent_outputs(self, oval_video, tmp_path):
        a = extract(ExtractionJob(oval_video, tmp_path / "a", backend_name="centroid"))
        b = extract(ExtractionJob(oval_video, tmp_path / "b", backend_name="centroid"))
        assert filecmp.cmp(a.payload_path, b.payload_path, shallow=False)
        assert filecmp.cmp(a.landmarks_path, b.landmarks_path, shallow=False)

    def test_occlusion_ranges_mark_records(self, oval_video, tmp_path):
        job = ExtractionJob(
            oval_video, tmp_path / "out", backend_name="centroid", occlusions=((10, 20),)
        )
        result = extract(job)
        records = read_records(result.landmarks_path)
        flags = [r["occluded_forehead"] for r in records]
        assert all(flags[10:20]) and not any(flags[:10]) and not any(flags[20:])

    def test_unreadable_video_is_input_error(self, tmp_path):
        missing = tmp_path / "missing.mp4"
        with pytest.raises(InputError):
            extract(ExtractionJob(missing, tmp_path / "out", backend_name="centroid"))

    def test_bad_downsample_factor(self, tmp_path):
        with pytest.raises(ValueError):
            ExtractionJob(tmp_path / "x.mp4", tmp_path / "out", downsample_factor=0)


class TestValidateOutputs:
    def test_fresh_extraction_zero_violations(self, oval_video, tmp_path):
        extract(ExtractionJob(oval_video, tmp_path / "out", backend_name="centroid"))
        report = validate_outputs(tmp_path / "out")
        assert report.ok, report.violations

    def test_truncated_payload_flagged(self, oval_video, tmp_path):
        result = extract(ExtractionJob(oval_video, tmp_path / "out", backend_name="centroid"))
        payload = result.payload_path.read_bytes()
        result.payload_path.write_bytes(payload[:-7])
        report = validate_outputs(tmp_path / "out")
        assert any("size" in v for v in report.violations)

    def test_out_of_range_landmark_flagged(self, oval_video, tmp_path):
        result = extract(ExtractionJob(oval_video, tmp_path / "out", backend_name="centroid"))
        records = read_records(result.landmarks_path)
        records[0]["points"][0][0] = 1.5
        with open(result.landmarks_path, "w") as fh:
            for r in records:
                fh.write(json.dumps(r) + "\n")
        report = validate_outputs(tmp_path / "out")
        assert any("[0, 1]" in v for v in report.violations)

    def test_missing_file_flagged(self, tmp_path):
        report = validate_outputs(tmp_path)
        assert not report.ok
