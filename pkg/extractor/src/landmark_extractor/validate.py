"""Post-extraction schema checks on the written streams.

Everything is report-based: violations accumulate into a list instead of
raising, so a caller can show all problems at once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .extract import NUM_LANDMARKS, PIXEL_FORMAT


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


def validate_outputs(output_dir: str | Path) -> ValidationReport:
    """Cross-check header, payload and landmark stream in ``output_dir``."""
    out = Path(output_dir)
    report = ValidationReport()
    header_path = out / "frames.json"
    payload_path = out / "frames.rgb"
    landmarks_path = out / "landmarks.jsonl"

    for path in (header_path, payload_path, landmarks_path):
        if not path.exists():
            report.add(f"missing output file {path.name}")
    if report.violations:
        return report

    try:
        header = json.loads(header_path.read_text())
    except json.JSONDecodeError as exc:
        report.add(f"frames.json: invalid JSON: {exc}")
        return report

    for key in ("width", "height", "fps", "frame_count", "pixel_format"):
        if key not in header:
            report.add(f"frames.json: missing key {key}")
    if report.violations:
        return report
    if header["pixel_format"] != PIXEL_FORMAT:
        report.add(f"frames.json: pixel_format {header['pixel_format']!r} != {PIXEL_FORMAT!r}")
    if min(header["width"], header["height"], header["frame_count"]) <= 0 or header["fps"] <= 0:
        report.add("frames.json: nonpositive dimension")

    expected = header["width"] * header["height"] * 3 * header["frame_count"]
    actual = payload_path.stat().st_size
    if actual != expected:
        report.add(f"frames.rgb: size {actual} != header-implied {expected}")

    count = 0
    last_ts = None
    with open(landmarks_path) as fh:
        for line_no, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                report.add(f"landmarks.jsonl:{line_no}: invalid JSON")
                count += 1
                continue
            if rec.get("frame_index") != count:
                report.add(f"landmarks.jsonl:{line_no}: frame_index {rec.get('frame_index')} != {count}")
            ts = rec.get("timestamp_s")
            if not isinstance(ts, (int, float)):
                report.add(f"landmarks.jsonl:{line_no}: missing timestamp_s")
            elif last_ts is not None and ts <= last_ts:
                report.add(f"landmarks.jsonl:{line_no}: timestamp not increasing")
            else:
                last_ts = ts
            points = rec.get("points", [])
            if rec.get("detected"):
                if len(points) != NUM_LANDMARKS:
                    report.add(f"landmarks.jsonl:{line_no}: {len(points)} points, expected {NUM_LANDMARKS}")
                else:
                    for p in points:
                        if not (0.0 <= p[0] <= 1.0 and 0.0 <= p[1] <= 1.0):
                            report.add(f"landmarks.jsonl:{line_no}: x/y outside [0, 1]")
                            break
            elif points:
                report.add(f"landmarks.jsonl:{line_no}: undetected record carries points")
            count += 1

    if count != header["frame_count"]:
        report.add(f"landmarks.jsonl: {count} records != frame_count {header['frame_count']}")
    return report
