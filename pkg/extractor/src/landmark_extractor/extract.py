"""Video to toolkit streams: rgb8 payload + header and landmark JSONL.

The output formats are the facepulse external interfaces: a JSON header
sidecar ({width, height, fps, frame_count, pixel_format:
"rgb8-interleaved"}) next to a raw interleaved RGB payload, and one
landmark JSON record per frame. This package never imports facepulse; the
formats are the contract.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np

PIXEL_FORMAT = "rgb8-interleaved"
NUM_LANDMARKS = 468


class InputError(Exception):
    """Unreadable or empty input video."""


@dataclass
class ExtractionJob:
    input_path: Path
    output_dir: Path
    target_fps: float | None = None  # resample by frame decimation when below source fps
    downsample_factor: int = 1
    backend_name: str = "auto"
    occlusions: tuple[tuple[int, int], ...] = ()  # [start, end) source-frame ranges

    def __post_init__(self):
        self.input_path = Path(self.input_path)
        self.output_dir = Path(self.output_dir)
        if self.downsample_factor < 1:
            raise ValueError(f"downsample_factor must be >= 1, got {self.downsample_factor}")


@dataclass
class ExtractionResult:
    header_path: Path
    payload_path: Path
    landmarks_path: Path
    frame_count: int
    detected_count: int
    fps: float
    width: int
    height: int


def load_occlusion_ranges(path: str | Path) -> tuple[tuple[int, int], ...]:
    """Manual annotation file: [{"start_frame": int, "end_frame": int}, ...]
    with end exclusive, indices into the source video."""
    ranges = json.loads(Path(path).read_text())
    return tuple((int(r["start_frame"]), int(r["end_frame"])) for r in ranges)


def _is_occluded(frame_index: int, ranges) -> bool:
    return any(start <= frame_index < end for start, end in ranges)


def _block_average(frame: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return frame
    h, w = frame.shape[:2]
    h -= h % factor
    w -= w % factor
    cropped = frame[:h, :w].astype(np.float64)
    blocks = cropped.reshape(h // factor, factor, w // factor, factor, 3)
    return np.clip(np.rint(blocks.mean(axis=(1, 3))), 0, 255).astype(np.uint8)


def extract(job: ExtractionJob, backend=None) -> ExtractionResult:
    """Decode the video, run the landmark backend per frame, write streams.

    Frames are emitted in source order; when ``target_fps`` is set below
    the source rate, frames are decimated to approximate it and the header
    carries the target rate. Landmarks are detected on the full-resolution
    frame before any spatial downsampling, so positions stay exact.
    """
    if backend is None:
        from .backends import make_backend

        backend = make_backend(job.backend_name)

    cap = cv2.VideoCapture(str(job.input_path))
    if not cap.isOpened():
        raise InputError(f"cannot open video {job.input_path}")
    source_fps = cap.get(cv2.CAP_PROP_FPS)
    if source_fps <= 0:
        source_fps = 30.0
    out_fps = source_fps
    ratio = 1.0
    if job.target_fps is not None and 0 < job.target_fps < source_fps:
        out_fps = job.target_fps
        ratio = job.target_fps / source_fps

    job.output_dir.mkdir(parents=True, exist_ok=True)
    header_path = job.output_dir / "frames.json"
    payload_path = job.output_dir / "frames.rgb"
    landmarks_path = job.output_dir / "landmarks.jsonl"

    out_index = 0
    detected_count = 0
    out_w = out_h = None
    with open(payload_path, "wb") as payload, open(landmarks_path, "w") as lm_file:
        source_index = -1
        while True:
            ok, frame_bgr = cap.read()
            if not ok:
                break
            source_index += 1
            if ratio < 1.0 and int((source_index + 1) * ratio) == int(source_index * ratio):
                continue
            frame_rgb = np.ascontiguousarray(frame_bgr[:, :, ::-1])
            points = backend.detect(frame_rgb)
            out_frame = _block_average(frame_rgb, job.downsample_factor)
            if out_w is None:
                out_h, out_w = out_frame.shape[:2]
            payload.write(out_frame.tobytes())

            record = {
                "frame_index": out_index,
                "timestamp_s": out_index / out_fps,
                "detected": points is not None,
                "occluded_forehead": _is_occluded(source_index, job.occlusions),
                "points": [] if points is None else [[float(v) for v in p] for p in points],
            }
            lm_file.write(json.dumps(record, separators=(",", ":")) + "\n")
            if points is not None:
                detected_count += 1
            out_index += 1
    cap.release()
    if out_index == 0:
        payload_path.unlink(missing_ok=True)
        landmarks_path.unlink(missing_ok=True)
        raise InputError(f"{job.input_path} contains no frames")

    header = {
        "width": out_w,
        "height": out_h,
        "fps": out_fps,
        "frame_count": out_index,
        "pixel_format": PIXEL_FORMAT,
    }
    header_path.write_text(json.dumps(header, indent=2) + "\n")
    return ExtractionResult(
        header_path=header_path,
        payload_path=payload_path,
        landmarks_path=landmarks_path,
        frame_count=out_index,
        detected_count=detected_count,
        fps=out_fps,
        width=out_w,
        height=out_h,
    )
