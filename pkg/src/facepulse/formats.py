"""On-disk stream formats.

Frame streams are a JSON header sidecar plus a raw interleaved RGB8
payload; no container or codec, so golden tests stay bit-exact and
down-sampling experiments are pure pixel arithmetic. Landmark streams are
newline-delimited JSON, one record per frame (see landmarks module for the
record schema).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import FormatError, SchemaError, TruncatedStreamError
from .landmarks import LandmarkSet, landmark_record_json, parse_landmark_frame

PIXEL_FORMAT = "rgb8-interleaved"


@dataclass(frozen=True)
class FrameStreamHeader:
    width: int
    height: int
    fps: float
    frame_count: int
    pixel_format: str = PIXEL_FORMAT

    @property
    def frame_bytes(self) -> int:
        return self.width * self.height * 3


def write_header(path: str | Path, header: FrameStreamHeader) -> None:
    Path(path).write_text(json.dumps(asdict(header), indent=2) + "\n")


def read_header(path: str | Path) -> FrameStreamHeader:
    try:
        obj = json.loads(Path(path).read_text())
        header = FrameStreamHeader(
            width=int(obj["width"]),
            height=int(obj["height"]),
            fps=float(obj["fps"]),
            frame_count=int(obj["frame_count"]),
            pixel_format=str(obj.get("pixel_format", "")),
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: invalid frame stream header: {exc}") from exc
    if header.pixel_format != PIXEL_FORMAT:
        raise FormatError(
            f"{path}: unknown pixel_format {header.pixel_format!r}, expected {PIXEL_FORMAT!r}"
        )
    if header.width <= 0 or header.height <= 0 or header.frame_count < 0 or header.fps <= 0:
        raise FormatError(f"{path}: nonpositive header dimensions")
    return header


def write_frame_stream(
    header_path: str | Path,
    payload_path: str | Path,
    frames: Iterable[np.ndarray],
    fps: float,
) -> FrameStreamHeader:
    """Write frames to a payload file and its header sidecar.

    All frames must be (H, W, 3) uint8 with identical shapes.
    """
    count = 0
    shape = None
    with open(payload_path, "wb") as fh:
        for frame in frames:
            frame = np.asarray(frame)
            if frame.dtype != np.uint8 or frame.ndim != 3 or frame.shape[2] != 3:
                raise FormatError(f"frame {count}: expected (H, W, 3) uint8, got {frame.dtype} {frame.shape}")
            if shape is None:
                shape = frame.shape
            elif frame.shape != shape:
                raise FormatError(f"frame {count}: shape {frame.shape} != first frame {shape}")
            fh.write(frame.tobytes())
            count += 1
    if shape is None:
        raise FormatError("cannot write an empty frame stream")
    header = FrameStreamHeader(width=shape[1], height=shape[0], fps=fps, frame_count=count)
    write_header(header_path, header)
    return header


def read_frame_stream(
    header_path: str | Path, payload_path: str | Path
) -> tuple[FrameStreamHeader, Iterator[tuple[int, float, np.ndarray]]]:
    """Open a frame stream; yields (frame_index, timestamp_s, frame).

    The payload size must equal frame_count * width * height * 3 bytes or
    TruncatedStreamError is raised before any frame is yielded.
    """
    header = read_header(header_path)
    payload_path = Path(payload_path)
    size = payload_path.stat().st_size
    expected = header.frame_count * header.frame_bytes
    if size != expected:
        raise TruncatedStreamError(
            f"{payload_path}: payload is {size} bytes, header implies {expected}"
        )

    def frames() -> Iterator[tuple[int, float, np.ndarray]]:
        with open(payload_path, "rb") as fh:
            for i in range(header.frame_count):
                buf = fh.read(header.frame_bytes)
                frame = np.frombuffer(buf, dtype=np.uint8).reshape(header.height, header.width, 3)
                yield i, i / header.fps, frame

    return header, frames()


def write_landmark_stream(path: str | Path, landmark_sets: Iterable[LandmarkSet]) -> int:
    n = 0
    with open(path, "w") as fh:
        for lms in landmark_sets:
            fh.write(landmark_record_json(lms) + "\n")
            n += 1
    return n


def read_landmark_stream(path: str | Path) -> Iterator[LandmarkSet]:
    """Parse a landmark stream, enforcing strictly increasing timestamps."""
    last_ts = None
    with open(path) as fh:
        for line_number, line in enumerate(fh):
            if not line.strip():
                continue
            lms = parse_landmark_frame(line, line_number=line_number)
            if last_ts is not None and lms.timestamp_s <= last_ts:
                raise SchemaError(
                    f"frame {lms.frame_index}: timestamp {lms.timestamp_s} not "
                    f"after previous {last_ts}"
                )
            last_ts = lms.timestamp_s
            yield lms


def block_downsample(frame: np.ndarray, factor: int) -> np.ndarray:
    """Average factor x factor pixel blocks and round back to rgb8.

    Frame dimensions must be divisible by the factor.
    """
    if factor < 1:
        raise FormatError(f"downsample factor must be >= 1, got {factor}")
    if factor == 1:
        return frame
    h, w = frame.shape[:2]
    if h % factor or w % factor:
        raise FormatError(f"frame {w}x{h} not divisible by factor {factor}")
    blocks = frame.reshape(h // factor, factor, w // factor, factor, 3).astype(np.float64)
    means = blocks.mean(axis=(1, 3))
    return np.clip(np.rint(means), 0, 255).astype(np.uint8)
