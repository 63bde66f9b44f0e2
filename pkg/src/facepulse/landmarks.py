"""Per-frame facial landmark records: parsing, head yaw, forehead visibility.

A landmark stream is newline-delimited JSON, one record per frame:

    {"frame_index": 0, "timestamp_s": 0.0, "detected": true,
     "occluded_forehead": false, "points": [[x, y, z], ...]}

``points`` holds 468 entries. ``x`` and ``y`` are normalized image
coordinates in [0, 1] (x grows rightward, y downward); ``z`` is relative
depth on the same scale as ``x``, signed so that larger values are nearer
the camera. Region names follow image coordinates: the "left" cheek is the
one at smaller x in an unmirrored stream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import LandmarkParseError, NoFaceError, SchemaError

NUM_LANDMARKS = 468

# Mesh indices of the three ROI anchor points.
FOREHEAD_CENTER = 151
LEFT_CHEEK = 50
RIGHT_CHEEK = 280


@dataclass(frozen=True)
class LandmarkSet:
    """One frame's facial landmarks.

    ``points`` is a (468, 3) float array when ``detected`` is true and an
    empty (0, 3) array otherwise.
    """

    frame_index: int
    timestamp_s: float
    points: np.ndarray
    detected: bool
    occluded_forehead: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3:
            pts = pts.reshape(-1, 3)
        object.__setattr__(self, "points", pts)


def parse_landmark_frame(record: bytes | str, line_number: int | None = None) -> LandmarkSet:
    """Parse one landmark-stream record.

    Raises LandmarkParseError for unparseable records and SchemaError for
    records that parse but violate the schema (wrong point count, x/y out
    of [0, 1], non-finite values). Error messages name the frame index when
    one is known, falling back to the supplied line number.
    """
    label = f"line {line_number}" if line_number is not None else "record"
    if isinstance(record, bytes):
        record = record.decode("utf-8", errors="replace")
    try:
        obj = json.loads(record)
    except json.JSONDecodeError as exc:
        raise LandmarkParseError(f"{label}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise LandmarkParseError(f"{label}: record must be a JSON object")

    frame_index = obj.get("frame_index")
    if frame_index is not None:
        label = f"frame {frame_index}"
    try:
        frame_index = int(frame_index)
        timestamp_s = float(obj["timestamp_s"])
        detected = bool(obj["detected"])
    except (KeyError, TypeError, ValueError) as exc:
        raise LandmarkParseError(f"{label}: missing or invalid field: {exc}") from exc
    occluded = bool(obj.get("occluded_forehead", False))

    raw_points = obj.get("points", [])
    if not detected:
        if raw_points:
            raise SchemaError(f"{label}: detected=false record must carry no points")
        return LandmarkSet(frame_index, timestamp_s, np.empty((0, 3)), False, occluded)

    points = np.asarray(raw_points, dtype=np.float64)
    if points.ndim != 2 or points.shape != (NUM_LANDMARKS, 3):
        got = points.shape[0] if points.ndim == 2 else "malformed"
        raise SchemaError(f"{label}: expected {NUM_LANDMARKS} [x, y, z] points, got {got}")
    if not np.all(np.isfinite(points)):
        raise SchemaError(f"{label}: non-finite landmark coordinates")
    xy = points[:, :2]
    if xy.min() < 0.0 or xy.max() > 1.0:
        raise SchemaError(f"{label}: x/y coordinates outside [0, 1]")
    return LandmarkSet(frame_index, timestamp_s, points, True, occluded)


def landmark_record_json(lms: LandmarkSet) -> str:
    """Serialize a LandmarkSet to one landmark-stream line (no newline)."""
    obj = {
        "frame_index": int(lms.frame_index),
        "timestamp_s": float(lms.timestamp_s),
        "detected": bool(lms.detected),
        "occluded_forehead": bool(lms.occluded_forehead),
        "points": [[float(v) for v in p] for p in lms.points] if lms.detected else [],
    }
    return json.dumps(obj, separators=(",", ":"))


def estimate_yaw(lms: LandmarkSet) -> float:
    """Head yaw in degrees from the two cheek landmarks.

    Sign convention: positive when the head is turned so the left cheek is
    nearer the camera. Computed as the angle between the cheek-to-cheek
    depth difference and their in-image separation:

        yaw = atan2(z_left - z_right, signed ||p_right - p_left||_xy)

    where the lateral separation carries the sign of (x_right - x_left).
    Invariant to uniform scaling and translation; flips sign exactly when
    the landmark set is horizontally mirrored (with the cheek pair swapped,
    as a detector would relabel it). Anatomically valid input keeps the
    result within (-90, 90).
    """
    if not lms.detected:
        raise NoFaceError("cannot estimate yaw: no detected face in frame")
    left = lms.points[LEFT_CHEEK]
    right = lms.points[RIGHT_CHEEK]
    dx = right[0] - left[0]
    dy = right[1] - left[1]
    lateral = math.copysign(math.hypot(dx, dy), dx)
    return math.degrees(math.atan2(left[2] - right[2], lateral))


def landmark_rect(point: np.ndarray, frame_w: int, frame_h: int, size: int) -> tuple[int, int, int, int]:
    """Square pixel rect of side ``size`` centered on a normalized landmark.

    The center is rounded to the nearest pixel before the square is placed;
    no sub-pixel interpolation. The rect may extend outside the frame; use
    rect_in_frame to check containment.
    """
    cx = int(np.rint(point[0] * frame_w))
    cy = int(np.rint(point[1] * frame_h))
    return (cx - size // 2, cy - size // 2, size, size)


def rect_in_frame(rect: tuple[int, int, int, int], frame_w: int, frame_h: int) -> bool:
    x0, y0, w, h = rect
    return x0 >= 0 and y0 >= 0 and x0 + w <= frame_w and y0 + h <= frame_h


def forehead_visible(lms: LandmarkSet, frame_w: int, frame_h: int, roi_size: int) -> bool:
    """True when the forehead ROI fits inside the frame and is not occluded.

    Geometric containment handles frame-exit cases; occlusion by hair or
    headwear cannot be decided from geometry alone, so the record's
    ``occluded_forehead`` flag (supplied by the upstream extractor) vetoes
    visibility. Shrinking ``roi_size`` never flips the result to false.
    """
    if not lms.detected:
        raise NoFaceError("cannot check forehead visibility: no detected face in frame")
    if lms.occluded_forehead:
        return False
    rect = landmark_rect(lms.points[FOREHEAD_CENTER], frame_w, frame_h, roi_size)
    return rect_in_frame(rect, frame_w, frame_h)
