"""Adaptive ROI selection and spatial RGB averaging.

The selection rule: the forehead ROI wins whenever it is visible; when it
is occluded the head yaw decides which cheek to fall back to (right cheek
for yaw above the threshold, left cheek otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import FormatError, NoFaceError, RoiOutOfBoundsError
from .landmarks import (
    FOREHEAD_CENTER,
    LEFT_CHEEK,
    RIGHT_CHEEK,
    LandmarkSet,
    forehead_visible,
    landmark_rect,
    rect_in_frame,
)


class Region(str, Enum):
    FOREHEAD = "forehead"
    LEFT_CHEEK = "left_cheek"
    RIGHT_CHEEK = "right_cheek"


REGION_LANDMARK = {
    Region.FOREHEAD: FOREHEAD_CENTER,
    Region.LEFT_CHEEK: LEFT_CHEEK,
    Region.RIGHT_CHEEK: RIGHT_CHEEK,
}


@dataclass(frozen=True)
class RoiConfig:
    """ROI hyper-parameters. ``roi_size`` is the square side in pixels and
    should be set relative to the video's frame size."""

    roi_size: int = 40
    yaw_threshold_deg: float = 15.0


@dataclass(frozen=True)
class RoiSelection:
    region: Region
    rect: tuple[int, int, int, int]  # x0, y0, width, height in pixels
    center_landmark: int


@dataclass(frozen=True)
class RgbSample:
    """Spatial mean of one ROI in one frame, channels in [0, 255]."""

    timestamp_s: float
    r: float
    g: float
    b: float
    region: Region


def select_roi(
    lms: LandmarkSet,
    yaw_deg: float,
    frame_w: int,
    frame_h: int,
    cfg: RoiConfig = RoiConfig(),
) -> RoiSelection:
    """Pick the measurement region for one frame.

    Forehead if visible; otherwise the right cheek when ``yaw_deg`` exceeds
    the threshold and the left cheek otherwise. The rect is centered on the
    mapped landmark and never clamped: a fallback cheek rect that exits the
    frame raises RoiOutOfBoundsError.
    """
    if not lms.detected:
        raise NoFaceError("cannot select ROI: no detected face in frame")
    if forehead_visible(lms, frame_w, frame_h, cfg.roi_size):
        region = Region.FOREHEAD
    elif yaw_deg > cfg.yaw_threshold_deg:
        region = Region.RIGHT_CHEEK
    else:
        region = Region.LEFT_CHEEK
    landmark = REGION_LANDMARK[region]
    rect = landmark_rect(lms.points[landmark], frame_w, frame_h, cfg.roi_size)
    if not rect_in_frame(rect, frame_w, frame_h):
        raise RoiOutOfBoundsError(
            f"frame {lms.frame_index}: {region.value} rect {rect} exits "
            f"{frame_w}x{frame_h} frame"
        )
    return RoiSelection(region=region, rect=rect, center_landmark=landmark)


def crop_mean_rgb(frame: np.ndarray, roi: RoiSelection, timestamp_s: float) -> RgbSample:
    """Arithmetic per-channel mean over the ROI pixels.

    ``frame`` is an (H, W, 3) RGB array. Raises FormatError when the frame
    shape is not HxWx3 or the rect does not fit the frame.
    """
    frame = np.asarray(frame)
    if frame.ndim != 3 or frame.shape[2] != 3:
        raise FormatError(f"expected an (H, W, 3) frame, got shape {frame.shape}")
    h, w = frame.shape[:2]
    x0, y0, rw, rh = roi.rect
    if not rect_in_frame(roi.rect, w, h):
        raise FormatError(f"ROI rect {roi.rect} does not fit {w}x{h} frame")
    patch = frame[y0 : y0 + rh, x0 : x0 + rw].astype(np.float64, copy=False)
    r, g, b = patch.mean(axis=(0, 1))
    return RgbSample(timestamp_s=timestamp_s, r=float(r), g=float(g), b=float(b), region=roi.region)
