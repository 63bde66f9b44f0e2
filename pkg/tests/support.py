"""Shared builders for landmark-set test inputs."""

import numpy as np

from facepulse.landmarks import (
    FOREHEAD_CENTER,
    LEFT_CHEEK,
    NUM_LANDMARKS,
    RIGHT_CHEEK,
    LandmarkSet,
)


def make_landmarks(
    frame_index=0,
    timestamp_s=0.0,
    forehead=(0.5, 0.35, 0.06),
    left_cheek=(0.35, 0.55, 0.05),
    right_cheek=(0.65, 0.55, 0.05),
    occluded_forehead=False,
    filler=(0.5, 0.5, 0.0),
):
    """Detected landmark set with the three anchors pinned and the other
    465 points at a filler position."""
    pts = np.tile(np.asarray(filler, dtype=np.float64), (NUM_LANDMARKS, 1))
    pts[FOREHEAD_CENTER] = forehead
    pts[LEFT_CHEEK] = left_cheek
    pts[RIGHT_CHEEK] = right_cheek
    return LandmarkSet(
        frame_index=frame_index,
        timestamp_s=timestamp_s,
        points=pts,
        detected=True,
        occluded_forehead=occluded_forehead,
    )


def mirror_landmarks(lms: LandmarkSet) -> LandmarkSet:
    """Horizontal mirror: negate x and swap the left/right cheek pair, the
    relabeling a detector would apply to a mirrored face."""
    pts = lms.points.copy()
    pts[:, 0] = -pts[:, 0]
    pts[[LEFT_CHEEK, RIGHT_CHEEK]] = pts[[RIGHT_CHEEK, LEFT_CHEEK]]
    return LandmarkSet(
        frame_index=lms.frame_index,
        timestamp_s=lms.timestamp_s,
        points=pts,
        detected=lms.detected,
        occluded_forehead=lms.occluded_forehead,
    )
