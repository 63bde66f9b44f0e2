"""Face-landmark backends.

A backend maps one RGB frame to 468 normalized [x, y, z] points or None
when no face is present. Coordinates follow the toolkit's landmark stream
convention: x/y in [0, 1] (x right, y down), z relative depth with larger
values nearer the camera.

``MediaPipeBackend`` wraps the real face-mesh model when the mediapipe
package is installed. ``CentroidTemplateBackend`` is a dependency-free
stand-in for integration testing: it gates on image structure and scales a
fixed 468-point template into the structured region. It does not infer
facial geometry; do not use it for actual measurements.
"""

from __future__ import annotations

import numpy as np

NUM_LANDMARKS = 468
FOREHEAD_CENTER = 151
LEFT_CHEEK = 50
RIGHT_CHEEK = 280


def build_template() -> np.ndarray:
    """Generic 468-point face layout in a unit box centered at the origin.

    Points fill an ellipse grid; the three ROI anchor indices are pinned at
    forehead top-center and the two cheeks (left cheek at negative x, image
    left).
    """
    k = np.arange(NUM_LANDMARKS)
    radius = np.sqrt((k + 0.5) / NUM_LANDMARKS)
    angle = k * np.pi * (3.0 - np.sqrt(5.0))
    pts = np.column_stack(
        [
            0.5 * radius * np.cos(angle),
            0.5 * radius * np.sin(angle),
            0.25 * (1.0 - radius**2),  # crude convexity: center nearest the camera
        ]
    )
    pts[FOREHEAD_CENTER] = (0.0, -0.30, 0.20)
    pts[LEFT_CHEEK] = (-0.25, 0.12, 0.15)
    pts[RIGHT_CHEEK] = (0.25, 0.12, 0.15)
    return pts


class CentroidTemplateBackend:
    """Template placement by image-structure centroid.

    A frame counts as containing a subject when the mean luminance gradient
    magnitude exceeds ``min_gradient``. The template is centered on the
    gradient centroid and scaled to the gradient spread, clamped so all
    points stay inside the unit square.
    """

    name = "centroid"

    def __init__(self, min_gradient: float = 1.0):
        self.min_gradient = min_gradient
        self._template = build_template()

    def detect(self, frame_rgb: np.ndarray) -> np.ndarray | None:
        lum = frame_rgb.astype(np.float64).mean(axis=2)
        gy, gx = np.gradient(lum)
        mag = np.hypot(gx, gy)
        total = mag.sum()
        if total == 0.0 or mag.mean() < self.min_gradient:
            return None
        h, w = lum.shape
        ys, xs = np.mgrid[0:h, 0:w]
        cx = float((xs * mag).sum() / total) / w
        cy = float((ys * mag).sum() / total) / h
        sx = np.sqrt(float((((xs / w) - cx) ** 2 * mag).sum() / total))
        sy = np.sqrt(float((((ys / h) - cy) ** 2 * mag).sum() / total))
        scale = 4.0 * max(sx, sy)
        scale = min(scale, 1.9 * min(cx, 1.0 - cx, cy, 1.0 - cy, 0.5))
        pts = self._template.copy()
        pts[:, 0] = np.clip(pts[:, 0] * scale + cx, 0.0, 1.0)
        pts[:, 1] = np.clip(pts[:, 1] * scale + cy, 0.0, 1.0)
        pts[:, 2] *= scale
        return pts


class MediaPipeBackend:
    """Real face-mesh inference through the mediapipe package."""

    name = "mediapipe"

    def __init__(self):
        try:
            import mediapipe as mp
        except ImportError as exc:
            raise RuntimeError(
                "mediapipe is not installed; install the 'mediapipe' extra "
                "or use the centroid backend"
            ) from exc
        self._mesh = mp.solutions.face_mesh.FaceMesh(
            static_image_mode=False,
            max_num_faces=1,
            refine_landmarks=False,
            min_detection_confidence=0.5,
        )

    def detect(self, frame_rgb: np.ndarray) -> np.ndarray | None:
        result = self._mesh.process(frame_rgb)
        if not result.multi_face_landmarks:
            return None
        face = result.multi_face_landmarks[0].landmark
        pts = np.array([[p.x, p.y, -p.z] for p in face], dtype=np.float64)
        # model output can stray slightly outside the image at the borders
        pts[:, :2] = np.clip(pts[:, :2], 0.0, 1.0)
        return pts


def make_backend(name: str = "auto"):
    if name == "mediapipe":
        return MediaPipeBackend()
    if name == "centroid":
        return CentroidTemplateBackend()
    if name == "auto":
        try:
            return MediaPipeBackend()
        except RuntimeError:
            return CentroidTemplateBackend()
    raise ValueError(f"unknown backend {name!r}; expected auto, mediapipe or centroid")
