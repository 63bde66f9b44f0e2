"""Sample-video builders for extractor tests."""

import cv2
import numpy as np


def write_flat_video(path, n_frames=40, w=160, h=120, fps=30.0, color=(90, 90, 90)):
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"mp4v"), fps, (w, h))
    assert writer.isOpened()
    frame = np.full((h, w, 3), color, dtype=np.uint8)
    for _ in range(n_frames):
        writer.write(frame)
    writer.release()
    return path


def write_oval_video(path, n_frames=90, w=192, h=192, fps=30.0, pulse_bpm=72.0):
    """Bright oval on a dark background with a small pulsing color change,
    the closest thing to a face a codec round trip preserves exactly."""
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"mp4v"), fps, (w, h))
    assert writer.isOpened()
    yy, xx = np.mgrid[0:h, 0:w]
    mask = ((xx - w / 2) / (0.30 * w)) ** 2 + ((yy - h / 2) / (0.40 * h)) ** 2 <= 1.0
    direction = np.array([0.33, 0.77, 0.53])
    direction = direction / np.linalg.norm(direction)
    base = np.array([170.0, 125.0, 105.0])
    for i in range(n_frames):
        t = i / fps
        color = np.clip(base + 4.0 * np.sin(2 * np.pi * (pulse_bpm / 60.0) * t) * direction, 0, 255)
        frame = np.full((h, w, 3), 25, dtype=np.uint8)
        frame[mask] = color.astype(np.uint8)
        writer.write(frame[:, :, ::-1])  # OpenCV wants BGR
    writer.release()
    return path
