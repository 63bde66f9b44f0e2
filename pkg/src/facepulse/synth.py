"""Synthetic traces, frames and landmark streams with known ground truth.

The color model is dichromatic: a diffuse component carrying the pulse
along a blood-volume color direction, an achromatic specular term, and a
multiplicative intensity modulation, plus additive Gaussian noise:

    c_i(t) = I(t) * [base_i * (1 + amp * u_i * p(t)) + spec(t)] + n_i(t)

with p(t) = sin(2 pi f t) + 0.3 sin(4 pi f t). The second harmonic keeps
peak detection honest. Peak times of p(t) have a closed form, which is the
ground truth every downstream stage is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ConfigError
from .filters import DEFAULT_BAND_HZ, DEFAULT_PULSE_DIRECTION
from .heartrate import PeakTrain
from .landmarks import FOREHEAD_CENTER, LEFT_CHEEK, NUM_LANDMARKS, RIGHT_CHEEK, LandmarkSet
from .pos import RgbTrace
from .roi import Region

DEFAULT_SKIN_BASE = (168.0, 122.0, 102.0)

# Anchor positions in head-centered coordinates (x right, y down, z toward
# the camera), overriding the generic mesh points at the ROI indices.
_ANCHOR_POSITIONS = {
    FOREHEAD_CENTER: (0.0, -0.10, 0.075),
    LEFT_CHEEK: (-0.09, 0.05, 0.06),
    RIGHT_CHEEK: (0.09, 0.05, 0.06),
}


@dataclass
class SynthConfig:
    """Ground-truth generator settings. ``seed`` is mandatory so every
    output is reproducible bit for bit."""

    seed: int
    hr_bpm: float = 72.0
    fps: float = 30.0
    duration_s: float = 30.0
    pulse_rel_amp: float = 0.002
    skin_base: tuple[float, float, float] = DEFAULT_SKIN_BASE
    pulse_direction: tuple[float, float, float] = DEFAULT_PULSE_DIRECTION
    intensity_mod: tuple[float, float] = (0.0, 0.0)  # (amplitude, frequency Hz)
    specular_events: tuple[tuple[float, float, float], ...] = ()  # (time, duration, magnitude)
    noise_sd: float = 0.0
    yaw_profile: tuple[tuple[float, float], ...] = ((0.0, 0.0),)  # (time s, degrees)
    occlude_forehead: bool = False

    def __post_init__(self):
        f = self.hr_bpm / 60.0
        lo, hi = DEFAULT_BAND_HZ
        if not lo <= f <= hi:
            raise ConfigError(
                f"hr_bpm {self.hr_bpm} is outside the detectable band "
                f"[{lo * 60:.0f}, {hi * 60:.0f}] BPM"
            )
        if not 0.0 <= self.pulse_rel_amp < 0.1:
            raise ConfigError(f"pulse_rel_amp must be in [0, 0.1), got {self.pulse_rel_amp}")
        if self.fps <= 0 or self.duration_s <= 0:
            raise ConfigError("fps and duration_s must be positive")
        if self.noise_sd < 0:
            raise ConfigError(f"noise_sd must be >= 0, got {self.noise_sd}")
        if any(b <= 0 or b > 255 for b in self.skin_base):
            raise ConfigError(f"skin_base must lie in (0, 255], got {self.skin_base}")

    @property
    def n_frames(self) -> int:
        return int(round(self.duration_s * self.fps))


@dataclass
class SynthTruth:
    """What the generator actually embedded, for oracle checks."""

    hr_bpm: float
    fps: float
    peak_times: np.ndarray
    peak_indices: np.ndarray
    yaw_deg: np.ndarray  # per frame

    def peak_train(self) -> PeakTrain:
        return PeakTrain(peak_times=self.peak_times, peak_indices=self.peak_indices)


def pulse_waveform(t: np.ndarray, hr_bpm: float) -> np.ndarray:
    f = hr_bpm / 60.0
    return np.sin(2 * np.pi * f * t) + 0.3 * np.sin(4 * np.pi * f * t)


def pulse_peak_times(hr_bpm: float, duration_s: float) -> np.ndarray:
    """Exact maxima of the two-harmonic waveform within [0, duration).

    Maxima of sin(x) + 0.3 sin(2x) sit at x* + 2 pi k where
    cos(x*) = (-1 + sqrt(3.88)) / 2.4, from the vanishing derivative.
    """
    x_star = math.acos((-1.0 + math.sqrt(3.88)) / 2.4)
    f = hr_bpm / 60.0
    phase = x_star / (2.0 * math.pi)
    n = math.ceil(duration_s * f - phase)
    return (phase + np.arange(max(n, 0))) / f


def _intensity(t: np.ndarray, intensity_mod: tuple[float, float]) -> np.ndarray:
    amp, freq = intensity_mod
    if amp == 0.0:
        return np.ones_like(t)
    return 1.0 + amp * np.sin(2 * np.pi * freq * t)


def _specular(t: np.ndarray, events) -> np.ndarray:
    out = np.zeros_like(t)
    for start, duration, magnitude in events:
        if duration <= 0:
            raise ConfigError(f"specular event duration must be positive, got {duration}")
        u = (t - start) / duration
        inside = (u >= 0.0) & (u < 1.0)
        out[inside] += magnitude * 0.5 * (1.0 - np.cos(2 * np.pi * u[inside]))
    return out


def clean_colors(cfg: SynthConfig) -> np.ndarray:
    """Noise-free (n, 3) color signal of the dichromatic model."""
    t = np.arange(cfg.n_frames) / cfg.fps
    p = pulse_waveform(t, cfg.hr_bpm)
    u = np.asarray(cfg.pulse_direction, dtype=np.float64)
    u = u / np.linalg.norm(u)
    base = np.asarray(cfg.skin_base, dtype=np.float64)
    diffuse = base * (1.0 + cfg.pulse_rel_amp * u * p[:, None])
    spec = _specular(t, cfg.specular_events)
    return _intensity(t, cfg.intensity_mod)[:, None] * (diffuse + spec[:, None])


def synth_trace(cfg: SynthConfig) -> tuple[RgbTrace, PeakTrain]:
    """Generate an RGB trace plus the ground-truth peak train."""
    n = cfg.n_frames
    t = np.arange(n) / cfg.fps
    colors = clean_colors(cfg)
    if cfg.noise_sd > 0.0:
        rng = np.random.default_rng(cfg.seed)
        colors = colors + rng.normal(0.0, cfg.noise_sd, size=colors.shape)
    trace = RgbTrace(
        values=colors,
        timestamps=t,
        fps=cfg.fps,
        regions=tuple([Region.FOREHEAD] * n),
    )
    times = pulse_peak_times(cfg.hr_bpm, cfg.duration_s)
    indices = np.clip(np.rint(times * cfg.fps).astype(np.intp), 0, n - 1)
    return trace, PeakTrain(peak_times=times, peak_indices=indices)


def canonical_template() -> np.ndarray:
    """Deterministic 468-point head template in head-centered coordinates.

    Generic points sample the camera-facing half of an ellipsoid along a
    golden-angle spiral; the three ROI anchors are pinned to fixed
    positions so ROI geometry and yaw are exact.
    """
    k = np.arange(NUM_LANDMARKS)
    depth = (k + 0.5) / NUM_LANDMARKS  # toward-camera fraction
    ring = np.sqrt(1.0 - depth**2)
    theta = k * math.pi * (3.0 - math.sqrt(5.0))
    rx, ry, rz = 0.16, 0.22, 0.10
    pts = np.column_stack([rx * ring * np.cos(theta), ry * ring * np.sin(theta), rz * depth])
    for idx, pos in _ANCHOR_POSITIONS.items():
        pts[idx] = pos
    return pts


def rotate_yaw(points: np.ndarray, yaw_deg: float) -> np.ndarray:
    """Rigid rotation about the vertical axis; positive yaw brings the
    left-cheek side (negative x) toward the camera."""
    a = math.radians(yaw_deg)
    c, s = math.cos(a), math.sin(a)
    x, y, z = points[:, 0], points[:, 1], points[:, 2]
    return np.column_stack([c * x + s * z, y, -s * x + c * z])


def project_template(points: np.ndarray) -> np.ndarray:
    """Head coordinates to the landmark stream's normalized image frame."""
    out = points.copy()
    out[:, 0] += 0.5
    out[:, 1] += 0.5
    return out


def yaw_at(t: np.ndarray | float, yaw_profile) -> np.ndarray | float:
    """Piecewise-linear yaw profile evaluated at time(s) t."""
    pairs = sorted(yaw_profile)
    times = [p[0] for p in pairs]
    degs = [p[1] for p in pairs]
    return np.interp(t, times, degs)


def synth_landmarks(cfg: SynthConfig) -> list[LandmarkSet]:
    """Landmark stream of the rotated template, one record per frame."""
    template = canonical_template()
    sets = []
    for i in range(cfg.n_frames):
        ts = i / cfg.fps
        yaw = float(yaw_at(ts, cfg.yaw_profile))
        pts = project_template(rotate_yaw(template, yaw))
        sets.append(
            LandmarkSet(
                frame_index=i,
                timestamp_s=ts,
                points=pts,
                detected=True,
                occluded_forehead=cfg.occlude_forehead,
            )
        )
    return sets


def synth_frames(
    cfg: SynthConfig, frame_w: int, frame_h: int, roi_size: int = 40
) -> tuple[Iterator[np.ndarray], list[LandmarkSet], SynthTruth]:
    """Frame stream plus matching landmark stream and ground truth.

    Every frame is filled with the instantaneous model color, with
    per-pixel Gaussian noise drawn from a (seed, frame_index) substream,
    rounded into rgb8. Frames must leave room for the ROI squares.
    """
    if frame_w < 4 * roi_size or frame_h < 4 * roi_size:
        raise ConfigError(
            f"frame {frame_w}x{frame_h} too small; need >= {4 * roi_size} per side"
        )
    colors = clean_colors(cfg)
    landmarks = synth_landmarks(cfg)
    t = np.arange(cfg.n_frames) / cfg.fps
    peak_times = pulse_peak_times(cfg.hr_bpm, cfg.duration_s)
    truth = SynthTruth(
        hr_bpm=cfg.hr_bpm,
        fps=cfg.fps,
        peak_times=peak_times,
        peak_indices=np.clip(np.rint(peak_times * cfg.fps).astype(np.intp), 0, cfg.n_frames - 1),
        yaw_deg=np.asarray(yaw_at(t, cfg.yaw_profile), dtype=np.float64),
    )

    def frames() -> Iterator[np.ndarray]:
        for i in range(cfg.n_frames):
            frame = np.broadcast_to(colors[i], (frame_h, frame_w, 3)).copy()
            if cfg.noise_sd > 0.0:
                rng = np.random.default_rng([cfg.seed, i])
                frame += rng.normal(0.0, cfg.noise_sd, size=frame.shape)
            yield np.clip(np.rint(frame), 0, 255).astype(np.uint8)

    return frames(), landmarks, truth
