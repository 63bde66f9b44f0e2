"""Spectral cleanup of the raw pulse: ASF, CDF, band limiting, moving average.

The chain runs in one FFT round trip. Amplitude selective filtering (ASF)
attenuates frequency components whose DC-normalized R-channel amplitude
exceeds the plausible pulsatile range; color distortion filtering (CDF)
weights each component by how much of its RGB energy lies along the
expected blood-volume pulse direction. A band mask keeps the plausible
heart-rate range, and a short moving average removes residual
high-frequency noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlignmentError,
    ConfigError,
    DegenerateSpectrumError,
    InsufficientDataError,
)
from .pos import PulseSignal, RgbTrace

#: Relative pulsatile amplitude in normalized RGB, strongest in G.
DEFAULT_PULSE_DIRECTION = (0.33, 0.77, 0.53)

DEFAULT_BAND_HZ = (0.7, 4.0)


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ConfigError("pulse_direction must be a nonzero 3-vector")
    return v / n


@dataclass
class FilterConfig:
    """Parameters of the filter chain.

    ``ma_points`` defaults to round(fps / 6) when left as None, resolved
    against the signal's frame rate at apply time.
    """

    asf_delta: float = 0.002
    pulse_direction: np.ndarray = field(default_factory=lambda: _unit(DEFAULT_PULSE_DIRECTION))
    band_hz: tuple[float, float] = DEFAULT_BAND_HZ
    ma_points: int | None = None

    def __post_init__(self):
        self.pulse_direction = _unit(self.pulse_direction)
        if self.asf_delta <= 0.0:
            raise ConfigError(f"asf_delta must be positive, got {self.asf_delta}")
        lo, hi = self.band_hz
        if not 0.0 < lo < hi:
            raise ConfigError(f"band must satisfy 0 < lo < hi, got {self.band_hz}")
        if self.ma_points is not None and self.ma_points < 1:
            raise ConfigError(f"ma_points must be >= 1, got {self.ma_points}")

    def resolve_ma_points(self, fps: float) -> int:
        return self.ma_points if self.ma_points is not None else max(1, round(fps / 6.0))

    def validate_for_fps(self, fps: float) -> None:
        if self.band_hz[1] >= fps / 2.0:
            raise ConfigError(
                f"band upper edge {self.band_hz[1]} Hz must be below Nyquist {fps / 2.0} Hz"
            )


@dataclass(frozen=True)
class SpectralWeights:
    """Per-rFFT-bin attenuation in [0, 1]; bin k sits at k * bin_hz."""

    weights: np.ndarray
    bin_hz: float


def moving_average(x: np.ndarray, m: int) -> np.ndarray:
    """Sliding mean: y[i] = mean(x[i .. i+m-1]), output length len(x) - m + 1."""
    x = np.asarray(x, dtype=np.float64)
    if m < 1:
        raise ConfigError(f"moving average needs m >= 1, got {m}")
    if m > len(x):
        raise InsufficientDataError(f"moving average of {m} points needs >= {m} samples, got {len(x)}")
    return np.lib.stride_tricks.sliding_window_view(x, m).mean(axis=1)


def moving_average_response(freq_hz: np.ndarray | float, m: int, fps: float) -> np.ndarray | float:
    """Magnitude response of the m-point moving average at ``freq_hz``."""
    f = np.asarray(freq_hz, dtype=np.float64)
    x = np.pi * f / fps
    with np.errstate(invalid="ignore", divide="ignore"):
        resp = np.where(x == 0.0, 1.0, np.abs(np.sin(m * x)) / (m * np.abs(np.sin(x))))
    return resp if resp.ndim else float(resp)


def asf_weights(rgb_spectrum: np.ndarray, delta: float, bin_hz: float) -> SpectralWeights:
    """Amplitude selective weights from the R channel of an RGB spectrum.

    ``rgb_spectrum`` is the (k, 3) one-sided FFT of the trace. Each bin's
    amplitude relative to the R-channel DC bin is compared against
    ``delta``: bins at or under the bound pass, larger ones are scaled down
    by delta / amplitude. The DC bin weight is 0.
    """
    spec = np.asarray(rgb_spectrum)
    dc = np.abs(spec[0, 0])
    if dc == 0.0:
        raise DegenerateSpectrumError("R-channel DC bin is zero; cannot normalize amplitudes")
    rel_amp = np.abs(spec[:, 0]) / dc
    with np.errstate(divide="ignore"):
        w = np.minimum(1.0, np.divide(delta, rel_amp, out=np.full_like(rel_amp, np.inf), where=rel_amp > 0.0))
    w[0] = 0.0
    return SpectralWeights(weights=w, bin_hz=bin_hz)


def cdf_weights(rgb_spectrum: np.ndarray, pulse_direction: np.ndarray, bin_hz: float) -> SpectralWeights:
    """Energy fraction of each spectral bin along the pulse color direction.

    w(f) = |<C(f), u>|^2 / ||C(f)||^2 for AC bins, 0 where the bin is empty
    and at DC. Equals 1 exactly when the bin's complex RGB vector is
    parallel to ``u`` and 0 when orthogonal.
    """
    spec = np.asarray(rgb_spectrum)
    u = _unit(pulse_direction)
    aligned = np.abs(spec @ u) ** 2
    total = np.sum(np.abs(spec) ** 2, axis=1)
    w = np.divide(aligned, total, out=np.zeros_like(aligned), where=total > 0.0)
    w[0] = 0.0
    return SpectralWeights(weights=w, bin_hz=bin_hz)


def band_mask(freqs_hz: np.ndarray, band_hz: tuple[float, float]) -> np.ndarray:
    lo, hi = band_hz
    return ((freqs_hz >= lo) & (freqs_hz <= hi)).astype(np.float64)


def apply_filter_chain(pulse: PulseSignal, trace: RgbTrace, cfg: FilterConfig | None = None) -> PulseSignal:
    """Run ASF, CDF, band limiting and the moving average over a raw pulse.

    The spectral weights are built from the trace's own RGB spectrum at the
    pulse signal's bin resolution, multiplied together with the band mask
    in a single spectral pass, then the moving average shortens the signal
    by ma_points - 1 samples. Output is re-centered to zero mean. All
    weights lie in [0, 1], so no frequency bin is ever amplified.
    """
    if cfg is None:
        cfg = FilterConfig()
    n = len(pulse)
    if n != len(trace):
        raise AlignmentError(f"pulse ({n}) and trace ({len(trace)}) lengths differ")
    if pulse.fps != trace.fps:
        raise AlignmentError(f"pulse fps {pulse.fps} != trace fps {trace.fps}")
    cfg.validate_for_fps(pulse.fps)

    bin_hz = pulse.fps / n
    freqs = np.fft.rfftfreq(n, d=1.0 / pulse.fps)
    rgb_spectrum = np.fft.rfft(trace.values, axis=0)
    w = (
        asf_weights(rgb_spectrum, cfg.asf_delta, bin_hz).weights
        * cdf_weights(rgb_spectrum, cfg.pulse_direction, bin_hz).weights
        * band_mask(freqs, cfg.band_hz)
    )
    filtered = np.fft.irfft(np.fft.rfft(pulse.values) * w, n=n)
    out = moving_average(filtered, cfg.resolve_ma_points(pulse.fps))
    out = out - out.mean()
    return PulseSignal(values=out, fps=pulse.fps, t0=pulse.t0)
