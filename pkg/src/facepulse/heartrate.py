"""Heart rate from the filtered pulse.

Interbeat-interval (IBI) analysis is the production path: peak times give
intervals t_rr[i] = t[n] - t[n-1], and each tumbling window's rate is
60 / mean(IBIs ending in that window) BPM. Welch and cross-spectral
density peak picking are kept as diagnostics; Welch trades frequency
detail for variance reduction and the CSD magnitude collapses wherever the
paired signals decorrelate, so neither is used for reported rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import signal as sps

from .errors import (
    AlignmentError,
    ConfigError,
    InsufficientDataError,
    InsufficientPeaksError,
)
from .pos import PulseSignal

DEFAULT_MIN_SEPARATION_S = 0.25
DEFAULT_PROMINENCE_FACTOR = 0.5
DEFAULT_HR_WINDOW_S = 10.0


class HrMethod(str, Enum):
    IBI = "ibi"
    WELCH_PEAK = "welch_peak"
    CSD_PEAK = "csd_peak"


class PsdMethod(str, Enum):
    WELCH = "welch"
    CSD = "csd"


@dataclass(frozen=True)
class PeakTrain:
    """Detected pulse peaks; times strictly increasing."""

    peak_times: np.ndarray
    peak_indices: np.ndarray

    def __len__(self) -> int:
        return len(self.peak_indices)


@dataclass(frozen=True)
class HrEstimate:
    hr_bpm: float
    method: HrMethod
    window_start: float | None = None
    window_end: float | None = None
    n_ibis: int = 0


@dataclass(frozen=True)
class Psd:
    """One-sided spectrum; ``power`` is a density for Welch and the
    cross-spectrum magnitude for CSD."""

    freqs: np.ndarray
    power: np.ndarray
    method: PsdMethod


def detect_peaks(
    pulse: PulseSignal,
    min_separation_s: float = DEFAULT_MIN_SEPARATION_S,
    prominence_factor: float = DEFAULT_PROMINENCE_FACTOR,
) -> PeakTrain:
    """Strict local maxima, prominence-gated, greedily thinned highest-first.

    Candidates are samples strictly above both neighbors with topographic
    prominence at least ``prominence_factor`` times the signal's standard
    deviation. Candidates are then accepted tallest-first, rejecting any
    within ``min_separation_s`` of an already accepted peak, so surviving
    peaks are always at least that far apart. An empty train is a valid
    result, not an error.
    """
    x = pulse.values
    if len(x) < 3:
        raise InsufficientDataError(f"peak detection needs >= 3 samples, got {len(x)}")
    interior = np.arange(1, len(x) - 1)
    strict = (x[interior] > x[interior - 1]) & (x[interior] > x[interior + 1])
    candidates = interior[strict]
    sd = x.std()
    if len(candidates) and sd > 0.0:
        prominences = sps.peak_prominences(x, candidates)[0]
        candidates = candidates[prominences >= prominence_factor * sd]
    elif sd == 0.0:
        candidates = candidates[:0]

    min_gap = math.ceil(min_separation_s * pulse.fps - 1e-9)
    kept: list[int] = []
    # tallest first; ties resolved toward the earlier sample for determinism
    for idx in sorted(candidates, key=lambda i: (-x[i], i)):
        if all(abs(idx - k) >= min_gap for k in kept):
            kept.append(idx)
    kept.sort()
    indices = np.asarray(kept, dtype=np.intp)
    return PeakTrain(peak_times=pulse.t0 + indices / pulse.fps, peak_indices=indices)


def ibi_hr(peaks: PeakTrain, window_s: float = DEFAULT_HR_WINDOW_S) -> list[HrEstimate]:
    """Per-window heart rate from interbeat intervals.

    Windows tumble from the first peak time; an IBI belongs to the window
    containing its later peak. Windows without any IBI are omitted. On
    perfectly periodic peaks of period T every window reports exactly
    60 / T BPM.
    """
    if window_s <= 0.0:
        raise ConfigError(f"window must be positive, got {window_s}")
    if len(peaks) < 2:
        raise InsufficientPeaksError(
            f"need >= 2 peaks to form an interbeat interval, got {len(peaks)}"
        )
    t = peaks.peak_times
    ibis = np.diff(t)
    window_idx = np.floor((t[1:] - t[0]) / window_s).astype(int)
    estimates = []
    for k in np.unique(window_idx):
        in_window = ibis[window_idx == k]
        estimates.append(
            HrEstimate(
                hr_bpm=60.0 / in_window.mean(),
                method=HrMethod.IBI,
                window_start=float(t[0] + k * window_s),
                window_end=float(t[0] + (k + 1) * window_s),
                n_ibis=int(len(in_window)),
            )
        )
    return estimates


def _segment_samples(segment_s: float, fps: float, n: int) -> int:
    nper = int(round(segment_s * fps))
    if nper < 2:
        raise ConfigError(f"segment of {segment_s}s is too short at {fps} fps")
    if nper > n:
        raise InsufficientDataError(
            f"segment of {nper} samples exceeds signal length {n}"
        )
    return nper


def welch_psd(pulse: PulseSignal, segment_s: float, overlap: float = 0.5) -> Psd:
    """Averaged periodogram over Hann-windowed overlapping segments."""
    nper = _segment_samples(segment_s, pulse.fps, len(pulse))
    freqs, power = sps.welch(
        pulse.values,
        fs=pulse.fps,
        window="hann",
        nperseg=nper,
        noverlap=int(nper * overlap),
        detrend="constant",
        scaling="density",
    )
    return Psd(freqs=freqs, power=power, method=PsdMethod.WELCH)


def csd(x: PulseSignal, y: PulseSignal, segment_s: float, overlap: float = 0.5) -> Psd:
    """Cross-spectral density magnitude with Welch-style averaging.

    csd(x, x) reproduces welch_psd(x) exactly (same segmentation and
    window).
    """
    if len(x) != len(y) or x.fps != y.fps:
        raise AlignmentError(
            f"csd inputs must align: lengths {len(x)}/{len(y)}, fps {x.fps}/{y.fps}"
        )
    nper = _segment_samples(segment_s, x.fps, len(x))
    freqs, pxy = sps.csd(
        x.values,
        y.values,
        fs=x.fps,
        window="hann",
        nperseg=nper,
        noverlap=int(nper * overlap),
        detrend="constant",
        scaling="density",
    )
    return Psd(freqs=freqs, power=np.abs(pxy), method=PsdMethod.CSD)


def spectral_hr(psd: Psd, band_hz: tuple[float, float]) -> HrEstimate:
    """60 times the in-band argmax frequency; equal peaks resolve to the
    lower frequency."""
    lo, hi = band_hz
    mask = (psd.freqs >= lo) & (psd.freqs <= hi)
    if not mask.any():
        raise ConfigError(f"band {band_hz} contains no spectral bins")
    banded_freqs = psd.freqs[mask]
    banded_power = psd.power[mask]
    peak_freq = banded_freqs[int(np.argmax(banded_power))]
    method = HrMethod.WELCH_PEAK if psd.method is PsdMethod.WELCH else HrMethod.CSD_PEAK
    return HrEstimate(hr_bpm=60.0 * float(peak_freq), method=method)
