"""End-to-end driver: frames + landmarks in, heart-rate report out.

Stages run in order: ROI selection per frame, spatial RGB averaging, POS
extraction over sliding windows, the spectral filter chain, peak detection
and interbeat-interval heart rate. Welch and CSD peak rates plus SNR
before/after filtering are attached as diagnostics.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from .errors import AlignmentError, InsufficientDataError
from .filters import FilterConfig, apply_filter_chain
from .heartrate import (
    DEFAULT_HR_WINDOW_S,
    DEFAULT_MIN_SEPARATION_S,
    DEFAULT_PROMINENCE_FACTOR,
    HrEstimate,
    HrMethod,
    csd,
    detect_peaks,
    ibi_hr,
    spectral_hr,
    welch_psd,
)
from .landmarks import LandmarkSet, estimate_yaw
from .pos import PulseSignal, RgbTrace, pos_sliding, windows_straddling_switches
from .roi import Region, RoiConfig, crop_mean_rgb, select_roi


@dataclass
class PipelineConfig:
    """All pipeline knobs; flat dict form mirrors the JSON config file."""

    roi: RoiConfig = field(default_factory=RoiConfig)
    filters: FilterConfig = field(default_factory=FilterConfig)
    pos_window_s: float = 1.6
    hr_window_s: float = DEFAULT_HR_WINDOW_S
    min_peak_separation_s: float = DEFAULT_MIN_SEPARATION_S
    peak_prominence_factor: float = DEFAULT_PROMINENCE_FACTOR
    welch_segment_s: float = 10.0

    def to_dict(self) -> dict:
        return {
            "roi_size": self.roi.roi_size,
            "yaw_threshold_deg": self.roi.yaw_threshold_deg,
            "asf_delta": self.filters.asf_delta,
            "pulse_direction": [float(v) for v in self.filters.pulse_direction],
            "band_hz": list(self.filters.band_hz),
            "ma_points": self.filters.ma_points,
            "pos_window_s": self.pos_window_s,
            "hr_window_s": self.hr_window_s,
            "min_peak_separation_s": self.min_peak_separation_s,
            "peak_prominence_factor": self.peak_prominence_factor,
            "welch_segment_s": self.welch_segment_s,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        base = cls().to_dict()
        base.update({k: v for k, v in d.items() if v is not None})
        return cls(
            roi=RoiConfig(
                roi_size=int(base["roi_size"]),
                yaw_threshold_deg=float(base["yaw_threshold_deg"]),
            ),
            filters=FilterConfig(
                asf_delta=float(base["asf_delta"]),
                pulse_direction=np.asarray(base["pulse_direction"], dtype=np.float64),
                band_hz=tuple(base["band_hz"]),
                ma_points=None if base["ma_points"] is None else int(base["ma_points"]),
            ),
            pos_window_s=float(base["pos_window_s"]),
            hr_window_s=float(base["hr_window_s"]),
            min_peak_separation_s=float(base["min_peak_separation_s"]),
            peak_prominence_factor=float(base["peak_prominence_factor"]),
            welch_segment_s=float(base["welch_segment_s"]),
        )


@dataclass(frozen=True)
class Diagnostics:
    snr_db_raw: float | None
    snr_db_filtered: float | None
    welch_hr_bpm: float | None
    csd_hr_bpm: float | None
    pos_windows_over_region_switches: int


@dataclass
class HrReport:
    video_hr_bpm: float
    estimates: list[HrEstimate]
    roi_timeline: list[str]
    n_frames: int
    n_detected: int
    skipped_frames: list[int]
    region_switches: list[int]
    diagnostics: Diagnostics

    def to_json(self) -> str:
        d = asdict(self)
        for est in d["estimates"]:
            est["method"] = est["method"].value if isinstance(est["method"], HrMethod) else est["method"]
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "HrReport":
        d = json.loads(text)
        estimates = [
            HrEstimate(
                hr_bpm=e["hr_bpm"],
                method=HrMethod(e["method"]),
                window_start=e["window_start"],
                window_end=e["window_end"],
                n_ibis=e["n_ibis"],
            )
            for e in d["estimates"]
        ]
        return cls(
            video_hr_bpm=d["video_hr_bpm"],
            estimates=estimates,
            roi_timeline=d["roi_timeline"],
            n_frames=d["n_frames"],
            n_detected=d["n_detected"],
            skipped_frames=d["skipped_frames"],
            region_switches=d["region_switches"],
            diagnostics=Diagnostics(**d["diagnostics"]),
        )


def band_snr_db(pulse: PulseSignal, band_hz: tuple[float, float], half_width_hz: float = 0.1) -> float | None:
    """In-band SNR: power within +-half_width of the band peak over the
    rest of the band. None when the band carries no power."""
    spectrum = np.abs(np.fft.rfft(pulse.values)) ** 2
    freqs = np.fft.rfftfreq(len(pulse.values), d=1.0 / pulse.fps)
    in_band = (freqs >= band_hz[0]) & (freqs <= band_hz[1])
    if not in_band.any() or spectrum[in_band].sum() == 0.0:
        return None
    banded = np.where(in_band, spectrum, 0.0)
    peak = freqs[int(np.argmax(banded))]
    near = in_band & (np.abs(freqs - peak) <= half_width_hz)
    p_sig = spectrum[near].sum()
    p_noise = spectrum[in_band & ~near].sum()
    if p_noise == 0.0:
        return None
    return float(10.0 * np.log10(p_sig / p_noise))


def _lagged(pulse: PulseSignal) -> PulseSignal:
    v = pulse.values
    return PulseSignal(values=np.concatenate([v[:1], v[:-1]]), fps=pulse.fps, t0=pulse.t0)


def run_pipeline(
    frames: Iterable[tuple[int, float, np.ndarray]],
    landmarks: Iterable[LandmarkSet],
    fps: float,
    config: PipelineConfig | None = None,
) -> HrReport:
    """Run the full extraction pipeline over aligned frame/landmark streams.

    ``frames`` yields (frame_index, timestamp_s, rgb array) as produced by
    formats.read_frame_stream; ``landmarks`` yields the matching records.
    Frames without a detected face are skipped and recorded; the remaining
    samples are treated as contiguous at the stream rate. Raises
    InsufficientDataError when fewer detected frames remain than one POS
    window and one HR window require.
    """
    cfg = config or PipelineConfig()
    samples = []
    roi_timeline: list[str] = []
    skipped: list[int] = []
    n_frames = 0
    for (frame_index, timestamp_s, frame), lms in zip(frames, landmarks):
        if lms.frame_index != frame_index:
            raise AlignmentError(
                f"frame stream index {frame_index} does not match landmark "
                f"record {lms.frame_index}"
            )
        n_frames += 1
        if not lms.detected:
            skipped.append(frame_index)
            continue
        h, w = frame.shape[:2]
        selection = select_roi(lms, estimate_yaw(lms), w, h, cfg.roi)
        samples.append(crop_mean_rgb(frame, selection, timestamp_s))
        roi_timeline.append(selection.region.value)

    pos_window = int(round(cfg.pos_window_s * fps))
    hr_window = int(round(cfg.hr_window_s * fps))
    needed = max(pos_window, hr_window)
    if len(samples) < needed:
        raise InsufficientDataError(
            f"{len(samples)} detected-face frames of {n_frames} total; "
            f"need at least {needed} (POS window {pos_window}, HR window {hr_window})"
        )

    trace = RgbTrace.from_samples(samples, fps)
    raw = pos_sliding(trace, pos_window)
    filtered = apply_filter_chain(raw, trace, cfg.filters)
    peaks = detect_peaks(filtered, cfg.min_peak_separation_s, cfg.peak_prominence_factor)
    estimates = ibi_hr(peaks, cfg.hr_window_s)
    video_hr = float(np.mean([e.hr_bpm for e in estimates]))

    segment_s = min(cfg.welch_segment_s, len(filtered) / fps)
    welch = welch_psd(filtered, segment_s)
    all_forehead = all(r == Region.FOREHEAD.value for r in roi_timeline)
    cross = csd(filtered, filtered if all_forehead else _lagged(filtered), segment_s)
    diagnostics = Diagnostics(
        snr_db_raw=band_snr_db(raw, cfg.filters.band_hz),
        snr_db_filtered=band_snr_db(filtered, cfg.filters.band_hz),
        welch_hr_bpm=spectral_hr(welch, cfg.filters.band_hz).hr_bpm,
        csd_hr_bpm=spectral_hr(cross, cfg.filters.band_hz).hr_bpm,
        pos_windows_over_region_switches=windows_straddling_switches(trace, pos_window),
    )
    return HrReport(
        video_hr_bpm=video_hr,
        estimates=estimates,
        roi_timeline=roi_timeline,
        n_frames=n_frames,
        n_detected=len(samples),
        skipped_frames=skipped,
        region_switches=list(trace.region_switches),
        diagnostics=diagnostics,
    )
