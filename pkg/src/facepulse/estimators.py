"""Scikit-learn style wrappers around the trace-to-heart-rate chain.

These are stateless adapters: ``fit`` only validates input and records the
channel count, so the classes clone, grid-search and pipeline like any
other estimator. X is a single (n, 3) RGB trace sampled at ``fps``, or a
sequence of such traces for batch prediction.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import InsufficientDataError
from .filters import DEFAULT_BAND_HZ, FilterConfig, apply_filter_chain
from .heartrate import (
    DEFAULT_HR_WINDOW_S,
    DEFAULT_MIN_SEPARATION_S,
    DEFAULT_PROMINENCE_FACTOR,
    detect_peaks,
    ibi_hr,
)
from .pos import DEFAULT_WINDOW_S, RgbTrace, pos_sliding


def validate_rgb_trace(X, min_len: int = 2) -> np.ndarray:
    """Check one (n, 3) finite positive RGB trace and return it as float64."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) RGB trace, got shape {X.shape}")
    if len(X) < min_len:
        raise InsufficientDataError(f"trace has {len(X)} samples, need >= {min_len}")
    if not np.all(np.isfinite(X)):
        raise ValueError("trace contains non-finite values")
    return X


def _as_trace(X, fps: float) -> RgbTrace:
    X = validate_rgb_trace(X)
    return RgbTrace(values=X, timestamps=np.arange(len(X)) / fps, fps=fps)


class PulseExtractor(TransformerMixin, BaseEstimator):
    """POS stage alone: (n, 3) RGB trace to a raw (n,) pulse signal."""

    def __init__(self, fps: float = 30.0, window_s: float = DEFAULT_WINDOW_S):
        self.fps = fps
        self.window_s = window_s

    def fit(self, X, y=None):
        validate_rgb_trace(self._first(X))
        self.n_features_in_ = 3
        return self

    def transform(self, X):
        if self._is_batch(X):
            return [self._transform_one(x) for x in X]
        return self._transform_one(X)

    def _transform_one(self, X) -> np.ndarray:
        trace = _as_trace(X, self.fps)
        return pos_sliding(trace, int(round(self.window_s * self.fps))).values

    @staticmethod
    def _is_batch(X) -> bool:
        return isinstance(X, (list, tuple)) or (isinstance(X, np.ndarray) and X.ndim == 3)

    @classmethod
    def _first(cls, X):
        return X[0] if cls._is_batch(X) else X


class HeartRateEstimator(BaseEstimator):
    """Full chain: POS, spectral filtering and interbeat-interval rate.

    ``transform`` returns the filtered pulse; ``predict`` returns the
    per-trace heart rate in BPM (scalar for a single trace, array for a
    sequence of traces).
    """

    def __init__(
        self,
        fps: float = 30.0,
        window_s: float = DEFAULT_WINDOW_S,
        band_hz: tuple[float, float] = DEFAULT_BAND_HZ,
        asf_delta: float = 0.002,
        pulse_direction=None,
        ma_points: int | None = None,
        min_separation_s: float = DEFAULT_MIN_SEPARATION_S,
        prominence_factor: float = DEFAULT_PROMINENCE_FACTOR,
        hr_window_s: float = DEFAULT_HR_WINDOW_S,
    ):
        self.fps = fps
        self.window_s = window_s
        self.band_hz = band_hz
        self.asf_delta = asf_delta
        self.pulse_direction = pulse_direction
        self.ma_points = ma_points
        self.min_separation_s = min_separation_s
        self.prominence_factor = prominence_factor
        self.hr_window_s = hr_window_s

    def _filter_config(self) -> FilterConfig:
        kwargs = dict(asf_delta=self.asf_delta, band_hz=tuple(self.band_hz), ma_points=self.ma_points)
        if self.pulse_direction is not None:
            kwargs["pulse_direction"] = np.asarray(self.pulse_direction, dtype=np.float64)
        return FilterConfig(**kwargs)

    def fit(self, X, y=None):
        validate_rgb_trace(PulseExtractor._first(X))
        self.n_features_in_ = 3
        return self

    def transform(self, X):
        if PulseExtractor._is_batch(X):
            return [self._pulse_one(x).values for x in X]
        return self._pulse_one(X).values

    def _pulse_one(self, X):
        trace = _as_trace(X, self.fps)
        raw = pos_sliding(trace, int(round(self.window_s * self.fps)))
        return apply_filter_chain(raw, trace, self._filter_config())

    def _predict_one(self, X) -> float:
        pulse = self._pulse_one(X)
        peaks = detect_peaks(pulse, self.min_separation_s, self.prominence_factor)
        estimates = ibi_hr(peaks, self.hr_window_s)
        return float(np.mean([e.hr_bpm for e in estimates]))

    def predict(self, X):
        if PulseExtractor._is_batch(X):
            return np.array([self._predict_one(x) for x in X])
        return self._predict_one(X)
