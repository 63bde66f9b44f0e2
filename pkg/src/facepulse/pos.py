"""POS pulse extraction from an RGB trace.

Each sliding window of the trace is temporally normalized (channels divided
by their window means) and projected onto the plane orthogonal to the
normalized skin-tone direction:

    s1 = G - B
    s2 = G + B - 2R
    h  = s1 + (sd(s1) / sd(s2)) * s2

Mean-centered window outputs are overlap-added at stride 1 and divided by
the per-sample overlap count. Because normalization makes a purely
multiplicative intensity change identical in all three channels, such a
change cancels to floating-point noise in the projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, DegenerateWindowError, InsufficientDataError
from .roi import Region, RgbSample

DEFAULT_WINDOW_S = 1.6


@dataclass
class RgbTrace:
    """Per-frame ROI color means over time.

    ``values`` is (n, 3) in RGB order, ``timestamps`` is (n,) seconds and
    strictly increasing. ``regions`` labels the source ROI of each sample;
    ``region_switches`` lists the sample indices where the label changed
    from the previous sample.
    """

    values: np.ndarray
    timestamps: np.ndarray
    fps: float
    regions: tuple[Region, ...] = ()
    region_switches: tuple[int, ...] = field(default=(), init=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.timestamps = np.asarray(self.timestamps, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[1] != 3:
            raise AlignmentError(f"trace values must be (n, 3), got {self.values.shape}")
        if self.timestamps.shape != (self.values.shape[0],):
            raise AlignmentError("trace timestamps must align with values")
        if len(self.timestamps) > 1 and not np.all(np.diff(self.timestamps) > 0):
            raise AlignmentError("trace timestamps must be strictly increasing")
        switches: tuple[int, ...] = ()
        if self.regions:
            if len(self.regions) != len(self.values):
                raise AlignmentError("region labels must align with values")
            switches = tuple(
                i
                for i in range(1, len(self.regions))
                if self.regions[i] != self.regions[i - 1]
            )
        self.region_switches = switches

    @classmethod
    def from_samples(cls, samples: list[RgbSample], fps: float) -> "RgbTrace":
        values = np.array([[s.r, s.g, s.b] for s in samples], dtype=np.float64)
        timestamps = np.array([s.timestamp_s for s in samples], dtype=np.float64)
        regions = tuple(s.region for s in samples)
        return cls(values=values, timestamps=timestamps, fps=fps, regions=regions)

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class PulseSignal:
    """Unitless zero-mean pulse waveform sampled at the trace frame rate."""

    values: np.ndarray
    fps: float
    t0: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)

    def times(self) -> np.ndarray:
        return self.t0 + np.arange(len(self.values)) / self.fps

    def __len__(self) -> int:
        return len(self.values)


def temporal_normalize(window: np.ndarray) -> np.ndarray:
    """Divide each channel of an (n, 3) window by its window mean.

    Every normalized channel then has mean 1, which removes the common
    intensity scale. Raises DegenerateWindowError when a channel mean is
    not strictly positive.
    """
    window = np.asarray(window, dtype=np.float64)
    if window.ndim != 2 or window.shape[1] != 3 or window.shape[0] < 2:
        raise DegenerateWindowError(f"window must be (n>=2, 3), got {window.shape}")
    means = window.mean(axis=0)
    if np.any(means <= 0.0):
        raise DegenerateWindowError(f"nonpositive channel mean {means.tolist()}")
    return window / means


def pos_project(normalized_window: np.ndarray) -> np.ndarray:
    """Project a temporally normalized window onto the pulse axis.

    Returns the mean-centered combined signal of length n. The mixing
    weight is the ratio of population standard deviations sd(s1)/sd(s2),
    taken as 0 when s2 is constant.
    """
    x = np.asarray(normalized_window, dtype=np.float64)
    s1 = x[:, 1] - x[:, 2]
    s2 = x[:, 1] + x[:, 2] - 2.0 * x[:, 0]
    sd2 = s2.std()
    alpha = s1.std() / sd2 if sd2 > 0.0 else 0.0
    h = s1 + alpha * s2
    return h - h.mean()


def pos_sliding(trace: RgbTrace, window_len: int) -> PulseSignal:
    """Overlap-add POS over every window start offset (stride 1).

    Output has the trace's length; each sample is the sum of the window
    chunks covering it divided by how many windows cover it, re-centered to
    zero mean at the end. Raises InsufficientDataError when the trace is
    shorter than one window.
    """
    n = len(trace)
    if window_len < 2:
        raise InsufficientDataError(f"window_len must be >= 2, got {window_len}")
    if n < window_len:
        raise InsufficientDataError(
            f"trace has {n} samples but the POS window needs {window_len}"
        )
    windows = np.lib.stride_tricks.sliding_window_view(trace.values, window_len, axis=0)
    # windows: (n_win, 3, window_len) -> normalize each along the time axis
    means = windows.mean(axis=2, keepdims=True)
    if np.any(means <= 0.0):
        raise DegenerateWindowError("a window has a nonpositive channel mean")
    norm = windows / means
    s1 = norm[:, 1, :] - norm[:, 2, :]
    s2 = norm[:, 1, :] + norm[:, 2, :] - 2.0 * norm[:, 0, :]
    sd1 = s1.std(axis=1)
    sd2 = s2.std(axis=1)
    alpha = np.divide(sd1, sd2, out=np.zeros_like(sd1), where=sd2 > 0.0)
    chunks = s1 + alpha[:, None] * s2
    chunks -= chunks.mean(axis=1, keepdims=True)

    out = np.zeros(n)
    count = np.zeros(n)
    n_win = chunks.shape[0]
    for j in range(window_len):  # fixed summation order keeps this deterministic
        out[j : j + n_win] += chunks[:, j]
        count[j : j + n_win] += 1.0
    out /= count
    out -= out.mean()
    return PulseSignal(values=out, fps=trace.fps, t0=float(trace.timestamps[0]))


def windows_straddling_switches(trace: RgbTrace, window_len: int) -> int:
    """How many POS windows span at least one ROI region switch.

    A window starting at m covers samples [m, m + window_len); it straddles
    a switch at index s when m < s <= m + window_len - 1. Purely a
    diagnostic: switches introduce a color step the filters must absorb.
    """
    n = len(trace)
    n_win = n - window_len + 1
    if n_win <= 0 or not trace.region_switches:
        return 0
    flagged = np.zeros(n_win, dtype=bool)
    for s in trace.region_switches:
        lo = max(0, s - window_len + 1)
        hi = min(n_win, s)
        flagged[lo:hi] = True
    return int(flagged.sum())
