"""Heart rate estimation from facial video.

Pipeline: per-frame 3D facial landmarks select an adaptive measurement
region (forehead, falling back to a yaw-chosen cheek), spatially averaged
RGB traces are projected onto the plane orthogonal to the skin tone (POS),
spectrally filtered, and converted to heart rate through interbeat-interval
analysis. A synthetic generator with closed-form ground truth backs the
test suite, and the evaluation module computes agreement statistics against
reference measurements.
"""

from .errors import (
    AlignmentError,
    ConfigError,
    DegenerateSpectrumError,
    DegenerateWindowError,
    FacepulseError,
    FormatError,
    InsufficientDataError,
    InsufficientPeaksError,
    LandmarkParseError,
    NoFaceError,
    RoiOutOfBoundsError,
    SchemaError,
    SubjectMismatchError,
    TruncatedStreamError,
)
from .landmarks import (
    FOREHEAD_CENTER,
    LEFT_CHEEK,
    NUM_LANDMARKS,
    RIGHT_CHEEK,
    LandmarkSet,
    estimate_yaw,
    forehead_visible,
    parse_landmark_frame,
)
from .roi import Region, RgbSample, RoiConfig, RoiSelection, crop_mean_rgb, select_roi
from .pos import PulseSignal, RgbTrace, pos_project, pos_sliding, temporal_normalize
from .filters import (
    FilterConfig,
    SpectralWeights,
    apply_filter_chain,
    asf_weights,
    cdf_weights,
    moving_average,
)
from .heartrate import (
    HrEstimate,
    HrMethod,
    PeakTrain,
    Psd,
    csd,
    detect_peaks,
    ibi_hr,
    spectral_hr,
    welch_psd,
)
from .synth import SynthConfig, SynthTruth, synth_frames, synth_trace
from .pipeline import Diagnostics, HrReport, PipelineConfig, run_pipeline
from .evaluation import BlandAltman, EvalReport, evaluate
from .estimators import HeartRateEstimator, PulseExtractor

__version__ = "0.1.0"
