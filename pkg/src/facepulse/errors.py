"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: config/usage problems exit 2,
insufficient data exits 3, every other data error exits 1.
"""


class FacepulseError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(FacepulseError):
    """Invalid configuration value or combination."""


class LandmarkParseError(FacepulseError):
    """Landmark record is not parseable."""


class SchemaError(FacepulseError):
    """Record parsed but violates the stream schema (point count, ranges, order)."""


class NoFaceError(FacepulseError):
    """Operation requires a detected face but the record has none."""


class RoiOutOfBoundsError(FacepulseError):
    """Selected ROI rectangle does not fit inside the frame."""


class FormatError(FacepulseError):
    """Frame stream header/payload is malformed."""


class TruncatedStreamError(FormatError):
    """Payload size disagrees with the header's frame count."""


class DegenerateWindowError(FacepulseError):
    """Window cannot be temporally normalized (nonpositive channel mean)."""


class DegenerateSpectrumError(FacepulseError):
    """Spectrum has a zero DC bin and cannot be amplitude-normalized."""


class AlignmentError(FacepulseError):
    """Two signals/streams that must be aligned are not (length, fps, index)."""


class InsufficientDataError(FacepulseError):
    """Not enough samples/frames for the requested operation."""


class InsufficientPeaksError(InsufficientDataError):
    """Fewer than two pulse peaks; no interbeat interval can be formed."""


class SubjectMismatchError(FacepulseError):
    """Estimate and ground-truth tables do not share the same subject keys."""
