"""Adapter turning real videos into facepulse frame/landmark streams."""

from .backends import CentroidTemplateBackend, MediaPipeBackend, make_backend
from .extract import ExtractionJob, ExtractionResult, InputError, extract, load_occlusion_ranges
from .validate import ValidationReport, validate_outputs

__version__ = "0.1.0"
