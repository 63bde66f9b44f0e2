"""extract-landmarks command line entry point."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .extract import ExtractionJob, InputError, extract, load_occlusion_ranges
from .validate import validate_outputs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extract-landmarks",
        description="Convert a video into facepulse frame/landmark streams.",
    )
    parser.add_argument("--input", type=Path, required=True, help="input video file")
    parser.add_argument("--out", type=Path, required=True, help="output directory")
    parser.add_argument("--downsample", type=int, default=1, help="spatial block-average factor")
    parser.add_argument("--fps", type=float, default=None, help="resample to this frame rate")
    parser.add_argument(
        "--backend",
        choices=("auto", "mediapipe", "centroid"),
        default="auto",
        help="landmark backend; auto prefers mediapipe when installed",
    )
    parser.add_argument(
        "--occlusions",
        type=Path,
        help="JSON file of [{start_frame, end_frame}] forehead-occlusion ranges",
    )
    parser.add_argument("--no-validate", action="store_true", help="skip output validation")
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    occlusions = ()
    if args.occlusions:
        occlusions = load_occlusion_ranges(args.occlusions)
    job = ExtractionJob(
        input_path=args.input,
        output_dir=args.out,
        target_fps=args.fps,
        downsample_factor=args.downsample,
        backend_name=args.backend,
        occlusions=occlusions,
    )
    try:
        result = extract(job)
    except (InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"wrote {result.frame_count} frames ({result.detected_count} with a detected face) "
        f"at {result.width}x{result.height} {result.fps:g} fps to {args.out}"
    )
    if not args.no_validate:
        report = validate_outputs(args.out)
        for violation in report.violations:
            print(f"violation: {violation}", file=sys.stderr)
        if not report.ok:
            return 1
    return 0


def main() -> None:
    sys.exit(cli_main())
