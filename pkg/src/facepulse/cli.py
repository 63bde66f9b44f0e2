"""Command-line surface.

Subcommands: extract (video streams to HR report), synth (generate
synthetic streams with ground truth), eval (compare estimates against
ground truth), psd (Welch/CSD spectra of the extracted pulse), bench
(pipeline throughput on synthetic input).

Exit codes: 0 success, 1 data error, 2 usage/config error, 3 insufficient
data.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .errors import ConfigError, FacepulseError, InsufficientDataError
from .filters import apply_filter_chain
from .formats import (
    read_frame_stream,
    read_landmark_stream,
    write_frame_stream,
    write_landmark_stream,
)
from .heartrate import csd, welch_psd
from .pipeline import PipelineConfig, run_pipeline
from .evaluation import evaluate
from .pos import RgbTrace, pos_sliding
from .roi import crop_mean_rgb, select_roi
from .landmarks import estimate_yaw
from .synth import SynthConfig, synth_frames

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE = 2
EXIT_INSUFFICIENT = 3


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config file; flags below override it")
    p.add_argument("--roi-size", type=int, dest="roi_size")
    p.add_argument("--yaw-threshold", type=float, dest="yaw_threshold_deg")
    p.add_argument("--asf-delta", type=float, dest="asf_delta")
    p.add_argument("--band", type=float, nargs=2, metavar=("LO", "HI"), dest="band_hz")
    p.add_argument("--ma-points", type=int, dest="ma_points")
    p.add_argument("--pos-window", type=float, dest="pos_window_s")
    p.add_argument("--hr-window", type=float, dest="hr_window_s")
    p.add_argument("--min-peak-separation", type=float, dest="min_peak_separation_s")
    p.add_argument("--prominence-factor", type=float, dest="peak_prominence_factor")
    p.add_argument("--welch-segment", type=float, dest="welch_segment_s")


_CONFIG_KEYS = (
    "roi_size",
    "yaw_threshold_deg",
    "asf_delta",
    "band_hz",
    "ma_points",
    "pos_window_s",
    "hr_window_s",
    "min_peak_separation_s",
    "peak_prominence_factor",
    "welch_segment_s",
)


def _load_config(args: argparse.Namespace) -> PipelineConfig:
    values: dict = {}
    if getattr(args, "config", None):
        try:
            values.update(json.loads(Path(args.config).read_text()))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid config JSON: {exc}") from exc
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return PipelineConfig.from_dict(values)


def _parse_yaw_profile(text: str) -> tuple[tuple[float, float], ...]:
    try:
        pairs = []
        for chunk in text.split(","):
            t, deg = chunk.split(":")
            pairs.append((float(t), float(deg)))
        return tuple(pairs)
    except ValueError as exc:
        raise ConfigError(f"invalid yaw profile {text!r}; expected 't:deg,t:deg,...'") from exc


def _read_subject_csv(path: Path) -> list[tuple[str, float]]:
    rows = []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row:
                continue
            if len(row) < 2:
                raise FacepulseError(f"{path}: row {i} needs 'subject,hr_bpm'")
            if i == 0 and not _is_number(row[1]):
                continue  # header row
            if not _is_number(row[1]):
                raise FacepulseError(f"{path}: row {i}: {row[1]!r} is not a number")
            rows.append((row[0], float(row[1])))
    return rows


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def _cmd_extract(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    header, frames = read_frame_stream(args.frames, args.payload)
    landmarks = read_landmark_stream(args.landmarks)
    report = run_pipeline(frames, landmarks, fps=header.fps, config=cfg)
    Path(args.out).write_text(report.to_json() + "\n")
    print(f"video_hr_bpm={report.video_hr_bpm:.2f} windows={len(report.estimates)} -> {args.out}")
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = SynthConfig(
        seed=args.seed,
        hr_bpm=args.hr,
        fps=args.fps,
        duration_s=args.duration,
        pulse_rel_amp=args.pulse_amp,
        intensity_mod=(args.intensity_amp, args.intensity_freq),
        noise_sd=args.noise_sd,
        yaw_profile=_parse_yaw_profile(args.yaw_profile),
        occlude_forehead=args.occlude_forehead,
    )
    frames, landmarks, truth = synth_frames(cfg, args.width, args.height, roi_size=args.roi_size)
    write_frame_stream(out_dir / "frames.json", out_dir / "frames.rgb", frames, cfg.fps)
    write_landmark_stream(out_dir / "landmarks.jsonl", landmarks)
    truth_doc = {
        "hr_bpm": truth.hr_bpm,
        "fps": truth.fps,
        "duration_s": cfg.duration_s,
        "peak_times_s": [float(t) for t in truth.peak_times],
        "yaw_deg": [float(v) for v in truth.yaw_deg],
        "seed": cfg.seed,
    }
    (out_dir / "truth.json").write_text(json.dumps(truth_doc, indent=2) + "\n")
    print(f"wrote {cfg.n_frames} frames at {args.width}x{args.height} to {out_dir}")
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    report = evaluate(_read_subject_csv(args.estimates), _read_subject_csv(args.truth))
    Path(args.out).write_text(report.to_json() + "\n")
    csv_path = args.csv or Path(args.out).with_suffix(".csv")
    report.write_csv(csv_path)
    print(
        f"mae={report.mae_bpm:.3f} rmse={report.rmse_bpm:.3f} "
        f"mean_diff={report.bland_altman.mean_diff_bpm:.3f} -> {args.out}"
    )
    return EXIT_OK


def _extract_pulse(args: argparse.Namespace, cfg: PipelineConfig):
    header, frames = read_frame_stream(args.frames, args.payload)
    landmarks = read_landmark_stream(args.landmarks)
    samples = []
    for (frame_index, timestamp_s, frame), lms in zip(frames, landmarks):
        if not lms.detected:
            continue
        h, w = frame.shape[:2]
        selection = select_roi(lms, estimate_yaw(lms), w, h, cfg.roi)
        samples.append(crop_mean_rgb(frame, selection, timestamp_s))
    if len(samples) < int(round(cfg.pos_window_s * header.fps)):
        raise InsufficientDataError(f"only {len(samples)} detected frames")
    trace = RgbTrace.from_samples(samples, header.fps)
    raw = pos_sliding(trace, int(round(cfg.pos_window_s * header.fps)))
    return apply_filter_chain(raw, trace, cfg.filters)


def _cmd_psd(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    pulse = _extract_pulse(args, cfg)
    segment_s = min(cfg.welch_segment_s, len(pulse) / pulse.fps)
    welch = welch_psd(pulse, segment_s)
    cross = csd(pulse, pulse, segment_s)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["freq_hz", "welch_power", "csd_magnitude"])
        for f, pw, pc in zip(welch.freqs, welch.power, cross.power):
            writer.writerow([f, pw, pc])
    print(f"wrote {len(welch.freqs)} bins -> {args.out}")
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = SynthConfig(seed=args.seed, hr_bpm=72.0, fps=args.fps, duration_s=args.duration, noise_sd=2.0)
    frames, landmarks, _ = synth_frames(cfg, args.width, args.height, roi_size=args.roi_size)
    frame_list = [(i, i / cfg.fps, f) for i, f in enumerate(frames)]
    start = time.perf_counter()
    report = run_pipeline(iter(frame_list), iter(landmarks), fps=cfg.fps)
    elapsed = time.perf_counter() - start
    throughput = len(frame_list) / elapsed
    print(
        json.dumps(
            {
                "frames": len(frame_list),
                "elapsed_s": round(elapsed, 4),
                "frames_per_s": round(throughput, 1),
                "video_hr_bpm": round(report.video_hr_bpm, 2),
            }
        )
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="facepulse",
        description="Heart rate from facial video streams (ROI selection, POS, IBI analysis).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="run the pipeline and write an HR report")
    p.add_argument("--frames", type=Path, required=True, help="frame stream header JSON")
    p.add_argument("--payload", type=Path, required=True, help="raw rgb8 payload")
    p.add_argument("--landmarks", type=Path, required=True, help="landmark stream JSONL")
    p.add_argument("--out", type=Path, required=True, help="report JSON output")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("synth", help="write synthetic frame/landmark/ground-truth files")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--hr", type=float, default=72.0)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--duration", type=float, default=30.0)
    p.add_argument("--pulse-amp", type=float, default=0.002)
    p.add_argument("--noise-sd", type=float, default=0.0)
    p.add_argument("--intensity-amp", type=float, default=0.0)
    p.add_argument("--intensity-freq", type=float, default=0.0)
    p.add_argument("--yaw-profile", default="0:0", help="'t:deg,t:deg,...' piecewise-linear")
    p.add_argument("--occlude-forehead", action="store_true")
    p.add_argument("--width", type=int, default=160)
    p.add_argument("--height", type=int, default=160)
    p.add_argument("--roi-size", type=int, default=40)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("eval", help="compare estimate CSV against ground-truth CSV")
    p.add_argument("--estimates", type=Path, required=True, help="CSV: subject,hr_bpm")
    p.add_argument("--truth", type=Path, required=True, help="CSV: subject,hr_bpm")
    p.add_argument("--out", type=Path, required=True, help="report JSON output")
    p.add_argument("--csv", type=Path, help="per-subject CSV path (default: out path with .csv)")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("psd", help="write Welch and CSD spectra of the extracted pulse")
    p.add_argument("--frames", type=Path, required=True)
    p.add_argument("--payload", type=Path, required=True)
    p.add_argument("--landmarks", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="CSV output")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_psd)

    p = sub.add_parser("bench", help="measure pipeline throughput on synthetic input")
    p.add_argument("--duration", type=float, default=30.0)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--width", type=int, default=160)
    p.add_argument("--height", type=int, default=160)
    p.add_argument("--roi-size", type=int, default=40)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=_cmd_bench)

    return parser


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (FacepulseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
