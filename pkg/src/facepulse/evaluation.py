"""Agreement statistics between extracted and ground-truth heart rates.

Per subject the absolute error is |estimate - truth|; aggregates are the
mean absolute error, root mean squared error and mean error-rate
percentage mean(AE / truth) * 100. Bland-Altman statistics use the signed
difference truth - estimate with sample standard deviation (ddof=1) and
symmetric limits at 2 and 3 standard deviations around the mean
difference.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import InsufficientDataError, SubjectMismatchError


@dataclass(frozen=True)
class SubjectResult:
    subject: str
    ground_truth_bpm: float
    estimate_bpm: float
    abs_error_bpm: float
    diff_bpm: float  # ground truth minus estimate


@dataclass(frozen=True)
class BlandAltman:
    mean_diff_bpm: float
    sd_diff_bpm: float
    lower_2sd: float
    upper_2sd: float
    lower_3sd: float
    upper_3sd: float


@dataclass
class EvalReport:
    subjects: list[SubjectResult]
    mae_bpm: float
    rmse_bpm: float
    mean_error_rate_pct: float
    bland_altman: BlandAltman

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        d = json.loads(text)
        return cls(
            subjects=[SubjectResult(**s) for s in d["subjects"]],
            mae_bpm=d["mae_bpm"],
            rmse_bpm=d["rmse_bpm"],
            mean_error_rate_pct=d["mean_error_rate_pct"],
            bland_altman=BlandAltman(**d["bland_altman"]),
        )

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["subject", "ground_truth_bpm", "estimate_bpm", "abs_error_bpm", "diff_bpm"])
            for s in self.subjects:
                writer.writerow([s.subject, s.ground_truth_bpm, s.estimate_bpm, s.abs_error_bpm, s.diff_bpm])


def evaluate(
    estimates: Iterable[tuple[str, float]],
    ground_truth: Iterable[tuple[str, float]],
) -> EvalReport:
    """Join per-subject estimates against ground truth and aggregate.

    Subject keys must match exactly (order-insensitive); results are
    reported in sorted subject order so the report does not depend on input
    ordering.
    """
    est = {str(k): float(v) for k, v in estimates}
    truth = {str(k): float(v) for k, v in ground_truth}
    if len(est) == 0:
        raise InsufficientDataError("no estimates to evaluate")
    if set(est) != set(truth):
        missing = sorted(set(truth) - set(est))
        extra = sorted(set(est) - set(truth))
        raise SubjectMismatchError(
            f"subject keys differ: missing estimates for {missing}, "
            f"estimates without truth {extra}"
        )

    subjects = []
    for key in sorted(est):
        gt = truth[key]
        e = est[key]
        subjects.append(
            SubjectResult(
                subject=key,
                ground_truth_bpm=gt,
                estimate_bpm=e,
                abs_error_bpm=abs(e - gt),
                diff_bpm=gt - e,
            )
        )
    ae = np.array([s.abs_error_bpm for s in subjects])
    gt = np.array([s.ground_truth_bpm for s in subjects])
    diffs = np.array([s.diff_bpm for s in subjects])
    mean_diff = float(diffs.mean())
    sd_diff = float(diffs.std(ddof=1)) if len(diffs) > 1 else 0.0
    return EvalReport(
        subjects=subjects,
        mae_bpm=float(ae.mean()),
        rmse_bpm=float(math.sqrt((ae**2).mean())),
        mean_error_rate_pct=float((ae / gt).mean() * 100.0),
        bland_altman=BlandAltman(
            mean_diff_bpm=mean_diff,
            sd_diff_bpm=sd_diff,
            lower_2sd=mean_diff - 2.0 * sd_diff,
            upper_2sd=mean_diff + 2.0 * sd_diff,
            lower_3sd=mean_diff - 3.0 * sd_diff,
            upper_3sd=mean_diff + 3.0 * sd_diff,
        ),
    )
