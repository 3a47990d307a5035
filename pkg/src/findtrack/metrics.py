"""Region and contour quality measures for mask sequences.

J is plain intersection-over-union. F is the boundary F-measure: boundary
pixels (4-connectivity, image border counts as background) match when they
lie within Euclidean distance r of the other mask's boundary, with
r = max(1, round(0.008 * image diagonal)); F is the harmonic mean of the
resulting precision and recall. Frames where both masks are empty score
1.0 on both measures, frames where exactly one is empty score 0.0, which
keeps per-frame averaging total. J&F is always the arithmetic mean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, LengthMismatch
from .maskops import boundary, dilate_disk
from .types import BinaryMask, MaskSequence


def boundary_tolerance(width: int, height: int) -> int:
    """Match radius in pixels for the contour measure."""
    diagonal = float(np.hypot(width, height))
    return max(1, round(0.008 * diagonal))


def region_j(pred: BinaryMask, gt: BinaryMask) -> float:
    """Intersection over union; 1.0 when both masks are empty."""
    if pred.width != gt.width or pred.height != gt.height:
        raise DimensionMismatch(f"{pred.width}x{pred.height} vs {gt.width}x{gt.height}")
    union = int(np.logical_or(pred.bits, gt.bits).sum())
    if union == 0:
        return 1.0
    inter = int(np.logical_and(pred.bits, gt.bits).sum())
    return inter / union


def contour_f(pred: BinaryMask, gt: BinaryMask) -> float:
    """Boundary F-measure with diagonal-proportional tolerance."""
    if pred.width != gt.width or pred.height != gt.height:
        raise DimensionMismatch(f"{pred.width}x{pred.height} vs {gt.width}x{gt.height}")
    pred_empty = pred.is_empty()
    gt_empty = gt.is_empty()
    if pred_empty and gt_empty:
        return 1.0
    if pred_empty or gt_empty:
        return 0.0
    radius = boundary_tolerance(pred.width, pred.height)
    pred_boundary = boundary(pred.bits)
    gt_boundary = boundary(gt.bits)
    precision = float(pred_boundary[dilate_disk(gt_boundary, radius)].sum()) / float(pred_boundary.sum())
    recall = float(gt_boundary[dilate_disk(pred_boundary, radius)].sum()) / float(gt_boundary.sum())
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def evaluate_sequence(pred: MaskSequence, gt: MaskSequence) -> tuple[float, float, float]:
    """Frame-averaged (J, F, J&F) for two aligned mask sequences."""
    if len(pred) != len(gt):
        raise LengthMismatch(f"{len(pred)} predicted vs {len(gt)} ground-truth masks")
    j_values = [region_j(p, g) for p, g in zip(pred.masks, gt.masks)]
    f_values = [contour_f(p, g) for p, g in zip(pred.masks, gt.masks)]
    j = float(np.mean(j_values))
    f = float(np.mean(f_values))
    return j, f, (j + f) / 2.0


@dataclass(frozen=True)
class EvalReport:
    """Per-sequence (name, J, F, J&F) rows plus their means."""

    per_sequence: tuple[tuple[str, float, float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "per_sequence", tuple(self.per_sequence))
        if not self.per_sequence:
            raise LengthMismatch("report needs at least one sequence")

    @property
    def mean_j(self) -> float:
        return float(np.mean([row[1] for row in self.per_sequence]))

    @property
    def mean_f(self) -> float:
        return float(np.mean([row[2] for row in self.per_sequence]))

    @property
    def mean_jf(self) -> float:
        return (self.mean_j + self.mean_f) / 2.0

    def to_json_obj(self) -> dict:
        return {
            "sequences": [
                {"name": name, "J": j, "F": f, "JF": jf}
                for name, j, f, jf in self.per_sequence
            ],
            "mean": {"J": self.mean_j, "F": self.mean_f, "JF": self.mean_jf},
        }


def build_report(named_pairs) -> EvalReport:
    """Evaluate (name, pred, gt) triples into a report."""
    rows = []
    for name, pred, gt in named_pairs:
        j, f, jf = evaluate_sequence(pred, gt)
        rows.append((name, j, f, jf))
    return EvalReport(per_sequence=tuple(rows))
