"""Scoring mined patterns against a reference pattern file.

A mined pattern matches a reference pattern when both cover exactly the
same object set and their time spans agree closely enough: intersection
over union of the two intervals strictly above the threshold. Matching is
one-to-one and greedy in descending IoU. Precision, recall and F1 follow
from the match count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import CoMovementPattern


def span_iou(a: tuple[int, int], b: tuple[int, int]) -> float:
    """Interval IoU on [start, end] spans; degenerate spans match only
    when identical."""
    lo = max(a[0], b[0])
    hi = min(a[1], b[1])
    inter = max(0, hi - lo)
    union = max(a[1], b[1]) - min(a[0], b[0])
    if union <= 0:
        return 1.0 if a == b else 0.0
    return inter / union


@dataclass(frozen=True)
class EvalResult:
    precision: float
    recall: float
    f1: float
    matches: int
    mined: int
    reference: int

    def formatted(self) -> str:
        return (
            f"precision={self.precision:.4f} recall={self.recall:.4f} "
            f"f1={self.f1:.4f} matches={self.matches} "
            f"mined={self.mined} reference={self.reference}"
        )


def evaluate(
    mined: Sequence[CoMovementPattern],
    reference: Sequence[CoMovementPattern],
    iou_threshold: float = 0.8,
) -> EvalResult:
    """Greedy one-to-one matching by object set and span IoU."""
    pairs: list[tuple[float, int, int]] = []
    for i, mp in enumerate(mined):
        if mp.span is None:
            continue
        for j, rp in enumerate(reference):
            if rp.span is None or mp.objects != rp.objects:
                continue
            iou = span_iou(mp.span, rp.span)
            if iou > iou_threshold:
                pairs.append((iou, i, j))
    pairs.sort(key=lambda t: (-t[0], t[1], t[2]))
    used_m: set[int] = set()
    used_r: set[int] = set()
    matches = 0
    for _, i, j in pairs:
        if i in used_m or j in used_r:
            continue
        used_m.add(i)
        used_r.add(j)
        matches += 1
    precision = matches / len(mined) if mined else 0.0
    recall = matches / len(reference) if reference else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return EvalResult(precision, recall, f1, matches, len(mined), len(reference))
