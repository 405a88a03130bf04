"""Evidence localization scoring: span matching and mean IoU.

Predicted and ground-truth span sets rarely have equal counts, so pairing is
made explicit: a one-to-one assignment maximizing total IoU, with unmatched
spans on either side contributing zero and the denominator max(|pred|, |gt|).
This penalizes both over- and under-segmentation and reduces to the plain
paired mean when counts agree. All pair IoUs and the assignment objective are
exact rationals; floats appear only in returned values.

The optimizer is a bitmask dynamic program over subsets of the smaller side,
deliberately a different algorithm from the brute-force permutation oracle
used in tests. A greedy policy is available for sensitivity checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from ..errors import EmptyGroundTruth, InvalidArgs
from ..temporal import SpanSet, TimeSpan, span_iou, span_iou_fraction

_MAX_EXACT = 20  # bitmask DP over the smaller side; plenty for evidence sets


@dataclass(frozen=True)
class MatchedPair:
    pred: Optional[TimeSpan]
    gt: Optional[TimeSpan]
    iou: float


def _assignment_optimal(
    pred: SpanSet, gt: SpanSet
) -> tuple[list[tuple[int, int]], Fraction]:
    """Max-total-IoU one-to-one assignment as (pred_idx, gt_idx) pairs."""
    rows, cols = list(pred), list(gt)
    swapped = False
    if len(cols) > len(rows):
        rows, cols = cols, rows
        swapped = True
    if len(cols) > _MAX_EXACT:
        raise InvalidArgs(
            f"exact matching supports up to {_MAX_EXACT} spans per side, got {len(cols)}"
        )
    iou = [[span_iou_fraction(r, c) for c in cols] for r in rows]
    n_rows, n_cols = len(rows), len(cols)

    @lru_cache(maxsize=None)
    def best(i: int, mask: int) -> Fraction:
        if i == n_rows:
            return Fraction(0)
        value = best(i + 1, mask)  # leave row i unmatched
        for j in range(n_cols):
            if not mask & (1 << j):
                candidate = iou[i][j] + best(i + 1, mask | (1 << j))
                if candidate > value:
                    value = candidate
        return value

    total = best(0, 0)
    pairs: list[tuple[int, int]] = []
    mask = 0
    for i in range(n_rows):
        target = best(i, mask)
        if best(i + 1, mask) == target:
            continue  # deterministic tie-break: prefer skipping
        for j in range(n_cols):
            if not mask & (1 << j) and iou[i][j] + best(i + 1, mask | (1 << j)) == target:
                pairs.append((i, j))
                mask |= 1 << j
                break
    best.cache_clear()
    if swapped:
        pairs = [(j, i) for i, j in pairs]
    return pairs, total


def _assignment_greedy(
    pred: SpanSet, gt: SpanSet
) -> tuple[list[tuple[int, int]], Fraction]:
    """Each prediction takes the best remaining gt span, in order."""
    taken: set[int] = set()
    pairs: list[tuple[int, int]] = []
    total = Fraction(0)
    gts = list(gt)
    for i, p in enumerate(pred):
        best_j, best_iou = -1, Fraction(0)
        for j, g in enumerate(gts):
            if j in taken:
                continue
            value = span_iou_fraction(p, g)
            if value > best_iou:
                best_j, best_iou = j, value
        if best_j >= 0 and best_iou > 0:
            taken.add(best_j)
            pairs.append((i, best_j))
            total += best_iou
    return pairs, total


_POLICIES = {"optimal": _assignment_optimal, "greedy": _assignment_greedy}


def match_spans(pred: SpanSet, gt: SpanSet, policy: str = "optimal") -> list[MatchedPair]:
    """Pair up spans; unmatched spans appear with the missing side absent."""
    if policy not in _POLICIES:
        raise InvalidArgs(f"unknown matching policy {policy!r}")
    pairs, _ = _POLICIES[policy](pred, gt)
    by_pred = {i: j for i, j in pairs}
    matched_gt = set(by_pred.values())
    out: list[MatchedPair] = []
    preds, gts = list(pred), list(gt)
    for i, p in enumerate(preds):
        j = by_pred.get(i)
        if j is None:
            out.append(MatchedPair(p, None, 0.0))
        else:
            out.append(MatchedPair(p, gts[j], span_iou(p, gts[j])))
    for j, g in enumerate(gts):
        if j not in matched_gt:
            out.append(MatchedPair(None, g, 0.0))
    return out


def mean_iou(pred: SpanSet, gt: SpanSet, policy: str = "optimal") -> float:
    """Total assigned IoU divided by max(|pred|, |gt|), computed exactly.

    Equals the plain paired mean when both sides have the same count. Raises
    EmptyGroundTruth when gt is empty; an empty prediction scores 0.
    """
    if not gt:
        raise EmptyGroundTruth("ground truth has no spans")
    if policy not in _POLICIES:
        raise InvalidArgs(f"unknown matching policy {policy!r}")
    if not pred:
        return 0.0
    _, total = _POLICIES[policy](pred, gt)
    return float(total / max(len(pred), len(gt)))
