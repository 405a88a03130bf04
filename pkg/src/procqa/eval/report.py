"""Per-type and overall aggregation in the two-column Score / mIoU% layout."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from ..dataset.loader import QAItem, QAType
from .judge import JudgeScore

TYPE_ORDER = (
    QAType.PREPARATION,
    QAType.EVOLUTION,
    QAType.COUNTERFACTUAL,
    QAType.MISTAKE,
)


@dataclass(frozen=True)
class EvalRecord:
    """One scored item: rubric score plus evidence IoU."""

    qa_id: str
    qa_type: QAType
    judge: JudgeScore
    iou: float
    failed: bool = False

    def to_jsonable(self) -> dict:
        return {
            "qa_id": self.qa_id,
            "qa_type": self.qa_type.value,
            "judge": self.judge.to_jsonable(),
            "iou": self.iou,
            "failed": self.failed,
        }


@dataclass(frozen=True)
class TypeAggregate:
    count: int
    mean_score: float
    mean_iou: float
    failures: int


@dataclass(frozen=True)
class BenchmarkReport:
    per_type: dict[QAType, TypeAggregate]
    overall: TypeAggregate

    def to_jsonable(self) -> dict:
        def agg(a: TypeAggregate) -> dict:
            return {
                "count": a.count,
                "score": round(a.mean_score, 2),
                "miou_pct": round(a.mean_iou * 100, 2),
                "failures": a.failures,
            }

        return {
            "per_type": {t.value: agg(a) for t, a in self.per_type.items()},
            "overall": agg(self.overall),
        }


def _aggregate(records: Sequence[EvalRecord]) -> TypeAggregate:
    n = len(records)
    if n == 0:
        return TypeAggregate(0, 0.0, 0.0, 0)
    return TypeAggregate(
        count=n,
        mean_score=sum(r.judge.average for r in records) / n,
        mean_iou=sum(r.iou for r in records) / n,
        failures=sum(1 for r in records if r.failed),
    )


def aggregate_report(
    items: Sequence[QAItem],
    predictions: Mapping[str, object],
    scores: Mapping[str, EvalRecord],
) -> BenchmarkReport:
    """Fold per-item scores into per-type and overall means.

    Items with no prediction (or no score) count as failures at score 0 and
    IoU 0; the overall row is the item-weighted mean across all items.
    """
    records: list[EvalRecord] = []
    for item in items:
        record = scores.get(item.qa_id)
        if record is None or item.qa_id not in predictions:
            record = EvalRecord(
                qa_id=item.qa_id,
                qa_type=item.qa_type,
                judge=JudgeScore.uniform(0),
                iou=0.0,
                failed=True,
            )
        records.append(record)
    per_type = {
        qa_type: _aggregate([r for r in records if r.qa_type is qa_type])
        for qa_type in TYPE_ORDER
        if any(r.qa_type is qa_type for r in records)
    }
    return BenchmarkReport(per_type=per_type, overall=_aggregate(records))


def report_from_records(records: Sequence[EvalRecord]) -> BenchmarkReport:
    """Aggregate pre-scored records (used when replaying a scores file)."""
    per_type = {
        qa_type: _aggregate([r for r in records if r.qa_type is qa_type])
        for qa_type in TYPE_ORDER
        if any(r.qa_type is qa_type for r in records)
    }
    return BenchmarkReport(per_type=per_type, overall=_aggregate(records))


def render_report_table(report: BenchmarkReport, label: str = "run") -> str:
    """Aligned text table: one column pair (Score, mIoU%) per question type."""
    columns: list[tuple[str, Optional[TypeAggregate]]] = [
        (t.value, report.per_type.get(t)) for t in TYPE_ORDER if t in report.per_type
    ]
    columns.append(("Average", report.overall))
    width = 16
    head1 = f"{'':<12}" + "".join(f"{name:^{width}}" for name, _ in columns)
    head2 = f"{'':<12}" + "".join(f"{'Score':>7} {'mIoU%':>8}" for _ in columns)
    cells = []
    for _, agg in columns:
        if agg is None or agg.count == 0:
            cells.append(f"{'-':>7} {'-':>8}")
        else:
            cells.append(f"{agg.mean_score:>7.2f} {agg.mean_iou * 100:>8.2f}")
    row = f"{label:<12}" + "".join(cells)
    sep = "-" * len(head2)
    counts = ", ".join(
        f"{name}: {agg.count}" for name, agg in columns if agg is not None
    )
    failures = report.overall.failures
    footer = f"items: {counts}; failures: {failures}"
    return "\n".join([head1, head2, sep, row, "", footer])
