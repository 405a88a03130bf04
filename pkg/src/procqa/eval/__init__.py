from .judge import (
    DIMENSION_KEYS,
    JudgeScore,
    RemoteJudgeBackend,
    StubJudgeBackend,
    default_rule_table,
    judge_answer,
    load_judge_prompt,
    parse_judge_json,
)
from .matching import MatchedPair, match_spans, mean_iou
from .report import (
    BenchmarkReport,
    EvalRecord,
    TypeAggregate,
    aggregate_report,
    render_report_table,
)

__all__ = [
    "BenchmarkReport",
    "DIMENSION_KEYS",
    "EvalRecord",
    "JudgeScore",
    "MatchedPair",
    "RemoteJudgeBackend",
    "StubJudgeBackend",
    "TypeAggregate",
    "aggregate_report",
    "default_rule_table",
    "judge_answer",
    "load_judge_prompt",
    "match_spans",
    "mean_iou",
    "parse_judge_json",
    "render_report_table",
]
