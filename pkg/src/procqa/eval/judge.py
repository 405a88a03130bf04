"""Answer quality scoring on the four-dimension rubric.

Dimensions: contextual integration (ci), detail orientation (do), contextual
understanding (cu), temporal understanding (tu); each an integer 0 to 5 and
the final score their plain average. The average is always recomputed locally
from the four integers, never trusted from a backend.

Two backends: a remote LLM judge speaking strict JSON, and a deterministic
offline stub driven by an ordered rule table, sufficient for CI and for the
blind-answerable screening.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from ..errors import JudgeParseError, JudgeScoreError

DIMENSION_KEYS = ("ci", "do", "cu", "tu")


@dataclass(frozen=True)
class JudgeScore:
    ci: int
    do_: int
    cu: int
    tu: int
    average: float

    def __post_init__(self):
        for name, value in self.dims().items():
            if isinstance(value, bool) or not isinstance(value, int):
                raise JudgeScoreError(f"{name} must be an integer, got {value!r}")
            if not 0 <= value <= 5:
                raise JudgeScoreError(f"{name} must be in [0, 5], got {value}")
        if self.average != (self.ci + self.do_ + self.cu + self.tu) / 4:
            raise JudgeScoreError("average must equal (ci+do+cu+tu)/4 exactly")

    def dims(self) -> dict[str, int]:
        return {"ci": self.ci, "do": self.do_, "cu": self.cu, "tu": self.tu}

    @classmethod
    def from_dims(cls, ci: int, do_: int, cu: int, tu: int) -> "JudgeScore":
        return cls(ci, do_, cu, tu, (ci + do_ + cu + tu) / 4)

    @classmethod
    def uniform(cls, value: int) -> "JudgeScore":
        return cls.from_dims(value, value, value, value)

    def to_jsonable(self) -> dict:
        return {**self.dims(), "average": self.average}


def _normalize(text: str) -> str:
    return " ".join(text.strip().lower().split())


def _tokens(text: str) -> set[str]:
    return set(re.findall(r"[a-z0-9']+", _normalize(text)))


Rule = tuple[Callable[[str, str], bool], JudgeScore]


def default_rule_table() -> list[Rule]:
    """Ordered (predicate, score) rules applied after the exact/empty checks."""
    def contains(gold: str, answer: str) -> bool:
        g, a = _normalize(gold), _normalize(answer)
        return g in a or a in g

    def overlaps(gold: str, answer: str) -> bool:
        g, a = _tokens(gold), _tokens(answer)
        return bool(g) and len(g & a) / len(g | a) >= 0.5

    return [
        (contains, JudgeScore.uniform(3)),
        (overlaps, JudgeScore.uniform(2)),
    ]


@dataclass
class StubJudgeBackend:
    """Deterministic scoring: exact match 5s, empty answer 0s, then the table."""

    rule_table: Sequence[Rule] = field(default_factory=default_rule_table)

    def score(self, question: str, gold: str, answer: str) -> JudgeScore:
        if not answer.strip():
            return JudgeScore.uniform(0)
        if _normalize(gold) == _normalize(answer):
            return JudgeScore.uniform(5)
        for predicate, score in self.rule_table:
            if predicate(gold, answer):
                return score
        return JudgeScore.uniform(1)


def load_judge_prompt(prompt_id: str = "judge_v1") -> str:
    path = Path(__file__).parent / f"{prompt_id.replace('judge_', 'judge_prompt_')}.txt"
    if not path.exists():
        path = Path(__file__).parent / "judge_prompt_v1.txt"
    return path.read_text(encoding="utf-8")


def parse_judge_json(text: str) -> JudgeScore:
    """Parse the strict-JSON rubric reply; average is recomputed, not read."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JudgeParseError(f"judge reply is not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise JudgeParseError("judge reply must be a JSON object")
    values = []
    for key in DIMENSION_KEYS:
        if key not in doc:
            raise JudgeParseError(f"judge reply missing key {key!r}")
        value = doc[key]
        if isinstance(value, bool) or not isinstance(value, int):
            raise JudgeParseError(f"judge key {key!r} must be an integer, got {value!r}")
        values.append(value)
    try:
        return JudgeScore.from_dims(*values)
    except JudgeScoreError as exc:
        raise JudgeParseError(str(exc)) from exc


@dataclass
class RemoteJudgeBackend:
    """LLM judge over HTTP; one re-ask on a malformed reply, then fail loud."""

    client: object  # RemoteClient
    prompt_id: str = "judge_v1"

    def score(self, question: str, gold: str, answer: str) -> JudgeScore:
        prompt = load_judge_prompt(self.prompt_id).format(
            question=question, gold=gold, answer=answer
        )
        payload = {
            "question": question,
            "gold": gold,
            "answer": answer,
            "prompt": prompt,
            "prompt_id": self.prompt_id,
        }
        last_error: Optional[JudgeParseError] = None
        for retry in (False, True):
            result = self.client.post("/v1/judge", {**payload, "retry": retry})
            if isinstance(result, dict) and all(k in result for k in DIMENSION_KEYS):
                reply = json.dumps({k: result[k] for k in DIMENSION_KEYS})
            else:
                reply = result.get("text", "") if isinstance(result, dict) else ""
            try:
                return parse_judge_json(reply)
            except JudgeParseError as exc:
                last_error = exc
        raise last_error  # type: ignore[misc]


def judge_answer(question: str, gold: str, answer: str, backend) -> JudgeScore:
    if not question or not gold:
        raise JudgeScoreError("question and gold answer must be non-empty")
    return backend.score(question, gold, answer)
