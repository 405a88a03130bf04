"""AST for the tool-call plan DSL.

A plan is a straight-line, single-assignment program::

    #! question: "How did the 'butter' change?"
    #! qa_type: Evolution
    v = Video_Load(path="$video")
    frames = Frame_Sample(video=v, n=50)

Each step binds one output name; arguments are literals, references to earlier
outputs, or lists of either. All nodes are immutable and compare structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..dataset.loader import QAType
from ..temporal import TimeSpan

LiteralValue = Union[str, int, float, bool, TimeSpan]


@dataclass(frozen=True)
class Literal:
    value: LiteralValue


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class ListValue:
    items: tuple["ArgValue", ...]


ArgValue = Union[Literal, Ref, ListValue]


@dataclass(frozen=True)
class ToolCall:
    output_name: str
    tool_name: str
    args: tuple[tuple[str, ArgValue], ...]

    def args_dict(self) -> dict[str, ArgValue]:
        return dict(self.args)


@dataclass(frozen=True)
class Plan:
    steps: tuple[ToolCall, ...]
    question: str = ""
    qa_type: QAType | None = None

    def output_names(self) -> list[str]:
        return [s.output_name for s in self.steps]


def refs_in(value: ArgValue) -> list[str]:
    """All reference names inside an argument value, in syntactic order."""
    if isinstance(value, Ref):
        return [value.name]
    if isinstance(value, ListValue):
        out: list[str] = []
        for item in value.items:
            out.extend(refs_in(item))
        return out
    return []
