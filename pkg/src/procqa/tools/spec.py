"""Tool contracts and the registry that dispatches invocations.

The nine tools cover three agents: video processing (Video_Load, Frame_Sample,
Frame_Trim), video analysis (Frame_Retrieve, Obj_Det, Action_Rec), and text
generation (Img_Caption, Context_Sum, Answer_Gen). A registry binds each
contract to one backend; outputs are kind-checked after every invocation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Optional

from ..errors import InvalidArgs
from ..kinds import ValueKind
from .values import ToolValue, value_kind

_NO_DEFAULT = object()


class Binding(str, Enum):
    LOCAL = "local"
    REMOTE = "remote"


@dataclass(frozen=True)
class ParamSpec:
    kinds: frozenset[ValueKind]
    required: bool = True
    default: object = _NO_DEFAULT

    def __post_init__(self):
        if self.required and self.default is not _NO_DEFAULT:
            raise InvalidArgs("required parameters must not carry defaults")

    @property
    def has_default(self) -> bool:
        return self.default is not _NO_DEFAULT


def param(*kinds: ValueKind, required: bool = True, default: object = _NO_DEFAULT) -> ParamSpec:
    return ParamSpec(frozenset(kinds), required, default)


@dataclass(frozen=True)
class ToolSpec:
    name: str
    params: Mapping[str, ParamSpec]
    output_kind: ValueKind
    backend_binding: Binding
    description: str = ""

    def to_jsonable(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "output_kind": self.output_kind.value,
            "params": {
                name: {
                    "kinds": sorted(k.value for k in p.kinds),
                    "required": p.required,
                    **({"default": p.default} if p.has_default else {}),
                }
                for name, p in self.params.items()
            },
        }


K = ValueKind

TOOL_CONTRACTS: dict[str, dict] = {
    "Video_Load": dict(
        params={"path": param(K.TEXT)},
        output_kind=K.VIDEO_HANDLE,
        description="Open a video and report frame rate, duration, resolution.",
    ),
    "Frame_Sample": dict(
        params={
            "video": param(K.VIDEO_HANDLE),
            "n": param(K.SCORE, required=False, default=50),
        },
        output_kind=K.FRAME_COLLECTION,
        description="Uniformly sample n timestamped frames.",
    ),
    "Frame_Trim": dict(
        params={
            "frames": param(K.FRAME_COLLECTION),
            "relation": param(K.TEXT),
            "reference": param(K.SPAN_LIST, K.FRAME_COLLECTION),
        },
        output_kind=K.FRAME_COLLECTION,
        description="Keep frames before/after/within a reference interval.",
    ),
    "Frame_Retrieve": dict(
        params={
            "frames": param(K.FRAME_COLLECTION),
            "query": param(K.TEXT),
            "top_k": param(K.SCORE, required=False, default=5),
        },
        output_kind=K.FRAME_COLLECTION,
        description="Rank frames by relevance to a text query; keep top_k.",
    ),
    "Obj_Det": dict(
        params={"frames": param(K.FRAME_COLLECTION), "query": param(K.TEXT)},
        output_kind=K.DETECTION_LIST,
        description="Open-vocabulary detection of the queried object per frame.",
    ),
    "Action_Rec": dict(
        params={"frames": param(K.FRAME_COLLECTION)},
        output_kind=K.SPAN_LIST,
        description="Temporally aligned action descriptions over the frames.",
    ),
    "Img_Caption": dict(
        params={"frames": param(K.FRAME_COLLECTION)},
        output_kind=K.TEXT,
        description="Object-focused caption for every frame, in order.",
    ),
    "Context_Sum": dict(
        params={"texts": param(K.TEXT, K.SPAN_LIST, K.DETECTION_LIST)},
        output_kind=K.TEXT,
        description="Fuse captions, action descriptions, and detections into one context.",
    ),
    "Answer_Gen": dict(
        params={
            "question": param(K.TEXT),
            "context": param(K.TEXT),
            "frames": param(K.FRAME_COLLECTION),
            "evidence_hint": param(K.SPAN_LIST, required=False, default=()),
        },
        output_kind=K.TEXT,
        description="Produce the answer text plus supporting evidence spans.",
    ),
}


ToolImpl = Callable[..., ToolValue]  # impl(env, **resolved_args)


@dataclass
class ToolRegistry:
    binding: Binding
    _tools: dict[str, tuple[ToolSpec, ToolImpl]] = field(default_factory=dict)

    def register(self, spec: ToolSpec, impl: ToolImpl) -> None:
        if spec.name in self._tools:
            raise InvalidArgs(f"tool {spec.name!r} already registered")
        self._tools[spec.name] = (spec, impl)

    def lookup(self, name: str) -> Optional[ToolSpec]:
        entry = self._tools.get(name)
        return entry[0] if entry else None

    def specs(self) -> list[ToolSpec]:
        return [spec for spec, _ in self._tools.values()]

    def catalog_jsonable(self) -> list[dict]:
        return [spec.to_jsonable() for spec in self.specs()]

    def invoke(self, name: str, env, args: Mapping[str, ToolValue]) -> ToolValue:
        """Dispatch one call: fill defaults, reject unknowns, check output kind."""
        entry = self._tools.get(name)
        if entry is None:
            raise InvalidArgs(f"no tool named {name!r}")
        spec, impl = entry
        resolved: dict[str, ToolValue] = {}
        for param_name, pspec in spec.params.items():
            if param_name in args:
                resolved[param_name] = args[param_name]
            elif pspec.has_default:
                resolved[param_name] = pspec.default  # type: ignore[assignment]
            elif pspec.required:
                raise InvalidArgs(f"{name} missing required parameter {param_name!r}")
        unknown = set(args) - set(spec.params)
        if unknown:
            raise InvalidArgs(f"{name} got unknown parameters {sorted(unknown)}")
        output = impl(env, **resolved)
        got = value_kind(output)
        if got is not spec.output_kind:
            raise InvalidArgs(
                f"{name} returned {got.value}, contract says {spec.output_kind.value}"
            )
        return output

    @classmethod
    def build(cls, binding: Binding, impls: Mapping[str, ToolImpl]) -> "ToolRegistry":
        registry = cls(binding)
        missing = set(TOOL_CONTRACTS) - set(impls)
        if missing:
            raise InvalidArgs(f"backend lacks implementations for {sorted(missing)}")
        for name, contract in TOOL_CONTRACTS.items():
            spec = ToolSpec(name=name, backend_binding=binding, **contract)
            registry.register(spec, impls[name])
        return registry
