"""Real-model bindings behind the same tool surface.

Model choices are configuration, not contract: any retrieval encoder,
open-vocabulary detector, captioner, summarizer, or answerer may back the
endpoints as long as responses validate against the wire schemas. Inference
is serialized per device by a bounded queue at the app layer.

Weights are not bundled; starting without --stub requires every configured
model to be loadable and fails loudly otherwise.
"""

from __future__ import annotations

import importlib
from dataclasses import dataclass, field


class ServerStartupError(RuntimeError):
    pass


@dataclass
class ModelConfig:
    retrieval_encoder: str = "clip-vit-base-patch32"
    detector: str = "grounding-detector"
    captioner: str = "blip-captioner"
    summarizer: str = "llm-summarizer"
    answerer: str = "vlm-answerer"
    device: str = "cpu"
    extra: dict = field(default_factory=dict)


def load_model_toolbox(config: ModelConfig):
    """Instantiate the model-backed toolbox; raises when assets are missing.

    Each binding is resolved lazily through importlib so a deployment can ship
    its own implementations; the reference container does not bundle weights,
    so this raises ServerStartupError unless the host provides them.
    """
    missing = []
    for role, name in (
        ("retrieval_encoder", config.retrieval_encoder),
        ("detector", config.detector),
        ("captioner", config.captioner),
        ("summarizer", config.summarizer),
        ("answerer", config.answerer),
    ):
        module_name = f"toolserver_models.{name.replace('-', '_')}"
        try:
            importlib.import_module(module_name)
        except ImportError:
            missing.append(f"{role}={name} ({module_name})")
    raise ServerStartupError(
        "model mode requires loadable model bindings; missing: "
        + "; ".join(missing)
        + ". Start with --stub for the deterministic fixture backend."
    )
