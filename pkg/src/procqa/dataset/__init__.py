from .loader import (
    Dataset,
    DatasetStats,
    QAItem,
    QAType,
    Source,
    VideoMeta,
    View,
    build_dataset,
    dataset_stats,
    dataset_to_jsonable,
    load_dataset,
    save_dataset,
)
from .filters import (
    ActionSequence,
    BlindAudit,
    blind_filter,
    cosine_similarity,
    edit_distance,
    normalized_edit_distance,
    redundancy_filter,
)
from .taskgraph import TaskGraph, parse_task_graph

__all__ = [
    "ActionSequence",
    "BlindAudit",
    "Dataset",
    "DatasetStats",
    "QAItem",
    "QAType",
    "Source",
    "TaskGraph",
    "VideoMeta",
    "View",
    "blind_filter",
    "build_dataset",
    "cosine_similarity",
    "dataset_stats",
    "dataset_to_jsonable",
    "edit_distance",
    "load_dataset",
    "normalized_edit_distance",
    "parse_task_graph",
    "redundancy_filter",
    "save_dataset",
]
