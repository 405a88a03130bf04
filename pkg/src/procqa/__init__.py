"""procqa: object-centric video QA orchestration and evaluation."""

__version__ = "0.1.0"
