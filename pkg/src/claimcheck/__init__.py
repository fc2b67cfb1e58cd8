"""Question-guided multi-hop claim verification.

Verifies a natural-language claim by iteratively asking and answering
questions, validating each pair, and reasoning to a Supported/Refuted
verdict with a full replayable trace.
"""

from .core import (
    Claim,
    Context,
    EvidencePassage,
    Label,
    QAPair,
    ReasoningStep,
    ReasoningTrace,
    Verdict,
    validate_trace,
)
from .pipeline import Pipeline, PipelineConfig

__all__ = [
    "Claim",
    "Context",
    "EvidencePassage",
    "Label",
    "QAPair",
    "ReasoningStep",
    "ReasoningTrace",
    "Verdict",
    "validate_trace",
    "Pipeline",
    "PipelineConfig",
]
