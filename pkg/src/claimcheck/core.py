"""Shared domain types: claims, QA pairs, evidence, traces, and verdicts.

All types are immutable value objects after construction and share one
canonical JSON form (snake_case field names, RFC 3339 timestamps) used on
disk and over the wire.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional


class Label(Enum):
    SUPPORTED = "Supported"
    REFUTED = "Refuted"

    @classmethod
    def from_str(cls, value: str) -> "Label":
        for member in cls:
            if member.value == value:
                return member
        raise ValueError(f"unknown label: {value!r}")


@dataclass(frozen=True)
class Claim:
    id: str
    text: str
    gold_label: Optional[Label] = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("claim id must be non-empty")
        if not self.text.strip():
            raise ValueError("claim text must be non-empty")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "gold_label": self.gold_label.value if self.gold_label else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Claim":
        gold = d.get("gold_label")
        return cls(
            id=d["id"],
            text=d["text"],
            gold_label=Label.from_str(gold) if gold else None,
        )


@dataclass(frozen=True)
class EvidencePassage:
    source_id: str
    text: str
    title: Optional[str] = None
    score: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("evidence text must be non-empty")
        if self.score is not None and self.score < 0:
            raise ValueError("evidence score must be >= 0")

    def to_dict(self) -> dict:
        return {
            "source_id": self.source_id,
            "title": self.title,
            "text": self.text,
            "score": self.score,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvidencePassage":
        return cls(
            source_id=d["source_id"],
            title=d.get("title"),
            text=d["text"],
            score=d.get("score"),
        )


@dataclass(frozen=True)
class QAPair:
    index: int
    question: str
    answer: str
    evidence: tuple[EvidencePassage, ...] = ()

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError("QA pair index is 1-based")
        if not self.question:
            raise ValueError("question must be non-empty")
        if not self.answer:
            raise ValueError("answer must be non-empty")
        object.__setattr__(self, "evidence", tuple(self.evidence))

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "question": self.question,
            "answer": self.answer,
            "evidence": [e.to_dict() for e in self.evidence],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QAPair":
        return cls(
            index=d["index"],
            question=d["question"],
            answer=d["answer"],
            evidence=tuple(EvidencePassage.from_dict(e) for e in d.get("evidence", [])),
        )


@dataclass(frozen=True)
class Context:
    """Ordered list of validator-accepted QA pairs; indices are 1..len."""

    pairs: tuple[QAPair, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))
        for i, pair in enumerate(self.pairs, start=1):
            if pair.index != i:
                raise ValueError(f"pair at position {i} carries index {pair.index}")

    def __len__(self) -> int:
        return len(self.pairs)

    def append(self, pair: QAPair) -> "Context":
        return Context(self.pairs + (pair,))

    def contains_duplicate(self, question: str, answer: str) -> bool:
        return any(p.question == question and p.answer == answer for p in self.pairs)


@dataclass(frozen=True)
class ReasoningStep:
    depth: int
    question: str
    answer: str
    evidence: tuple[EvidencePassage, ...]
    accepted: bool
    rejection_reason: Optional[str] = None

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("depth is 1-based")
        if not self.accepted and not self.rejection_reason:
            raise ValueError("rejected step requires a rejection_reason")
        object.__setattr__(self, "evidence", tuple(self.evidence))

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "question": self.question,
            "answer": self.answer,
            "evidence": [e.to_dict() for e in self.evidence],
            "accepted": self.accepted,
            "rejection_reason": self.rejection_reason,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReasoningStep":
        return cls(
            depth=d["depth"],
            question=d["question"],
            answer=d["answer"],
            evidence=tuple(EvidencePassage.from_dict(e) for e in d.get("evidence", [])),
            accepted=d["accepted"],
            rejection_reason=d.get("rejection_reason"),
        )


@dataclass(frozen=True)
class Verdict:
    label: Label
    rationale: str

    def __post_init__(self) -> None:
        if not self.rationale:
            raise ValueError("verdict rationale must be non-empty")

    def to_dict(self) -> dict:
        return {"label": self.label.value, "rationale": self.rationale}

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(label=Label.from_str(d["label"]), rationale=d["rationale"])


@dataclass(frozen=True)
class RawExchange:
    role: str
    prompt: str
    completion: str

    def to_dict(self) -> dict:
        return {"role": self.role, "prompt": self.prompt, "completion": self.completion}

    @classmethod
    def from_dict(cls, d: dict) -> "RawExchange":
        return cls(role=d["role"], prompt=d["prompt"], completion=d["completion"])


QA_BACKEND_NAMES = ("retriever_reader", "seq2seq", "reciter_reader")

TRACE_STATUSES = ("running", "done", "error")


def utc_now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


@dataclass(frozen=True)
class ReasoningTrace:
    trace_id: str
    claim: Claim
    qa_backend: str
    steps: tuple[ReasoningStep, ...]
    verdict: Optional[Verdict]
    raw_exchanges: tuple[RawExchange, ...]
    started_at: str
    finished_at: Optional[str]
    status: str
    error_detail: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "raw_exchanges", tuple(self.raw_exchanges))

    @property
    def accepted_steps(self) -> tuple[ReasoningStep, ...]:
        return tuple(s for s in self.steps if s.accepted)

    def to_dict(self) -> dict:
        return {
            "trace_id": self.trace_id,
            "claim": self.claim.to_dict(),
            "qa_backend": self.qa_backend,
            "steps": [s.to_dict() for s in self.steps],
            "verdict": self.verdict.to_dict() if self.verdict else None,
            "raw_exchanges": [x.to_dict() for x in self.raw_exchanges],
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "status": self.status,
            "error_detail": self.error_detail,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "ReasoningTrace":
        verdict = d.get("verdict")
        return cls(
            trace_id=d["trace_id"],
            claim=Claim.from_dict(d["claim"]),
            qa_backend=d["qa_backend"],
            steps=tuple(ReasoningStep.from_dict(s) for s in d["steps"]),
            verdict=Verdict.from_dict(verdict) if verdict else None,
            raw_exchanges=tuple(RawExchange.from_dict(x) for x in d.get("raw_exchanges", [])),
            started_at=d["started_at"],
            finished_at=d.get("finished_at"),
            status=d["status"],
            error_detail=d.get("error_detail"),
        )

    @classmethod
    def from_json(cls, text: str) -> "ReasoningTrace":
        return cls.from_dict(json.loads(text))


def validate_trace(trace: ReasoningTrace) -> list[str]:
    """Check every cross-field trace invariant; one message per violation.

    Total function: never raises, idempotent, side-effect-free.
    """
    violations: list[str] = []

    if trace.status not in TRACE_STATUSES:
        violations.append(f"unknown status {trace.status!r}")
    if trace.qa_backend not in QA_BACKEND_NAMES:
        violations.append(f"unknown qa_backend {trace.qa_backend!r}")
    if trace.status == "done" and trace.verdict is None:
        violations.append("done trace missing verdict")
    if trace.status == "error" and not trace.error_detail:
        violations.append("error trace missing error_detail")

    accepted = trace.accepted_steps
    depths = sorted(s.depth for s in accepted)
    expected = list(range(1, len(accepted) + 1))
    if depths != expected:
        violations.append(
            "accepted-step count %d does not match context depth sequence %s"
            % (len(accepted), depths)
        )

    for i, step in enumerate(trace.steps):
        if not step.accepted and not step.rejection_reason:
            violations.append(f"rejected step {i} missing rejection_reason")

    if trace.verdict is not None and not trace.verdict.rationale.strip():
        violations.append("verdict rationale is empty")

    # Every backend call is mirrored in raw_exchanges; each recorded step
    # required at least one call, so steps can never outnumber exchanges.
    if trace.steps and len(trace.raw_exchanges) < len(trace.steps):
        violations.append(
            "trace has %d steps but only %d raw exchanges"
            % (len(trace.steps), len(trace.raw_exchanges))
        )

    return violations
