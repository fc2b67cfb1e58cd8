"""Few-shot prompt rendering for the six generation roles.

Each prompt is demos + a "--------" separator line + the final query block.
Rendering is a pure function of its inputs; line endings are always "\\n"
so output is byte-identical across platforms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .core import Claim, Context, QAPair

ROLES = (
    "verifier",
    "initial_question",
    "followup_question",
    "validator",
    "reasoner",
    "reciter",
)

SEPARATOR = "--------"

VERIFIER_INSTRUCTION = "Can we know whether the claim is true or false now? Yes or no?"
INITIAL_QUESTION_INSTRUCTION = "To verify the above claim, we can first ask a simple question:"
FOLLOWUP_QUESTION_INSTRUCTION = (
    "To verify the claim, what is the next question we need to know the answer to?"
)
VALIDATOR_INSTRUCTION = (
    "Does the QA pair have additional knowledge useful for verifying the claim?"
)
REASONER_INSTRUCTION = "Is this claim true or false?"
RECITER_INSTRUCTION = (
    "Recite a short factual passage that contains the information needed to answer:"
)


class PromptError(Exception):
    pass


class MissingExtra(PromptError):
    pass


class EmptyClaim(PromptError):
    pass


@dataclass(frozen=True)
class Demo:
    text: str
    provenance: str  # "published" | "authored"

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("demo block must be non-empty")
        if self.provenance not in ("published", "authored"):
            raise ValueError(f"unknown provenance {self.provenance!r}")


class DemoBank:
    """Ordered per-role few-shot demonstration blocks."""

    def __init__(self, demos_by_role: dict[str, list[Demo]]):
        for role in demos_by_role:
            if role not in ROLES:
                raise ValueError(f"unknown prompt role {role!r}")
        self._demos = {role: list(demos_by_role.get(role, [])) for role in ROLES}

    def demos(self, role: str) -> list[Demo]:
        return list(self._demos[role])

    def demo_block(self, role: str) -> str:
        return "\n\n".join(d.text for d in self._demos[role])

    @classmethod
    def from_file(cls, path: str | Path) -> "DemoBank":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls(
            {
                role: [Demo(text=d["text"], provenance=d["provenance"]) for d in items]
                for role, items in raw.items()
            }
        )

    @classmethod
    def default(cls) -> "DemoBank":
        data = resources.files("claimcheck.data").joinpath("demo_bank.json")
        with resources.as_file(data) as path:
            return cls.from_file(path)


@dataclass(frozen=True)
class PromptRender:
    role: str
    text: str
    claim_echo: str
    context_echo: str


def render_qa_contexts(context: Context) -> str:
    """Numbered two-line rendering of each accepted pair, in order."""
    lines: list[str] = []
    for pair in context.pairs:
        lines.append(f"Question {pair.index} = {pair.question}")
        lines.append(f"Answer {pair.index} = {pair.answer}")
    return "\n".join(lines)


def render_reasoner_contexts(context: Context) -> str:
    lines: list[str] = []
    for pair in context.pairs:
        lines.append(f"Q{pair.index}: {pair.question}")
        lines.append(f"A{pair.index}: {pair.answer}")
    return "\n".join(lines)


def _context_lines(context: Context) -> list[str]:
    block = render_qa_contexts(context)
    return block.split("\n") if block else []


def _avoid_block(rejected: Sequence[str]) -> list[str]:
    if not rejected:
        return []
    return ["Do not repeat these questions:"] + [f"- {q}" for q in rejected]


def render(
    role: str,
    claim: Claim,
    context: Context,
    extra: Optional[object] = None,
    bank: Optional[DemoBank] = None,
    rejected: Sequence[str] = (),
) -> PromptRender:
    """Build the full few-shot prompt for one role.

    `extra` carries the role-specific argument: the candidate QAPair for the
    validator, the 1-based question index for followup_question, and the
    question string for the reciter.
    """
    if role not in ROLES:
        raise PromptError(f"unknown prompt role {role!r}")
    if role != "reciter" and not claim.text.strip():
        raise EmptyClaim("claim text is empty")
    bank = bank or DemoBank.default()

    lines: list[str]
    if role == "verifier":
        lines = [f"Claim = {claim.text}", "We already know the following:"]
        lines.extend(_context_lines(context))
        lines.append(VERIFIER_INSTRUCTION)
        lines.append("Prediction = ")
    elif role == "initial_question":
        lines = [f"Claim = {claim.text}", INITIAL_QUESTION_INSTRUCTION]
        lines.extend(_avoid_block(rejected))
        lines.append("Question = ")
    elif role == "followup_question":
        if len(context) == 0:
            raise MissingExtra("followup_question requires a non-empty context")
        if not isinstance(extra, int):
            raise MissingExtra("followup_question requires the next question index")
        lines = [f"Claim = {claim.text}", "We already know the following:"]
        lines.extend(_context_lines(context))
        lines.append(FOLLOWUP_QUESTION_INSTRUCTION)
        lines.extend(_avoid_block(rejected))
        lines.append(f"Question {extra} = ")
    elif role == "validator":
        if not isinstance(extra, QAPair):
            raise MissingExtra("validator requires the candidate QA pair")
        lines = [f"Claim = {claim.text}", "We already know the following:"]
        lines.extend(_context_lines(context))
        lines.append("Now we further know:")
        lines.append(f"Question = {extra.question}")
        lines.append(f"Answer = {extra.answer}")
        lines.append(VALIDATOR_INSTRUCTION)
        lines.append("The answer: ")
    elif role == "reasoner":
        lines = ["Contexts:"]
        block = render_reasoner_contexts(context)
        if block:
            lines.extend(block.split("\n"))
        lines.append(f"Claim = {claim.text}")
        lines.append(REASONER_INSTRUCTION)
        lines.append("Answer:")
        lines.append("Therefore, the final answer is")
    else:  # reciter
        if not isinstance(extra, str) or not extra.strip():
            raise MissingExtra("reciter requires the question string")
        lines = [f"{RECITER_INSTRUCTION} {extra}"]

    final_block = "\n".join(lines)
    demo_block = bank.demo_block(role)
    text = f"{demo_block}\n{SEPARATOR}\n{final_block}" if demo_block else final_block

    context_echo = (
        render_reasoner_contexts(context) if role == "reasoner" else render_qa_contexts(context)
    )
    return PromptRender(
        role=role,
        text=text,
        claim_echo=claim.text,
        context_echo=context_echo,
    )
