"""The reasoning loop: sufficiency check, question generation, QA,
validation, and the final verdict, with a full audit trace.

One check is strictly sequential; distinct checks may run concurrently
over shared backend handles.
"""

from __future__ import annotations

import re
import secrets
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    Claim,
    Context,
    Label,
    QAPair,
    RawExchange,
    ReasoningStep,
    ReasoningTrace,
    Verdict,
    utc_now_rfc3339,
)
from .genbackend import GenRequest
from .prompts import DemoBank, render

SHORT_ANSWER_STOP = ("\n\n",)

# role -> (max_tokens, stop sequences); short-answer roles are cut at the
# first blank line to bound cost, free-form roles are not.
_ROLE_DECODING = {
    "verifier": (64, SHORT_ANSWER_STOP),
    "validator": (64, SHORT_ANSWER_STOP),
    "question_generator": (128, ()),
    "reasoner": (512, ()),
}


class PipelineError(Exception):
    pass


class UnparseableCompletion(PipelineError):
    pass


class UnparseableVerdict(PipelineError):
    pass


class EmptyGeneration(PipelineError):
    pass


def parse_yes_no(text: str) -> bool:
    """Accepts completions starting yes/no, optionally after "The answer:"."""
    cleaned = text.strip().lower()
    if cleaned.startswith("the answer:"):
        cleaned = cleaned[len("the answer:"):].strip()
    if cleaned.startswith("yes"):
        return True
    if cleaned.startswith("no"):
        return False
    raise UnparseableCompletion(f"expected a yes/no completion, got: {text[:80]!r}")


_TOKEN_SPLIT_RE = re.compile(r"[A-Za-z]+")


def parse_final_answer(text: str) -> Label:
    """Resolve the label from the last "final answer is" clause."""
    lowered = text.lower()
    marker = "final answer is"
    pos = lowered.rfind(marker)
    if pos < 0:
        raise UnparseableVerdict(f"no 'final answer is' clause in: {text[:80]!r}")
    tail = lowered[pos + len(marker):]
    for token in _TOKEN_SPLIT_RE.findall(tail):
        if token == "true":
            return Label.SUPPORTED
        if token == "false":
            return Label.REFUTED
    raise UnparseableVerdict(f"'final answer is' resolves to neither true nor false: {text[:80]!r}")


@dataclass(frozen=True)
class PipelineConfig:
    max_depth: int = 5
    max_regen_attempts: int = 3
    qa_backend: str = "reciter_reader"

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.max_regen_attempts < 1:
            raise ValueError("max_regen_attempts must be >= 1")


EventCallback = Callable[[str, object], None]


class Pipeline:
    """Wires the generation roles and a QA backend into one claim checker.

    `backends` maps role names (verifier, question_generator, validator,
    reasoner) to generation backend handles; a plain handle is shared by
    every role.
    """

    def __init__(
        self,
        config: PipelineConfig,
        backends,
        qa_backend,
        bank: Optional[DemoBank] = None,
    ):
        self.config = config
        if isinstance(backends, dict):
            self._backends = backends
        else:
            self._backends = {role: backends for role in _ROLE_DECODING}
        self.qa = qa_backend
        self.bank = bank or DemoBank.default()

    def _generate(self, role: str, prompt: str, recorder: Optional[Callable] = None) -> str:
        max_tokens, stop = _ROLE_DECODING[role]
        resp = self._backends[role].generate(
            GenRequest(prompt=prompt, max_tokens=max_tokens, stop_sequences=stop)
        )
        if recorder is not None:
            recorder(role, prompt, resp.text)
        return resp.text

    def verify_sufficiency(
        self, claim: Claim, context: Context, recorder: Optional[Callable] = None
    ) -> bool:
        prompt = render("verifier", claim, context, bank=self.bank).text
        return parse_yes_no(self._generate("verifier", prompt, recorder))

    def generate_question(
        self,
        claim: Claim,
        context: Context,
        rejected: list[str] | tuple[str, ...] = (),
        recorder: Optional[Callable] = None,
    ) -> str:
        if len(context) == 0:
            prompt = render(
                "initial_question", claim, context, bank=self.bank, rejected=rejected
            ).text
        else:
            prompt = render(
                "followup_question",
                claim,
                context,
                extra=len(context) + 1,
                bank=self.bank,
                rejected=rejected,
            ).text
        completion = self._generate("question_generator", prompt, recorder)
        for line in completion.split("\n"):
            if line.strip():
                return line.strip()
        raise EmptyGeneration("question generator produced no non-empty line")

    def validate_qa(
        self,
        claim: Claim,
        context: Context,
        new_pair: QAPair,
        recorder: Optional[Callable] = None,
    ) -> bool:
        # A verbatim duplicate can never add information; decide locally.
        if context.contains_duplicate(new_pair.question, new_pair.answer):
            return False
        prompt = render("validator", claim, context, extra=new_pair, bank=self.bank).text
        return parse_yes_no(self._generate("validator", prompt, recorder))

    def reason(
        self, claim: Claim, context: Context, recorder: Optional[Callable] = None
    ) -> Verdict:
        prompt = render("reasoner", claim, context, bank=self.bank).text
        completion = self._generate("reasoner", prompt, recorder)
        label = parse_final_answer(completion)
        return Verdict(label=label, rationale=completion.strip())

    def run_check(
        self,
        claim: Claim,
        trace_id: Optional[str] = None,
        on_event: Optional[EventCallback] = None,
    ) -> ReasoningTrace:
        """Run the full loop; never raises past the trace boundary."""
        trace_id = trace_id or secrets.token_hex(16)
        started_at = utc_now_rfc3339()
        steps: list[ReasoningStep] = []
        exchanges: list[RawExchange] = []
        context = Context()

        def recorder(role: str, prompt: str, completion: str) -> None:
            exchanges.append(RawExchange(role=role, prompt=prompt, completion=completion))

        def emit(kind: str, payload: object) -> None:
            if on_event is not None:
                on_event(kind, payload)

        def finish(
            status: str, verdict: Optional[Verdict], error_detail: Optional[str]
        ) -> ReasoningTrace:
            return ReasoningTrace(
                trace_id=trace_id,
                claim=claim,
                qa_backend=self.qa.name,
                steps=tuple(steps),
                verdict=verdict,
                raw_exchanges=tuple(exchanges),
                started_at=started_at,
                finished_at=utc_now_rfc3339(),
                status=status,
                error_detail=error_detail,
            )

        try:
            while True:
                if self.verify_sufficiency(claim, context, recorder):
                    break
                if len(context) >= self.config.max_depth:
                    break

                depth = len(context) + 1
                rejected_questions: list[str] = []
                accepted_pair: Optional[QAPair] = None
                last_pair: Optional[QAPair] = None

                for attempt in range(self.config.max_regen_attempts):
                    question = self.generate_question(
                        claim, context, rejected=rejected_questions, recorder=recorder
                    )
                    result = self.qa.answer(question, record=recorder)
                    pair = QAPair(
                        index=depth,
                        question=question,
                        answer=result.answer,
                        evidence=result.evidence,
                    )
                    last_pair = pair
                    if self.validate_qa(claim, context, pair, recorder):
                        accepted_pair = pair
                        break
                    reason = (
                        "duplicate of an existing context pair"
                        if context.contains_duplicate(pair.question, pair.answer)
                        else "validator judged the pair uninformative"
                    )
                    step = ReasoningStep(
                        depth=depth,
                        question=pair.question,
                        answer=pair.answer,
                        evidence=pair.evidence,
                        accepted=False,
                        rejection_reason=reason,
                    )
                    steps.append(step)
                    emit("step", step)
                    rejected_questions.append(question)

                if accepted_pair is None:
                    # All attempts rejected: force-accept the last candidate so
                    # the loop always progresses.
                    accepted_pair = last_pair

                step = ReasoningStep(
                    depth=depth,
                    question=accepted_pair.question,
                    answer=accepted_pair.answer,
                    evidence=accepted_pair.evidence,
                    accepted=True,
                )
                steps.append(step)
                emit("step", step)
                context = context.append(accepted_pair)

            verdict = self.reason(claim, context, recorder)
            emit("verdict", verdict)
            return finish("done", verdict, None)
        except Exception as exc:  # noqa: BLE001 - the trace is the error surface
            detail = f"{type(exc).__name__}: {exc}"
            emit("error", detail)
            return finish("error", None, detail)
