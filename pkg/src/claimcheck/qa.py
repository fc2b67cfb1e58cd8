"""Question answering: three interchangeable backends behind one contract.

retriever_reader pulls BM25 passages and reads an answer out of them;
seq2seq asks one model call for answer plus evidence; reciter_reader first
recites a passage from parametric knowledge, then reads from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .core import Claim, Context, EvidencePassage
from .genbackend import GenRequest
from .prompts import DemoBank, render
from . import retrieval

GENERATED_SOURCE_ID = "generated"
DEFAULT_TOP_K = 3

READING_INSTRUCTION = (
    "Answer the question using only the passages below. "
    "Give a short answer on a single line."
)

SEQ2SEQ_TEMPLATE = (
    "Answer the question and then provide a one-sentence evidence statement.\n"
    "Question: {question}\n"
    "Answer:"
)

Recorder = Callable[[str, str, str], None]


class QAError(Exception):
    pass


class EmptyGeneration(QAError):
    pass


@dataclass(frozen=True)
class QAResult:
    answer: str
    evidence: tuple[EvidencePassage, ...]

    def __post_init__(self) -> None:
        if not self.answer:
            raise ValueError("answer must be non-empty")
        object.__setattr__(self, "evidence", tuple(self.evidence))


def _first_nonempty_line(text: str) -> str:
    for line in text.split("\n"):
        if line.strip():
            return line.strip()
    return ""


def _record(recorder: Optional[Recorder], role: str, prompt: str, completion: str) -> None:
    if recorder is not None:
        recorder(role, prompt, completion)


def render_reading_prompt(question: str, passages: list[EvidencePassage]) -> str:
    lines = [READING_INSTRUCTION, ""]
    for i, passage in enumerate(passages, start=1):
        label = f"Passage {i}"
        if passage.title:
            label += f" ({passage.title})"
        lines.append(f"{label}: {passage.text}")
    lines.append("")
    lines.append(f"Question: {question}")
    lines.append("Answer:")
    return "\n".join(lines)


class RetrieverReader:
    """Retrieve top-k BM25 passages, then read an answer from them."""

    def __init__(self, index: retrieval.Index, backend, k: int = DEFAULT_TOP_K):
        if index.doc_count == 0:
            raise retrieval.EmptyIndex("retriever needs a built index")
        if k < 1:
            raise ValueError("k must be >= 1")
        self.index = index
        self.backend = backend
        self.k = k

    name = "retriever_reader"

    def answer(self, question: str, record: Optional[Recorder] = None) -> QAResult:
        hits = retrieval.search(self.index, question, self.k)
        if not hits:
            # Let the validator reject the pair instead of aborting the loop.
            return QAResult(answer="unknown", evidence=())
        passages = [
            EvidencePassage(
                source_id=self.index.docs[ordinal].id,
                title=self.index.docs[ordinal].title or None,
                text=self.index.docs[ordinal].text,
                score=score,
            )
            for ordinal, score in hits
        ]
        prompt = render_reading_prompt(question, passages)
        resp = self.backend.generate(GenRequest(prompt=prompt, stop_sequences=("\n\n",)))
        _record(record, "qa_reader", prompt, resp.text)
        answer = _first_nonempty_line(resp.text)
        if not answer:
            raise EmptyGeneration("reader returned no answer text")
        return QAResult(answer=answer, evidence=tuple(passages))


class Seq2Seq:
    """Single-call backend: first line is the answer, remainder the evidence."""

    def __init__(self, backend):
        self.backend = backend

    name = "seq2seq"

    def answer(self, question: str, record: Optional[Recorder] = None) -> QAResult:
        prompt = SEQ2SEQ_TEMPLATE.format(question=question)
        resp = self.backend.generate(GenRequest(prompt=prompt))
        _record(record, "qa_seq2seq", prompt, resp.text)
        text = resp.text.strip()
        if not text:
            raise EmptyGeneration("seq2seq backend returned empty completion")
        answer, _, evidence_text = text.partition("\n")
        answer = answer.strip()
        evidence_text = evidence_text.strip() or answer
        passage = EvidencePassage(source_id=GENERATED_SOURCE_ID, text=evidence_text)
        return QAResult(answer=answer, evidence=(passage,))


class ReciterReader:
    """Two calls: recite a supporting passage, then read the answer from it."""

    def __init__(self, backend, bank: Optional[DemoBank] = None):
        self.backend = backend
        self.bank = bank or DemoBank.default()

    name = "reciter_reader"

    def answer(self, question: str, record: Optional[Recorder] = None) -> QAResult:
        # Reciter prompts only take the question; claim/context are unused.
        recite_prompt = render(
            "reciter",
            Claim(id="_", text="_"),
            Context(),
            extra=question,
            bank=self.bank,
        ).text
        recite_resp = self.backend.generate(GenRequest(prompt=recite_prompt))
        _record(record, "qa_reciter", recite_prompt, recite_resp.text)
        passage_text = recite_resp.text.strip()
        if not passage_text:
            raise EmptyGeneration("recitation call returned empty text")
        passage = EvidencePassage(source_id=GENERATED_SOURCE_ID, text=passage_text)

        read_prompt = render_reading_prompt(question, [passage])
        read_resp = self.backend.generate(GenRequest(prompt=read_prompt, stop_sequences=("\n\n",)))
        _record(record, "qa_reader", read_prompt, read_resp.text)
        answer = _first_nonempty_line(read_resp.text)
        if not answer:
            raise EmptyGeneration("reader call returned empty text")
        return QAResult(answer=answer, evidence=(passage,))
