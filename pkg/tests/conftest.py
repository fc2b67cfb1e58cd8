import itertools
from pathlib import Path

import pytest

from claimcheck.core import Claim, Context
from claimcheck.genbackend import GenResponse, load_script
from claimcheck.pipeline import Pipeline, PipelineConfig
from claimcheck.prompts import DemoBank
from claimcheck.qa import ReciterReader

TESTS_DIR = Path(__file__).parent
FIXTURE_DIR = TESTS_DIR / "fixtures"
GOLDEN_DIR = TESTS_DIR / "goldens"

ONSAGER_CLAIM = "Lars Onsager won the Nobel Prize when he was 30 years old."
SUPERDRAG_CLAIM = "Superdrag and Collective Soul are both rock bands."


class FakeBackend:
    """Programmable generation backend: routes each prompt by role marker."""

    def __init__(self, responder):
        self.responder = responder
        self.calls = []

    def generate(self, req):
        self.calls.append(req.prompt)
        return GenResponse(text=self.responder(req.prompt), finish_reason="stop")


def role_of(prompt: str) -> str:
    if prompt.endswith("Prediction = "):
        return "verifier"
    if prompt.endswith("The answer: "):
        return "validator"
    if prompt.endswith("Therefore, the final answer is"):
        return "reasoner"
    if prompt.rstrip().endswith("="):
        return "question"
    if prompt.startswith("Recite a short factual passage") or "\nRecite a short factual passage" in prompt:
        return "recite"
    if prompt.startswith("Answer the question using only the passages"):
        return "reader"
    if prompt.startswith("Answer the question and then provide"):
        return "seq2seq"
    raise AssertionError(f"unrecognized prompt shape: {prompt[-120:]!r}")


def make_scripted_responder(
    verifier="No, we cannot know.",
    validator="Yes",
    reasoner="All gathered facts line up.\nTherefore, the final answer is: True.",
    reader="a fact",
    recite="A short recited passage with the relevant fact.",
):
    counter = itertools.count(1)

    def responder(prompt: str) -> str:
        role = role_of(prompt)
        if role == "verifier":
            return verifier
        if role == "validator":
            return validator
        if role == "reasoner":
            return reasoner
        if role == "question":
            return f"What is fact number {next(counter)}?"
        if role == "recite":
            return recite
        if role == "reader":
            return reader
        return "42\nBecause the model says so."

    return responder


@pytest.fixture(scope="session")
def bank():
    return DemoBank.default()


@pytest.fixture(scope="session")
def onsager_backend():
    return load_script(FIXTURE_DIR / "onsager_transcript.jsonl")


@pytest.fixture()
def onsager_pipeline(bank, onsager_backend):
    qa = ReciterReader(onsager_backend, bank=bank)
    return Pipeline(PipelineConfig(), onsager_backend, qa, bank=bank)


@pytest.fixture()
def onsager_claim():
    return Claim(id="onsager", text=ONSAGER_CLAIM)


def fake_pipeline(bank, config=None, **responder_kwargs) -> Pipeline:
    backend = FakeBackend(make_scripted_responder(**responder_kwargs))
    qa = ReciterReader(backend, bank=bank)
    return Pipeline(config or PipelineConfig(), backend, qa, bank=bank)
