#!/usr/bin/env python3
"""Regenerate checked-in data and test fixtures:

  src/claimcheck/data/demo_bank.json     few-shot demonstration bank
  src/claimcheck/data/example_claims.json
  tests/goldens/*.txt                    golden prompt renderings
  tests/fixtures/onsager_transcript.jsonl scripted replay transcript
  frontend/tests/fixtures/onsager_trace.json finished trace for UI tests

Run from the repo root after an editable install.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from claimcheck.core import Claim, Context, QAPair  # noqa: E402
from claimcheck.genbackend import dump_script, load_script  # noqa: E402
from claimcheck.pipeline import Pipeline, PipelineConfig  # noqa: E402
from claimcheck.prompts import DemoBank, render  # noqa: E402
from claimcheck.qa import ReciterReader, render_reading_prompt  # noqa: E402
from claimcheck.core import EvidencePassage  # noqa: E402

DATA_DIR = ROOT / "src" / "claimcheck" / "data"
GOLDEN_DIR = ROOT / "tests" / "goldens"
FIXTURE_DIR = ROOT / "tests" / "fixtures"
FRONTEND_FIXTURE_DIR = ROOT / "frontend" / "tests" / "fixtures"


# ---------------------------------------------------------------------------
# Demo bank
# ---------------------------------------------------------------------------

def verifier_demo(claim: str, pairs: list[tuple[str, str]], prediction: str) -> str:
    lines = [f"Claim = {claim}", "We already know the following:"]
    for i, (q, a) in enumerate(pairs, start=1):
        lines.append(f"Question {i} = {q}")
        lines.append(f"Answer {i} = {a}")
    lines.append("Can we know whether the claim is true or false now? Yes or no?")
    lines.append(f"Prediction = {prediction}")
    return "\n".join(lines)


def initial_demo(claim: str, question: str) -> str:
    return "\n".join(
        [
            f"Claim = {claim}",
            "To verify the above claim, we can first ask a simple question:",
            f"Question = {question}",
        ]
    )


def followup_demo(claim: str, pairs: list[tuple[str, str]], question: str) -> str:
    lines = [f"Claim = {claim}", "We already know the following:"]
    for i, (q, a) in enumerate(pairs, start=1):
        lines.append(f"Question {i} = {q}")
        lines.append(f"Answer {i} = {a}")
    lines.append("To verify the claim, what is the next question we need to know the answer to?")
    lines.append(f"Question {len(pairs) + 1} = {question}")
    return "\n".join(lines)


def validator_demo(
    claim: str, known: list[tuple[str, str]], new: tuple[str, str], answer: str
) -> str:
    lines = [f"Claim = {claim}", "We already know the following:"]
    for q, a in known:
        lines.append(f"Question = {q}")
        lines.append(f"Answer = {a}")
    lines.append("Now we further know:")
    lines.append(f"Question = {new[0]}")
    lines.append(f"Answer = {new[1]}")
    lines.append("Does the QA pair have additional knowledge useful for verifying the claim?")
    lines.append(f"The answer: {answer}")
    return "\n".join(lines)


def reasoner_demo(pairs: list[tuple[str, str]], claim: str, rationale: list[str]) -> str:
    lines = ["Contexts:"]
    for i, (q, a) in enumerate(pairs, start=1):
        lines.append(f"Q{i}: {q}")
        lines.append(f"A{i}: {a}")
    lines.append(f"Claim = {claim}")
    lines.append("")
    lines.append("Is this claim true or false?")
    lines.append("")
    lines.append("Answer:")
    lines.extend(rationale)
    return "\n".join(lines)


def reciter_demo(question: str, passage: str) -> str:
    return (
        f"Recite a short factual passage that contains the information needed to answer: "
        f"{question}\n{passage}"
    )


SUPERDRAG = "Superdrag and Collective Soul are both rock bands."
SD_Q1, SD_A1 = "Is Superdrag a rock band?", "Yes"
SD_Q2, SD_A2 = "Is Collective Soul a rock band?", "Yes"


def build_demo_bank() -> dict:
    def published(text: str) -> dict:
        return {"text": text, "provenance": "published"}

    def authored(text: str) -> dict:
        return {"text": text, "provenance": "authored"}

    # Authored two-hop fixtures: claim, (q1, a1), (q2, a2), verdict word.
    eiffel = (
        "The Eiffel Tower is taller than the Statue of Liberty.",
        ("How tall is the Eiffel Tower?", "About 330 meters"),
        ("How tall is the Statue of Liberty?", "About 93 meters"),
        "True",
    )
    everest = (
        "Mount Everest and K2 are both located in Asia.",
        ("Where is Mount Everest located?", "In Asia, on the border of Nepal and China"),
        ("Where is K2 located?", "In Asia, on the border of Pakistan and China"),
        "True",
    )
    wall = (
        "The Great Wall of China was built before the Roman Colosseum.",
        ("When did construction of the Great Wall of China begin?", "Around the 7th century BC"),
        ("When was the Roman Colosseum built?", "Between AD 70 and AD 80"),
        "True",
    )
    einstein = (
        "Albert Einstein died in the country where he was born.",
        ("Where was Albert Einstein born?", "In Ulm, Germany"),
        ("Where did Albert Einstein die?", "In Princeton, United States"),
        "False",
    )
    shakespeare = (
        "William Shakespeare and Christopher Marlowe were born in the same year.",
        ("When was William Shakespeare born?", "1564"),
        ("When was Christopher Marlowe born?", "1564"),
        "True",
    )
    pacific = (
        "The Pacific Ocean borders both Chile and Portugal.",
        ("Does the Pacific Ocean border Chile?", "Yes"),
        ("Does the Pacific Ocean border Portugal?", "No, Portugal borders the Atlantic Ocean"),
        "False",
    )
    rivers = (
        "The Nile and the Mississippi rivers are on the same continent.",
        ("On which continent is the Nile River?", "Africa"),
        ("On which continent is the Mississippi River?", "North America"),
        "False",
    )
    davinci = (
        "Leonardo da Vinci painted both the Mona Lisa and The Starry Night.",
        ("Who painted the Mona Lisa?", "Leonardo da Vinci"),
        ("Who painted The Starry Night?", "Vincent van Gogh"),
        "False",
    )
    japan = (
        "Tokyo and Kyoto are both cities in Japan.",
        ("Is Tokyo a city in Japan?", "Yes"),
        ("Is Kyoto a city in Japan?", "Yes"),
        "True",
    )
    two_hop = [eiffel, everest, wall, einstein, shakespeare, pacific, rivers, davinci, japan]

    # Single-hop fixtures for initial-question variety.
    amazon = ("The Amazon River flows into the Pacific Ocean.",
              ("Which ocean does the Amazon River flow into?", "The Atlantic Ocean"))
    venus = ("Venus is the closest planet to the Sun.",
             ("Which planet is closest to the Sun?", "Mercury"))

    verifier = [
        published(verifier_demo(SUPERDRAG, [(SD_Q1, SD_A1)], "No, we cannot know.")),
        published(verifier_demo(SUPERDRAG, [(SD_Q1, SD_A1), (SD_Q2, SD_A2)], "Yes, we can know.")),
    ]
    for i, (claim, p1, p2, _) in enumerate(two_hop[:8]):
        if i % 2 == 0:
            verifier.append(authored(verifier_demo(claim, [p1], "No, we cannot know.")))
        else:
            verifier.append(authored(verifier_demo(claim, [p1, p2], "Yes, we can know.")))

    initial = [published(initial_demo(SUPERDRAG, SD_Q1))]
    for claim, p1, _, _ in two_hop[:7]:
        initial.append(authored(initial_demo(claim, p1[0])))
    initial.append(authored(initial_demo(amazon[0], amazon[1][0])))
    initial.append(authored(initial_demo(venus[0], venus[1][0])))

    followup = [published(followup_demo(SUPERDRAG, [(SD_Q1, SD_A1)], SD_Q2))]
    for claim, p1, p2, _ in two_hop:
        followup.append(authored(followup_demo(claim, [p1], p2[0])))

    validator = [published(validator_demo(SUPERDRAG, [(SD_Q1, SD_A1)], (SD_Q2, SD_A2), "Yes"))]
    for claim, p1, p2, _ in two_hop[:7]:
        validator.append(authored(validator_demo(claim, [p1], p2, "Yes")))
    # Negative demos: redundant or off-topic pairs add nothing.
    validator.append(
        authored(
            validator_demo(
                eiffel[0],
                [eiffel[1]],
                ("How tall is the Eiffel Tower?", "About 330 meters"),
                "No",
            )
        )
    )
    validator.append(
        authored(
            validator_demo(
                venus[0],
                [venus[1]],
                ("What color is Venus?", "Pale yellow"),
                "No",
            )
        )
    )

    reasoner = [
        published(
            reasoner_demo(
                [("When Lars Onsager won the Nobel Prize?", "1968"),
                 ("When was Lars Onsager born?", "1903")],
                "Lars Onsager won the Nobel Prize when he was 30 years old.",
                [
                    "Lars Onsager won the Nobel Prize in 1968.",
                    "Lars Onsager was born in 1903.",
                    "Therefore, the final answer is: False.",
                ],
            )
        )
    ]
    for claim, p1, p2, verdict in two_hop:
        reasoner.append(
            authored(
                reasoner_demo(
                    [p1, p2],
                    claim,
                    [
                        f"{p1[1]} answers the first question and {p2[1].lower()} answers the second.",
                        f"Therefore, the final answer is: {verdict}.",
                    ],
                )
            )
        )

    reciter = [
        authored(
            reciter_demo(
                "How tall is the Eiffel Tower?",
                "The Eiffel Tower is a wrought-iron lattice tower in Paris, France. "
                "It stands about 330 meters tall, roughly the height of an 81-storey building.",
            )
        ),
        authored(
            reciter_demo(
                "When was Christopher Marlowe born?",
                "Christopher Marlowe was an English playwright and poet of the Elizabethan era. "
                "He was baptised in Canterbury on 26 February 1564, the same year William "
                "Shakespeare was born.",
            )
        ),
        authored(
            reciter_demo(
                "Which planet is closest to the Sun?",
                "Mercury is the smallest planet in the Solar System and the closest to the Sun. "
                "It orbits at an average distance of about 58 million kilometers.",
            )
        ),
    ]

    return {
        "verifier": verifier,
        "initial_question": initial,
        "followup_question": followup,
        "validator": validator,
        "reasoner": reasoner,
        "reciter": reciter,
    }


# ---------------------------------------------------------------------------
# Goldens and transcript
# ---------------------------------------------------------------------------

ONSAGER = "Lars Onsager won the Nobel Prize when he was 30 years old."
ON_Q1, ON_A1 = "When Lars Onsager won the Nobel Prize?", "1968"
ON_Q2, ON_A2 = "When was Lars Onsager born?", "1903"

ON_RECITE_1 = (
    "Lars Onsager was a Norwegian-born American physical chemist. He was awarded "
    "the Nobel Prize in Chemistry in 1968 for the discovery of the reciprocal "
    "relations bearing his name."
)
ON_RECITE_2 = "Lars Onsager was born on November 27, 1903, in Oslo, Norway."
ON_RATIONALE = (
    "Lars Onsager won the Nobel Prize in 1968.\n"
    "Lars Onsager was born in 1903.\n"
    "This means he was 64 or 65 years old when he won the Nobel Prize, not 30.\n"
    "Therefore, the final answer is: False."
)


def write_goldens(bank: DemoBank) -> None:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    sd_claim = Claim(id="superdrag", text=SUPERDRAG)
    on_claim = Claim(id="onsager", text=ONSAGER)
    sd_ctx1 = Context((QAPair(1, SD_Q1, SD_A1),))
    sd_ctx2 = Context((QAPair(1, SD_Q1, SD_A1), QAPair(2, SD_Q2, SD_A2)))
    on_ctx1 = Context((QAPair(1, ON_Q1, ON_A1),))
    on_ctx2 = Context((QAPair(1, ON_Q1, ON_A1), QAPair(2, ON_Q2, ON_A2)))
    empty = Context()

    goldens = {
        "verifier_superdrag": render("verifier", sd_claim, sd_ctx1, bank=bank),
        "verifier_onsager": render("verifier", on_claim, on_ctx2, bank=bank),
        "verifier_empty_context": render("verifier", sd_claim, empty, bank=bank),
        "initial_question_superdrag": render("initial_question", sd_claim, empty, bank=bank),
        "initial_question_onsager": render("initial_question", on_claim, empty, bank=bank),
        "followup_question_superdrag": render(
            "followup_question", sd_claim, sd_ctx1, extra=2, bank=bank
        ),
        "followup_question_onsager": render(
            "followup_question", on_claim, on_ctx1, extra=2, bank=bank
        ),
        "validator_superdrag": render(
            "validator", sd_claim, sd_ctx1, extra=QAPair(2, SD_Q2, SD_A2), bank=bank
        ),
        "validator_onsager": render(
            "validator", on_claim, on_ctx1, extra=QAPair(2, ON_Q2, ON_A2), bank=bank
        ),
        "reasoner_superdrag": render("reasoner", sd_claim, sd_ctx2, bank=bank),
        "reasoner_onsager": render("reasoner", on_claim, on_ctx2, bank=bank),
        "reciter_superdrag": render("reciter", sd_claim, empty, extra=SD_Q1, bank=bank),
        "reciter_onsager": render("reciter", on_claim, empty, extra=ON_Q2, bank=bank),
    }
    for name, rendered in goldens.items():
        (GOLDEN_DIR / f"{name}.txt").write_text(rendered.text, encoding="utf-8")


def build_onsager_transcript(bank: DemoBank) -> list[tuple[str, str]]:
    claim = Claim(id="onsager", text=ONSAGER)
    empty = Context()
    ctx1 = Context((QAPair(1, ON_Q1, ON_A1),))
    ctx2 = Context((QAPair(1, ON_Q1, ON_A1), QAPair(2, ON_Q2, ON_A2)))
    passage1 = EvidencePassage(source_id="generated", text=ON_RECITE_1)
    passage2 = EvidencePassage(source_id="generated", text=ON_RECITE_2)

    return [
        (render("verifier", claim, empty, bank=bank).text, "No, we cannot know."),
        (render("initial_question", claim, empty, bank=bank).text, ON_Q1),
        (render("reciter", claim, empty, extra=ON_Q1, bank=bank).text, ON_RECITE_1),
        (render_reading_prompt(ON_Q1, [passage1]), ON_A1),
        (
            render("validator", claim, empty, extra=QAPair(1, ON_Q1, ON_A1), bank=bank).text,
            "Yes",
        ),
        (render("verifier", claim, ctx1, bank=bank).text, "No, we cannot know."),
        (render("followup_question", claim, ctx1, extra=2, bank=bank).text, ON_Q2),
        (render("reciter", claim, empty, extra=ON_Q2, bank=bank).text, ON_RECITE_2),
        (render_reading_prompt(ON_Q2, [passage2]), ON_A2),
        (
            render("validator", claim, ctx1, extra=QAPair(2, ON_Q2, ON_A2), bank=bank).text,
            "Yes",
        ),
        (render("verifier", claim, ctx2, bank=bank).text, "Yes, we can know."),
        (render("reasoner", claim, ctx2, bank=bank).text, ON_RATIONALE),
    ]


def write_frontend_trace_fixture(bank: DemoBank, script_path: Path) -> None:
    FRONTEND_FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    backend = load_script(script_path)
    pipeline = Pipeline(PipelineConfig(), backend, ReciterReader(backend, bank=bank), bank=bank)
    trace = pipeline.run_check(
        Claim(id="onsager", text=ONSAGER), trace_id="0123456789abcdef0123456789abcdef"
    )
    assert trace.status == "done", trace.error_detail
    (FRONTEND_FIXTURE_DIR / "onsager_trace.json").write_text(
        trace.to_json(), encoding="utf-8"
    )


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)

    bank_dict = build_demo_bank()
    (DATA_DIR / "demo_bank.json").write_text(
        json.dumps(bank_dict, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    (DATA_DIR / "example_claims.json").write_text(
        json.dumps(
            [
                {"text": ONSAGER},
                {"text": "Sunlight can reach the deepest part of the Black Sea."},
                {"text": SUPERDRAG},
            ],
            ensure_ascii=False,
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )

    bank = DemoBank.from_file(DATA_DIR / "demo_bank.json")
    write_goldens(bank)

    transcript = build_onsager_transcript(bank)
    script_path = FIXTURE_DIR / "onsager_transcript.jsonl"
    dump_script(transcript, script_path)
    write_frontend_trace_fixture(bank, script_path)
    print(f"wrote {len(transcript)} transcript entries and {len(bank_dict)} demo roles")


if __name__ == "__main__":
    main()
