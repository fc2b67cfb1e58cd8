import json

import pytest

from claimcheck.core import Claim, Context, Label, QAPair, validate_trace
from claimcheck.pipeline import (
    Pipeline,
    PipelineConfig,
    UnparseableCompletion,
    UnparseableVerdict,
    parse_final_answer,
    parse_yes_no,
)
from claimcheck.qa import ReciterReader

from conftest import FakeBackend, fake_pipeline, make_scripted_responder, role_of


class TestParseYesNo:
    def test_yes_variants(self):
        assert parse_yes_no("Yes, we can know.") is True
        assert parse_yes_no("The answer: Yes") is True
        assert parse_yes_no("  YES  ") is True

    def test_no_variants(self):
        assert parse_yes_no("No, we cannot know.") is False
        assert parse_yes_no("no — adds nothing") is False
        assert parse_yes_no("The answer: No") is False

    def test_unparseable(self):
        with pytest.raises(UnparseableCompletion):
            parse_yes_no("Maybe.")
        with pytest.raises(UnparseableCompletion):
            parse_yes_no("certainly")


class TestParseFinalAnswer:
    def test_reference_style(self):
        assert (
            parse_final_answer("...Therefore, the final answer is: False.") is Label.REFUTED
        )

    def test_case_and_punctuation_robust(self):
        assert parse_final_answer("final answer is TRUE") is Label.SUPPORTED
        assert parse_final_answer("Therefore, the final answer is:  false!") is Label.REFUTED

    def test_last_occurrence_wins(self):
        text = "the final answer is: True. Wait. Therefore, the final answer is: False."
        assert parse_final_answer(text) is Label.REFUTED

    def test_requires_final_keyword(self):
        with pytest.raises(UnparseableVerdict):
            parse_final_answer("the answer is false")
        with pytest.raises(UnparseableVerdict):
            parse_final_answer("It is unclear.")
        with pytest.raises(UnparseableVerdict):
            parse_final_answer("the final answer is unclear")


class TestRoles:
    def test_verify_sufficiency(self, bank):
        claim = Claim(id="c", text="Superdrag and Collective Soul are both rock bands.")
        pipeline = fake_pipeline(bank, verifier="No, we cannot know.")
        assert pipeline.verify_sufficiency(claim, Context()) is False
        pipeline = fake_pipeline(bank, verifier="Yes, we can know.")
        assert pipeline.verify_sufficiency(claim, Context()) is True

    def test_generate_question_first_nonempty_line(self, bank):
        claim = Claim(id="c", text="A claim.")

        def responder(prompt):
            return "\n\n  Is Superdrag a rock band?  \nsecond line"

        pipeline = Pipeline(
            PipelineConfig(), FakeBackend(responder), ReciterReader(FakeBackend(responder), bank=bank), bank=bank
        )
        assert pipeline.generate_question(claim, Context()) == "Is Superdrag a rock band?"

    def test_generate_question_empty_raises(self, bank):
        claim = Claim(id="c", text="A claim.")
        backend = FakeBackend(lambda p: "\n\n")
        pipeline = Pipeline(PipelineConfig(), backend, ReciterReader(backend, bank=bank), bank=bank)
        from claimcheck.pipeline import EmptyGeneration

        with pytest.raises(EmptyGeneration):
            pipeline.generate_question(claim, Context())

    def test_validate_qa_duplicate_short_circuits(self, bank):
        claim = Claim(id="c", text="A claim.")
        backend = FakeBackend(lambda p: "Yes")
        pipeline = Pipeline(PipelineConfig(), backend, ReciterReader(backend, bank=bank), bank=bank)
        ctx = Context((QAPair(1, "Q?", "A"),))
        assert pipeline.validate_qa(claim, ctx, QAPair(2, "Q?", "A")) is False
        assert backend.calls == []  # no backend call for verbatim duplicates

    def test_reason_builds_verdict(self, bank):
        claim = Claim(id="c", text="A claim.")
        rationale = "Fact one. Fact two.\nTherefore, the final answer is: True."
        pipeline = fake_pipeline(bank, reasoner=rationale)
        verdict = pipeline.reason(claim, Context())
        assert verdict.label is Label.SUPPORTED
        assert "Therefore, the final answer is: True." in verdict.rationale


class TestRunCheckScripted:
    def test_onsager_golden_run(self, onsager_pipeline, onsager_claim):
        trace = onsager_pipeline.run_check(onsager_claim, trace_id="deadbeef" * 4)
        assert trace.status == "done", trace.error_detail
        accepted = trace.accepted_steps
        assert len(accepted) == 2
        assert accepted[0].question == "When Lars Onsager won the Nobel Prize?"
        assert accepted[0].answer == "1968"
        assert accepted[1].question == "When was Lars Onsager born?"
        assert accepted[1].answer == "1903"
        assert trace.verdict.label is Label.REFUTED
        assert "the final answer is: False" in trace.verdict.rationale
        assert validate_trace(trace) == []

    def test_exchanges_recorded_in_call_order(self, onsager_pipeline, onsager_claim):
        trace = onsager_pipeline.run_check(onsager_claim)
        roles = [x.role for x in trace.raw_exchanges]
        assert roles == [
            "verifier",
            "question_generator",
            "qa_reciter",
            "qa_reader",
            "validator",
            "verifier",
            "question_generator",
            "qa_reciter",
            "qa_reader",
            "validator",
            "verifier",
            "reasoner",
        ]

    def test_deterministic_replay(self, onsager_pipeline, onsager_claim):
        t1 = onsager_pipeline.run_check(onsager_claim, trace_id="00" * 16)
        t2 = onsager_pipeline.run_check(onsager_claim, trace_id="00" * 16)
        d1, d2 = t1.to_dict(), t2.to_dict()
        for d in (d1, d2):
            d["started_at"] = d["finished_at"] = None
        assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)

    def test_script_miss_yields_error_trace(self, onsager_pipeline, bank):
        other = Claim(id="x", text="Some other claim entirely.")
        trace = onsager_pipeline.run_check(other)
        assert trace.status == "error"
        assert "ScriptMissError" in trace.error_detail
        assert trace.verdict is None
        assert trace.finished_at is not None


class TestLoopBounds:
    def test_max_depth_cutoff(self, bank):
        # Verifier never satisfied; QA always valid: exactly max_depth
        # accepted steps, then a verdict.
        pipeline = fake_pipeline(bank, verifier="No, we cannot know.", validator="Yes")
        trace = pipeline.run_check(Claim(id="c", text="An inexhaustible claim."))
        assert trace.status == "done", trace.error_detail
        assert len(trace.accepted_steps) == 5
        assert len(trace.steps) == 5
        assert trace.verdict is not None
        assert validate_trace(trace) == []

    def test_custom_max_depth(self, bank):
        pipeline = fake_pipeline(
            bank, config=PipelineConfig(max_depth=2), verifier="No, we cannot know."
        )
        trace = pipeline.run_check(Claim(id="c", text="A claim."))
        assert len(trace.accepted_steps) == 2

    def test_always_rejecting_validator_force_accepts(self, bank):
        pipeline = fake_pipeline(bank, verifier="No, we cannot know.", validator="No")
        trace = pipeline.run_check(Claim(id="c", text="A stubborn claim."))
        assert trace.status == "done", trace.error_detail
        # Per depth: 3 rejected attempts, then the last candidate force-accepted.
        for depth in range(1, 6):
            steps = [s for s in trace.steps if s.depth == depth]
            assert [s.accepted for s in steps] == [False, False, False, True]
            assert steps[-1].question == steps[2].question  # forced pair reuses last candidate
            for rejected in steps[:3]:
                assert rejected.rejection_reason
        assert len(trace.accepted_steps) == 5
        assert validate_trace(trace) == []

    def test_rejected_questions_not_reasked_same_depth(self, bank):
        pipeline = fake_pipeline(bank, verifier="No, we cannot know.", validator="No")
        trace = pipeline.run_check(Claim(id="c", text="A stubborn claim."))
        for depth in range(1, 6):
            rejected = [s.question for s in trace.steps if s.depth == depth and not s.accepted]
            assert len(set(rejected)) == len(rejected)

    def test_zero_step_verification(self, bank):
        pipeline = fake_pipeline(
            bank,
            verifier="Yes, we can know.",
            reasoner="Obvious.\nTherefore, the final answer is: True.",
        )
        trace = pipeline.run_check(Claim(id="c", text="A trivially checkable claim."))
        assert trace.steps == ()
        assert trace.verdict.label is Label.SUPPORTED


class TestContextAppendOnly:
    def test_prompts_repeat_accepted_pairs_unchanged(self, bank):
        pipeline = fake_pipeline(bank, verifier="No, we cannot know.", validator="Yes")
        backend = pipeline._backends["verifier"]
        trace = pipeline.run_check(Claim(id="c", text="A claim."))
        first_q = trace.accepted_steps[0].question
        first_a = trace.accepted_steps[0].answer
        later_verifier_prompts = [
            p for p in backend.calls if role_of(p) == "verifier"
        ][1:]
        for prompt in later_verifier_prompts:
            assert f"Question 1 = {first_q}" in prompt
            assert f"Answer 1 = {first_a}" in prompt


class TestConfig:
    def test_defaults(self):
        config = PipelineConfig()
        assert config.max_depth == 5
        assert config.max_regen_attempts == 3

    def test_bounds(self):
        with pytest.raises(ValueError):
            PipelineConfig(max_depth=0)
        with pytest.raises(ValueError):
            PipelineConfig(max_regen_attempts=0)
