"""
Reasoning profiler and judge client tests.
"""

import httpx
import pytest

from agents.builder import JudgePromptBuilder, get_prompt_builder
from agents.judge import HttpJudgeClient, KeywordJudgeClient
from apps.profiler.profiler import aprofile, build_judge_prompt, judge_sentences, parse_labels
from apps.profiler.schemas import ProfileReport, ProfilerConfig, ReasoningCategory
from apps.segmentation.schemas import SegmentationConfig
from apps.segmentation.segmenter import build_response
from core.exceptions import ConfigInvalid, EmptyInput, JudgeUnavailable

from .conftest import GarbageJudge, ScriptedJudge

TRACE = (
    "<think>First we set x to the unknown. Then 3 + 4 = 7.\n\n"
    "Wait, let me check that. Alternatively we could draw it.</think> So \\boxed{7}."
)


def response(raw: str = TRACE):
    return build_response("q1", raw, SegmentationConfig())


class TestJudgePrompt:
    """Test the judge prompt."""

    def test_contains_categories_and_sentences(self):
        """Test the prompt lists every category and numbers the sentences."""
        prompt = build_judge_prompt(response())
        for category in ReasoningCategory:
            assert category.value in prompt
        assert "<sentences>\n1. First we set x to the unknown.\n2. Then 3 + 4 = 7." in prompt
        assert "4. Alternatively we could draw it.\n</sentences>" in prompt

    def test_line_breaks_inside_a_sentence(self):
        """Test a sentence spanning lines is numbered once, on one line."""
        raw = "<think>We list cases:\n2. the odd case\n  is done.</think> \\boxed{1}"
        sentences = judge_sentences(response(raw))
        assert sentences == ["We list cases: 2.", "the odd case is done."]
        prompt = build_judge_prompt(response(raw))
        block = prompt.split("<sentences>\n")[1].split("\n</sentences>")[0]
        assert block.splitlines() == ["1. We list cases: 2.", "2. the odd case is done."]

    def test_builder_flattens_sentences(self):
        """Test the builder keeps one line per sentence for any caller."""
        prompt = get_prompt_builder().build_prompt(["a\nb", "c"])
        assert prompt.endswith("<sentences>\n1. a b\n2. c\n</sentences>")

    def test_empty_reasoning(self):
        """Test a response without reasoning cannot be judged."""
        with pytest.raises(EmptyInput):
            build_judge_prompt(response("<think></think> \\boxed{1}"))

    def test_builder_is_cached(self):
        """Test one builder per judge config."""
        assert get_prompt_builder() is get_prompt_builder()

    def test_unknown_judge_config(self):
        """Test an unknown judge config is rejected."""
        with pytest.raises(ConfigInvalid):
            JudgePromptBuilder("no_such_judge")


class TestParseLabels:
    """Test reply parsing."""

    def test_names_and_labels(self):
        """Test labels by name with mixed separators and spellings."""
        reply = "<labels>\n1: PivotalReasoning\n2. Verification & Self-Correction\n3) nonsubstantive\n</labels>"
        assert parse_labels(reply, 3) == {
            1: ReasoningCategory.PIVOTAL_REASONING,
            2: ReasoningCategory.VERIFICATION_SELF_CORRECTION,
            3: ReasoningCategory.NON_SUBSTANTIVE,
        }

    def test_out_of_range_and_unknown_dropped(self):
        """Test unknown labels and out-of-range numbers are dropped."""
        reply = "<labels>\n1: Guessing\n5: PivotalReasoning\n</labels>"
        assert parse_labels(reply, 2) == {}

    def test_no_block(self):
        """Test a reply without a labels block parses to nothing."""
        assert parse_labels("1: PivotalReasoning", 1) == {}


class TestProfile:
    """Test aggregation over judged sentences."""

    async def test_constant_judge(self):
        """Test a single-label judge gives that category all the mass."""
        report = await aprofile([response()], ScriptedJudge(lambda s: "PivotalReasoning"))
        assert report.sentence_count == 4
        assert report.fractions[ReasoningCategory.PIVOTAL_REASONING] == 1.0
        assert sum(report.fractions.values()) == pytest.approx(1.0)

    async def test_fractions_follow_labels(self):
        """Test fractions follow the judge's labels."""
        def choose(sentence):
            return "ExploringAlternatives" if sentence.startswith("Alternatively") else "PivotalReasoning"

        report = await aprofile([response(), response()], ScriptedJudge(choose))
        assert report.sentence_count == 8
        assert report.fractions[ReasoningCategory.EXPLORING_ALTERNATIVES] == 0.25
        assert report.fractions[ReasoningCategory.PIVOTAL_REASONING] == 0.75

    async def test_missing_label_retried(self):
        """Test unlabeled sentences are sent again on their own."""
        judge = ScriptedJudge(lambda s: "PivotalReasoning", fail_numbers={2})
        report = await aprofile([response()], judge)
        assert len(judge.prompts) == 2
        assert "1. Then 3 + 4 = 7." in judge.prompts[1]
        assert report.fallback_count == 0
        assert report.fractions[ReasoningCategory.PIVOTAL_REASONING] == 1.0

    async def test_unparseable_replies_fall_back(self):
        """Test sentences still unlabeled after retry fall back."""
        judge = GarbageJudge()
        report = await aprofile([response()], judge)
        assert judge.calls == 2
        assert report.fallback_count == 4
        assert report.fractions[ReasoningCategory.NON_SUBSTANTIVE] == 1.0

    async def test_batching(self):
        """Test sentences are judged in batches."""
        judge = ScriptedJudge(lambda s: "PivotalReasoning")
        await aprofile([response()], judge, ProfilerConfig(batch_size=3))
        assert len(judge.prompts) == 2

    async def test_keyword_judge(self):
        """Test the offline keyword judge."""
        report = await aprofile([response()], KeywordJudgeClient())
        assert report.fractions[ReasoningCategory.PIVOTAL_REASONING] == 0.25
        assert report.fractions[ReasoningCategory.PRODUCTIVE_ELABORATION_CALCULATION] == 0.25
        assert report.fractions[ReasoningCategory.VERIFICATION_SELF_CORRECTION] == 0.25
        assert report.fractions[ReasoningCategory.EXPLORING_ALTERNATIVES] == 0.25

    async def test_no_responses(self):
        """Test no responses cannot be profiled."""
        with pytest.raises(EmptyInput):
            await aprofile([], KeywordJudgeClient())

    async def test_no_sentences(self):
        """Test responses without sentences cannot be profiled."""
        with pytest.raises(EmptyInput):
            await aprofile([response("<think>\n\n</think> \\boxed{1}")], KeywordJudgeClient())


class TestProfileReport:
    """Test report formatting."""

    def test_table(self):
        """Test percentages and total in the table."""
        counts = {
            ReasoningCategory.PRODUCTIVE_ELABORATION_CALCULATION: 94,
            ReasoningCategory.PIVOTAL_REASONING: 91,
            ReasoningCategory.EXPLORING_ALTERNATIVES: 20,
            ReasoningCategory.VERIFICATION_SELF_CORRECTION: 63,
            ReasoningCategory.NON_SUBSTANTIVE: 32,
        }
        table = ProfileReport.from_counts(counts).format_table()
        assert "31.33%" in table
        assert "30.33%" in table
        assert " 6.67%" in table
        assert "21.00%" in table
        assert "10.67%" in table
        assert "300" in table
        assert "Fallback" not in table

    def test_fallbacks_shown(self):
        """Test fallback labels are reported."""
        report = ProfileReport.from_counts({ReasoningCategory.NON_SUBSTANTIVE: 2}, fallback_count=2)
        assert "Fallback labels" in report.format_table()


class TestHttpJudgeClient:
    """Test the HTTP judge against a mock transport."""

    async def test_reply_content(self):
        """Test the reply content and bearer token."""
        seen = []

        def handler(request: httpx.Request) -> httpx.Response:
            seen.append(request)
            return httpx.Response(
                200, json={"choices": [{"message": {"content": "<labels>\n1: PivotalReasoning\n</labels>"}}]}
            )

        client = HttpJudgeClient(
            api_url="http://judge.test/v1/chat", api_key="k", model="m", timeout=5,
            transport=httpx.MockTransport(handler),
        )
        reply = await client.complete("prompt")
        assert parse_labels(reply, 1) == {1: ReasoningCategory.PIVOTAL_REASONING}
        assert seen[0].headers["Authorization"] == "Bearer k"

    async def test_retries_then_unavailable(self):
        """Test retries are exhausted before giving up."""
        calls = []

        def handler(request: httpx.Request) -> httpx.Response:
            calls.append(request)
            return httpx.Response(503, text="overloaded")

        client = HttpJudgeClient(
            api_url="http://judge.test/v1/chat", api_key="k", model="m", timeout=5, retries=2,
            transport=httpx.MockTransport(handler),
        )
        with pytest.raises(JudgeUnavailable):
            await client.complete("prompt")
        assert len(calls) == 3

    async def test_recovers_after_failure(self):
        """Test a failed attempt is retried."""
        calls = []

        def handler(request: httpx.Request) -> httpx.Response:
            calls.append(request)
            if len(calls) == 1:
                return httpx.Response(500)
            return httpx.Response(200, json={"choices": [{"message": {"content": "ok"}}]})

        client = HttpJudgeClient(
            api_url="http://judge.test/v1/chat", api_key="k", model="m", timeout=5,
            transport=httpx.MockTransport(handler),
        )
        assert await client.complete("prompt") == "ok"

    async def test_malformed_reply(self):
        """Test a reply without choices is rejected."""
        client = HttpJudgeClient(
            api_url="http://judge.test/v1/chat", api_key="k", model="m", timeout=5, retries=0,
            transport=httpx.MockTransport(lambda r: httpx.Response(200, json={"choices": []})),
        )
        with pytest.raises(JudgeUnavailable):
            await client.complete("prompt")
