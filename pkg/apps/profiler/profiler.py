"""
Reasoning profiler: label every sentence of the think block with a category
through a judge, then aggregate category shares.

Sentences come from the segmentation module's sentence strategy. Sentences
are sent in batches; a sentence the judge reply does not label is asked again
once on its own batch, then counted as NonSubstantive.
"""

import asyncio
import logging
import re
from collections import Counter
from collections.abc import Sequence

from agents.builder import get_prompt_builder
from agents.judge import HttpJudgeClient, JudgeClient, KeywordJudgeClient
from apps.segmentation.schemas import Response, SegmentationConfig, SegmentationStrategy
from apps.segmentation.segmenter import segment
from core.exceptions import EmptyInput

from .schemas import CATEGORY_LABELS, ProfileReport, ProfilerConfig, ReasoningCategory

logger = logging.getLogger(__name__)

SENTENCE_SEGMENTATION = SegmentationConfig(strategy=SegmentationStrategy.SENTENCE)
LABELS_BLOCK = re.compile(r"<labels>(.*?)</labels>", re.DOTALL | re.IGNORECASE)
LABEL_LINE = re.compile(r"^\s*(\d+)\s*[:.)-]\s*(.+?)\s*$")

_CATEGORY_LOOKUP = {
    re.sub(r"[^a-z]", "", name.lower()): category
    for category, label in CATEGORY_LABELS.items()
    for name in (category.value, label)
}


def _category(text: str) -> ReasoningCategory | None:
    return _CATEGORY_LOOKUP.get(re.sub(r"[^a-z]", "", text.lower()))


def judge_sentences(response: Response) -> list[str]:
    """Sentences of the think block, each collapsed onto a single line."""
    steps = segment(response.think_text, SENTENCE_SEGMENTATION)
    return [" ".join(step.text.split()) for step in steps]


def build_judge_prompt(response: Response) -> str:
    sentences = judge_sentences(response)
    if not sentences:
        raise EmptyInput(f"response for {response.prompt_id} has no reasoning to judge")
    return get_prompt_builder().build_prompt(sentences)


def parse_labels(reply: str, expected: int) -> dict[int, ReasoningCategory]:
    """1-based sentence number -> category, for the lines that parse."""
    match = LABELS_BLOCK.search(reply)
    if not match:
        return {}
    labels: dict[int, ReasoningCategory] = {}
    for line in match.group(1).splitlines():
        parsed = LABEL_LINE.match(line)
        if not parsed:
            continue
        number = int(parsed.group(1))
        category = _category(parsed.group(2))
        if category is not None and 1 <= number <= expected:
            labels.setdefault(number, category)
    return labels


def make_judge(cfg: ProfilerConfig) -> JudgeClient:
    if cfg.judge == "http":
        return HttpJudgeClient(retries=cfg.request_retries)
    return KeywordJudgeClient()


class _Tally:
    def __init__(self) -> None:
        self.counts: Counter[ReasoningCategory] = Counter()
        self.fallbacks = 0


async def _label_batch(
    sentences: list[str],
    judge: JudgeClient,
    semaphore: asyncio.Semaphore,
    tally: _Tally,
) -> None:
    builder = get_prompt_builder()
    async with semaphore:
        reply = await judge.complete(builder.build_prompt(sentences))
    labels = parse_labels(reply, len(sentences))

    missing = [i for i in range(1, len(sentences) + 1) if i not in labels]
    if missing:
        retry_sentences = [sentences[i - 1] for i in missing]
        async with semaphore:
            reply = await judge.complete(builder.build_prompt(retry_sentences))
        retried = parse_labels(reply, len(retry_sentences))
        for position, number in enumerate(missing, start=1):
            if position in retried:
                labels[number] = retried[position]

    for number in range(1, len(sentences) + 1):
        if number in labels:
            tally.counts[labels[number]] += 1
        else:
            tally.counts[ReasoningCategory.NON_SUBSTANTIVE] += 1
            tally.fallbacks += 1


async def aprofile(
    responses: Sequence[Response],
    judge: JudgeClient,
    cfg: ProfilerConfig | None = None,
) -> ProfileReport:
    cfg = cfg or ProfilerConfig()
    if not responses:
        raise EmptyInput("no responses to profile")

    batches: list[list[str]] = []
    for response in responses:
        sentences = judge_sentences(response)
        for start in range(0, len(sentences), cfg.batch_size):
            batches.append(sentences[start : start + cfg.batch_size])
    if not batches:
        raise EmptyInput("responses contain no reasoning sentences")

    tally = _Tally()
    semaphore = asyncio.Semaphore(cfg.max_in_flight)
    await asyncio.gather(*(_label_batch(b, judge, semaphore, tally) for b in batches))

    if tally.fallbacks:
        logger.warning(f"[Judge] {tally.fallbacks} sentences defaulted to NonSubstantive")
    logger.info(f"[Judge] Profiled {sum(tally.counts.values())} sentences in {len(batches)} batches")
    return ProfileReport.from_counts(tally.counts, fallback_count=tally.fallbacks)


def profile(
    responses: Sequence[Response],
    judge: JudgeClient,
    cfg: ProfilerConfig | None = None,
) -> ProfileReport:
    """Blocking wrapper around aprofile."""
    return asyncio.run(aprofile(responses, judge, cfg))
