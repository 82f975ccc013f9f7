"""
Conversions between pipeline records and domain objects.
"""

import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from agents.embeddings import EmbeddingClient, HashingEmbedder, HttpEmbeddingClient
from apps.grpo.core import normalize_advantages
from apps.rewards.answers import extract_answer
from apps.rewards.engine import score_group
from apps.rewards.schemas import CaseLabel, Group, RewardBreakdown, RewardConfig
from apps.segmentation.schemas import Response, SegmentationConfig, SegmentationStrategy, Step
from apps.segmentation.segmenter import build_response, split_regions
from core.exceptions import ConfigInvalid, DataError
from utils.jsonl import read_models

from .schemas import RolloutRecord, ScoredGroup, ScoredResponse, StepRecord

logger = logging.getLogger(__name__)

SKIPPED_BREAKDOWN = RewardBreakdown(
    r_acc=0, r_seg=0.0, r_token=0.0, total=0.0, case_label=CaseLabel.GROUP_SKIPPED
)


def make_embedder(name: str, cfg: SegmentationConfig) -> EmbeddingClient | None:
    if cfg.strategy != SegmentationStrategy.SIMILARITY_MERGE:
        return None
    if name == "http":
        return HttpEmbeddingClient()
    if name == "hashing":
        return HashingEmbedder()
    raise ConfigInvalid(f"unknown embedder: {name}")


def read_rollouts(path: str | Path) -> Iterable[tuple[int, RolloutRecord]]:
    return read_models(path, RolloutRecord)


def to_response(
    record: RolloutRecord,
    cfg: SegmentationConfig,
    embedder: EmbeddingClient | None = None,
) -> Response:
    """Build a Response, reusing steps already present on the record."""
    if record.steps is None:
        return build_response(
            record.prompt_id, record.response_text, cfg, embedder, token_count=record.token_count
        )

    think_text, answer_text = split_regions(record.response_text)
    return Response(
        prompt_id=record.prompt_id,
        raw_text=record.response_text,
        think_text=think_text,
        answer_text=answer_text,
        extracted_answer=extract_answer(answer_text),
        steps=[Step(index=s.index, text=s.text, token_count=s.token_count) for s in record.steps],
        token_count=(
            record.token_count if record.token_count is not None else cfg.tokenizer(record.response_text)
        ),
    )


def segmented_record(record: RolloutRecord, response: Response) -> dict[str, Any]:
    out = record.model_dump(
        include={"prompt_id", "prompt_text", "gold_answer", "response_text"}
    )
    out.update(
        token_count=response.token_count,
        think_text=response.think_text,
        answer_text=response.answer_text,
        extracted_answer=response.extracted_answer,
        steps=[
            StepRecord(index=s.index, text=s.text, token_count=s.token_count).model_dump()
            for s in response.steps
        ],
        step_count=response.step_count,
    )
    return out


def group_rollouts(
    rows: Iterable[tuple[int, RolloutRecord]],
) -> list[tuple[str, str, list[tuple[int, RolloutRecord]]]]:
    """(prompt_id, gold_answer, rows) in order of first appearance."""
    groups: dict[str, list[tuple[int, RolloutRecord]]] = {}
    gold: dict[str, str] = {}
    for line_number, record in rows:
        if record.prompt_id in gold and gold[record.prompt_id] != record.gold_answer:
            raise DataError(
                f"line {line_number}: gold answer for {record.prompt_id} differs "
                f"from an earlier line"
            )
        gold.setdefault(record.prompt_id, record.gold_answer)
        groups.setdefault(record.prompt_id, []).append((line_number, record))
    return [(pid, gold[pid], rows) for pid, rows in groups.items()]


def score_rollout_group(
    prompt_id: str,
    gold_answer: str,
    rows: list[tuple[int, RolloutRecord]],
    seg_cfg: SegmentationConfig,
    reward_cfg: RewardConfig,
    embedder: EmbeddingClient | None = None,
) -> ScoredGroup:
    """Rewards and advantages for one prompt; skipped groups carry no advantages."""
    responses = [to_response(record, seg_cfg, embedder) for _, record in rows]
    group = Group(prompt_id=prompt_id, gold_answer=gold_answer, responses=responses)
    score = score_group(group, reward_cfg)

    if score.skipped:
        breakdowns = [SKIPPED_BREAKDOWN] * len(responses)
        advantages: list[float | None] = [None] * len(responses)
    else:
        breakdowns = score.breakdowns
        advantages = list(normalize_advantages(score.rewards).tolist())

    return ScoredGroup(
        prompt_id=prompt_id,
        gold_answer=gold_answer,
        s_star=score.s_star,
        skipped=score.skipped,
        responses=[
            ScoredResponse(
                line=line_number,
                step_count=response.step_count,
                token_count=response.token_count,
                extracted_answer=response.extracted_answer,
                correct=bool(response.correct),
                reward=breakdown.to_dict(),
                advantage=advantage,
            )
            for (line_number, _), response, breakdown, advantage in zip(
                rows, responses, breakdowns, advantages
            )
        ],
    )
