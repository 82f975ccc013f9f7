"""
Toy GRPO trainer.

Each update samples a group of responses per prompt, scores them with the
step-aware reward, drops all-wrong groups, suppresses the whole update when
any sampled step is longer than the step-length limit, and otherwise takes a
gradient step on the GRPO loss. Training halts after a run of consecutive
stopping-criterion skips.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from apps.grpo.core import grpo_loss, loss_gradient, mean_kl, normalize_advantages
from apps.grpo.schemas import GrpoBatch, GrpoConfig
from apps.rewards.answers import extract_answer
from apps.rewards.engine import score_group
from apps.rewards.schemas import Group, GroupScore, RewardConfig
from apps.segmentation.schemas import Response, SegmentationConfig, Step
from apps.segmentation.segmenter import split_regions
from core.exceptions import ConfigInvalid

from .monitor import HackingMonitor
from .policy import ToyPolicy, ToyTrace, render_trace, trace_paragraphs
from .schemas import ProblemSpec, SkipReason, StopDecision, TrainConfig, TrainRecord

logger = logging.getLogger(__name__)

TOY_SEGMENTATION = SegmentationConfig()


def trace_response(prompt_id: str, trace: ToyTrace, buckets: tuple[int, ...]) -> Response:
    """
    Response for a rendered trace, with steps taken from the known paragraph
    layout. Equal to build_response on the same text under paragraph segmentation.
    """
    raw_text = render_trace(trace, buckets)
    think_text, answer_text = split_regions(raw_text)
    steps = [
        Step(index=i, text=text, token_count=words)
        for i, (text, words) in enumerate(trace_paragraphs(trace, buckets))
    ]
    return Response(
        prompt_id=prompt_id,
        raw_text=raw_text,
        think_text=think_text,
        answer_text=answer_text,
        extracted_answer=extract_answer(answer_text),
        steps=steps,
        token_count=TOY_SEGMENTATION.tokenizer(raw_text),
    )


@dataclass
class ToyGroup(Group):
    """A sampled group plus the decisions and log-likelihoods behind each response."""
    problem: ProblemSpec | None = None
    traces: list[ToyTrace] = field(default_factory=list)
    old_logps: list[np.ndarray] = field(default_factory=list)
    reference_logps: list[np.ndarray] = field(default_factory=list)


def sample_group(
    policy: ToyPolicy,
    problem: ProblemSpec,
    cfg: TrainConfig,
    rng_seed: int | np.random.Generator = 0,
    reference: ToyPolicy | None = None,
    draws: np.ndarray | None = None,
) -> ToyGroup:
    """Sample n responses for one problem; identical seed or draws give identical groups."""
    if draws is None:
        rng = np.random.default_rng(rng_seed)
        draws = rng.random((cfg.group_size, cfg.draws_per_response))
    reference = reference or policy

    group = ToyGroup(prompt_id=problem.prompt_id, gold_answer=problem.gold_answer, responses=[])
    group.problem = problem
    for row in draws:
        trace = policy.sample(problem, row)
        response = trace_response(problem.prompt_id, trace, policy.buckets)
        if response.token_count > cfg.max_tokens:
            # Truncated before the answer
            response.extracted_answer = None
        group.responses.append(response)
        group.traces.append(trace)
        group.old_logps.append(policy.trace_log_probs(trace))
        group.reference_logps.append(reference.trace_log_probs(trace))
    return group


def check_stopping(group: Group, cfg: TrainConfig) -> StopDecision:
    """Skip when any step of any response is strictly longer than the limit."""
    for response in group.responses:
        if response.max_step_tokens > cfg.step_length_limit:
            return StopDecision.SKIP_UPDATE
    return StopDecision.PROCEED


def _apply_update(
    policy: ToyPolicy,
    included: list[tuple[ToyGroup, GroupScore]],
    cfg: TrainConfig,
    grpo_cfg: GrpoConfig,
) -> tuple[float, float]:
    """Run inner GRPO steps in place; returns loss and mean KL of the first step."""
    advantages = [normalize_advantages(score.rewards).values for _, score in included]
    first_loss = first_kl = 0.0

    for inner in range(cfg.inner_steps):
        grad = np.zeros_like(policy.theta)
        losses, kls = [], []
        for (group, _), adv in zip(included, advantages):
            current = [policy.trace_log_probs(t) for t in group.traces]
            batch = GrpoBatch.from_arrays(current, group.old_logps, group.reference_logps, adv)
            losses.append(grpo_loss(batch, grpo_cfg))
            kls.append(mean_kl(batch))
            for trace, dlogp in zip(group.traces, loss_gradient(batch, grpo_cfg)):
                policy.accumulate_gradient(trace, dlogp / len(included), grad)

        if inner == 0:
            first_loss, first_kl = float(np.mean(losses)), float(np.mean(kls))
        policy.theta -= cfg.learning_rate * grad

    return first_loss, first_kl


def _make_record(
    update_index: int,
    groups: list[ToyGroup],
    scores: list[GroupScore],
    reason: SkipReason | None,
    halted: bool,
    loss: float | None,
    kl: float,
) -> TrainRecord:
    responses = [r for g in groups for r in g.responses]
    traces = [t for g in groups for t in g.traces]
    rewards = [total for s in scores for total in s.rewards]
    merge_slots = sum(len(t.merges) for t in traces)

    return TrainRecord(
        update_index=update_index,
        mean_steps=float(np.mean([r.step_count for r in responses])),
        mean_tokens=float(np.mean([r.token_count for r in responses])),
        max_step_tokens=max(r.max_step_tokens for r in responses),
        mean_reward=float(np.mean(rewards)) if rewards else 0.0,
        accuracy=float(np.mean([bool(r.correct) for r in responses])),
        skipped_reason=reason,
        halted=halted,
        skipped_groups=sum(1 for s in scores if s.skipped),
        mean_logical_steps=float(np.mean([t.logical_steps for t in traces])),
        merge_rate=sum(t.merge_count for t in traces) / merge_slots if merge_slots else 0.0,
        loss=loss,
        mean_kl=kl,
    )


def train(
    policy: ToyPolicy,
    problems: Sequence[ProblemSpec],
    cfg: TrainConfig,
    reward_cfg: RewardConfig | None = None,
    grpo_cfg: GrpoConfig | None = None,
    on_record: Callable[[TrainRecord], None] | None = None,
    monitor: HackingMonitor | None = None,
) -> list[TrainRecord]:
    """Train the policy in place and return one record per update."""
    cfg.validate_for_training()
    if not problems:
        raise ConfigInvalid("problem bank is empty")
    reward_cfg = reward_cfg or RewardConfig()
    grpo_cfg = grpo_cfg or GrpoConfig()

    rng = np.random.default_rng(cfg.seed)
    reference = policy.copy()
    batch_size = min(cfg.batch_prompts, len(problems))
    records: list[TrainRecord] = []
    consecutive_stops = 0

    logger.info(
        f"[Trainer] Starting: {cfg.max_updates} updates, {batch_size} prompts x "
        f"{cfg.group_size} responses, beta={reward_cfg.beta}, seed={cfg.seed}"
    )

    for update_index in range(cfg.max_updates):
        chosen = rng.permutation(len(problems))[:batch_size]
        draws = rng.random((batch_size, cfg.group_size, cfg.draws_per_response))
        groups = [
            sample_group(policy, problems[p], cfg, reference=reference, draws=draws[k])
            for k, p in enumerate(chosen)
        ]
        scores = [score_group(g, reward_cfg) for g in groups]
        included = [(g, s) for g, s in zip(groups, scores) if not s.skipped]

        reason: SkipReason | None = None
        if not included:
            reason = SkipReason.ALL_WRONG
        elif any(check_stopping(g, cfg) == StopDecision.SKIP_UPDATE for g, _ in included):
            reason = SkipReason.STEP_LENGTH_EXCEEDED

        loss: float | None = None
        kl = 0.0
        if reason is None:
            loss, kl = _apply_update(policy, included, cfg, grpo_cfg)

        consecutive_stops = consecutive_stops + 1 if reason == SkipReason.STEP_LENGTH_EXCEEDED else 0
        halted = consecutive_stops >= cfg.consecutive_skip_halt

        record = _make_record(update_index, groups, scores, reason, halted, loss, kl)
        records.append(record)
        if on_record:
            on_record(record)
        if monitor:
            monitor.observe(record)

        if logger.isEnabledFor(logging.DEBUG):
            skipped = f" skipped={reason.value}" if reason else ""
            logger.debug(
                f"[Trainer] update {update_index}: steps={record.mean_steps:.2f} "
                f"max_step={record.max_step_tokens} acc={record.accuracy:.3f} "
                f"reward={record.mean_reward:.3f} merge={record.merge_rate:.3f}{skipped}"
            )
        if halted:
            logger.warning(
                f"[Trainer] Halted after {consecutive_stops} consecutive step-length skips"
            )
            break

    stops = sum(1 for r in records if r.skipped_reason == SkipReason.STEP_LENGTH_EXCEEDED)
    logger.info(f"[Trainer] Finished: {len(records)} updates, {stops} step-length skips")
    return records
