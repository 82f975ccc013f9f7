"""
Step-aware reward engine.

R = R_acc + beta * R_seg (+ token_penalty_weight * R_token), where R_seg
penalizes steps beyond the shortest correct response in the group and an
incorrect response shorter than that earns nothing for its brevity.
"""

import logging

from apps.segmentation.schemas import Response
from core.exceptions import EmptyInput, GroupSkipped

from .answers import AnswerChecker, exact_match
from .schemas import (
    AblationFlag,
    CaseLabel,
    Group,
    GroupScore,
    RewardBreakdown,
    RewardConfig,
    SkipDecision,
)

logger = logging.getLogger(__name__)

DEFAULT_REWARD_CONFIG = RewardConfig()


def accuracy_reward(
    response: Response, gold_answer: str, checker: AnswerChecker = exact_match
) -> int:
    """1 iff the extracted answer matches the gold answer."""
    if response.extracted_answer is None:
        return 0
    return int(checker(response.extracted_answer, gold_answer))


def _reference_pool(group: Group, cfg: RewardConfig) -> list[Response]:
    """Responses S* and T* are taken over."""
    if cfg.has(AblationFlag.INCORRECT_RESPONSES_SET_SSTAR):
        return group.responses
    return [r for r in group.responses if r.correct]


def optimal_steps(group: Group, cfg: RewardConfig = DEFAULT_REWARD_CONFIG) -> int | None:
    """Fewest steps among correct responses, or among all under -COS."""
    pool = _reference_pool(group, cfg)
    if not pool:
        return None
    return min(r.step_count for r in pool)


def _resolve_s_star(group: Group, cfg: RewardConfig) -> int | None:
    if group.s_star is not None:
        return group.s_star
    s_star = optimal_steps(group, cfg)
    if s_star is None and cfg.has(AblationFlag.NO_SKIP_ALL_WRONG) and group.responses:
        # Nobody correct and no skip: fall back to the shortest response
        s_star = min(r.step_count for r in group.responses)
    return s_star


def _reference_tokens(group: Group, cfg: RewardConfig) -> int:
    pool = _reference_pool(group, cfg) or group.responses
    return min(r.token_count for r in pool)


def step_reward(
    response: Response,
    s_star: int,
    r_acc: int,
    unmask_wrong_brevity: bool = False,
) -> float:
    """
    Penalty for steps beyond S*.

    Correct or incorrect, excess steps cost -(S - S*). Shorter-than-S* earns 0,
    except for incorrect responses when brevity is unmasked (+(S* - S)).
    """
    excess = response.step_count - s_star
    if not r_acc and excess < 0 and unmask_wrong_brevity:
        return float(-excess)
    return float(-max(0, excess))


def _case_label(step_count: int, s_star: int, r_acc: int, unmasked: bool) -> CaseLabel:
    if r_acc:
        return CaseLabel.CORRECT_EXCESS if step_count > s_star else CaseLabel.CORRECT_OPTIMAL
    if step_count >= s_star:
        return CaseLabel.INCORRECT_EXCESS
    if unmasked:
        return CaseLabel.INCORRECT_BREVITY_UNMASKED
    return CaseLabel.INCORRECT_BREVITY_MASKED


def apply_skip_all_wrong(group: Group, cfg: RewardConfig = DEFAULT_REWARD_CONFIG) -> SkipDecision:
    if cfg.has(AblationFlag.NO_SKIP_ALL_WRONG):
        return SkipDecision.PROCEED
    if any(r.correct for r in group.responses):
        return SkipDecision.PROCEED
    return SkipDecision.SKIP


def total_reward(
    response: Response, group: Group, cfg: RewardConfig = DEFAULT_REWARD_CONFIG
) -> RewardBreakdown:
    """Combined reward for one response of an already correctness-scored group."""
    s_star = _resolve_s_star(group, cfg)
    if s_star is None:
        raise GroupSkipped(group.prompt_id)

    r_acc = int(bool(response.correct))
    unmasked = cfg.has(AblationFlag.UNMASK_WRONG_BREVITY)
    r_seg = step_reward(response, s_star, r_acc, unmask_wrong_brevity=unmasked)

    r_token = 0.0
    if cfg.token_penalty_weight > 0:
        r_token = float(-max(0, response.token_count - _reference_tokens(group, cfg)))

    acc_term = 0 if cfg.has(AblationFlag.DISABLE_CORRECT_REWARD) else r_acc
    total = acc_term + cfg.beta * r_seg + cfg.token_penalty_weight * r_token

    return RewardBreakdown(
        r_acc=r_acc,
        r_seg=r_seg,
        r_token=r_token,
        total=total,
        case_label=_case_label(response.step_count, s_star, r_acc, unmasked),
    )


def score_group(
    group: Group,
    cfg: RewardConfig = DEFAULT_REWARD_CONFIG,
    checker: AnswerChecker = exact_match,
) -> GroupScore:
    """Correctness, skip rule, S* and per-response rewards for one group."""
    if not group.responses:
        raise EmptyInput(f"group {group.prompt_id} has no responses")

    group.s_star = None
    for response in group.responses:
        response.correct = bool(accuracy_reward(response, group.gold_answer, checker))

    if apply_skip_all_wrong(group, cfg) == SkipDecision.SKIP:
        logger.debug(f"[Reward] Group {group.prompt_id} skipped: all wrong")
        return GroupScore(prompt_id=group.prompt_id, decision=SkipDecision.SKIP, s_star=None)

    group.s_star = _resolve_s_star(group, cfg)
    breakdowns = [total_reward(r, group, cfg) for r in group.responses]
    return GroupScore(
        prompt_id=group.prompt_id,
        decision=SkipDecision.PROCEED,
        s_star=group.s_star,
        breakdowns=breakdowns,
    )
