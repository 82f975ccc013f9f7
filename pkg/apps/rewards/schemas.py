"""
Reward schemas.
"""

from dataclasses import dataclass, field
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field

from apps.segmentation.schemas import Response


class AblationFlag(StrEnum):
    DISABLE_CORRECT_REWARD = "disable_correct_reward"  # -CR
    INCORRECT_RESPONSES_SET_SSTAR = "incorrect_responses_set_Sstar"  # -COS
    UNMASK_WRONG_BREVITY = "unmask_wrong_brevity"  # -WRM
    NO_SKIP_ALL_WRONG = "no_skip_all_wrong"  # -SAW


class CaseLabel(StrEnum):
    CORRECT_EXCESS = "correct_excess"
    CORRECT_OPTIMAL = "correct_optimal"
    INCORRECT_EXCESS = "incorrect_excess"
    INCORRECT_BREVITY_MASKED = "incorrect_brevity_masked"
    INCORRECT_BREVITY_UNMASKED = "incorrect_brevity_unmasked"
    GROUP_SKIPPED = "group_skipped"


class SkipDecision(StrEnum):
    PROCEED = "proceed"
    SKIP = "skip"


class RewardConfig(BaseModel):
    """Reward weights and ablation switches."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    beta: float = Field(default=0.01, ge=0.0)
    token_penalty_weight: float = Field(default=0.0, ge=0.0)
    ablation_flags: frozenset[AblationFlag] = frozenset()

    @property
    def segment_penalty_weight(self) -> float:
        return self.beta

    def has(self, flag: AblationFlag) -> bool:
        return flag in self.ablation_flags


@dataclass
class Group:
    """The n sampled responses for one prompt."""
    prompt_id: str
    gold_answer: str
    responses: list[Response]
    s_star: int | None = None


@dataclass(frozen=True)
class RewardBreakdown:
    r_acc: int
    r_seg: float
    r_token: float
    total: float
    case_label: CaseLabel

    def to_dict(self) -> dict:
        return {
            "r_acc": self.r_acc,
            "r_seg": self.r_seg,
            "r_token": self.r_token,
            "total": self.total,
            "case_label": self.case_label.value,
        }


@dataclass
class GroupScore:
    """Result of scoring one group: breakdowns are empty when skipped."""
    prompt_id: str
    decision: SkipDecision
    s_star: int | None
    breakdowns: list[RewardBreakdown] = field(default_factory=list)

    @property
    def skipped(self) -> bool:
        return self.decision == SkipDecision.SKIP

    @property
    def rewards(self) -> list[float]:
        return [b.total for b in self.breakdowns]
