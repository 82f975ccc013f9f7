"""
Toy trainer schemas.
"""

from dataclasses import dataclass
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.exceptions import ConfigInvalid


class SkipReason(StrEnum):
    ALL_WRONG = "all_wrong"
    STEP_LENGTH_EXCEEDED = "step_length_exceeded"


class StopDecision(StrEnum):
    PROCEED = "proceed"
    SKIP_UPDATE = "skip_update"


@dataclass(frozen=True)
class ProblemSpec:
    """
    A synthetic problem solved with probability solve_rate once a trace has
    required_steps logical steps.

    Shorter traces get partial credit, solve_rate * steps / required_steps,
    unless partial_credit is off, in which case they are always wrong.
    """
    prompt_id: str
    gold_answer: str
    required_steps: int
    solve_rate: float
    partial_credit: bool = True

    def correct_probability(self, logical_steps: int) -> float:
        if logical_steps >= self.required_steps:
            return self.solve_rate
        if not self.partial_credit:
            return 0.0
        return self.solve_rate * logical_steps / self.required_steps


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    group_size: int = Field(default=4, ge=1)
    batch_prompts: int = Field(default=8, ge=1)
    temperature: float = Field(default=0.9, gt=0.0)
    max_tokens: int = Field(default=8000, gt=0)
    step_length_limit: int = Field(default=200, gt=0)
    learning_rate: float = Field(default=2.0, gt=0.0)
    max_updates: int = Field(default=600, ge=0)
    consecutive_skip_halt: int = Field(default=50, ge=1)
    seed: int = 0

    inner_steps: int = Field(default=1, ge=1)
    verbosity_buckets: tuple[int, ...] = (20, 35, 50, 65)
    max_logical_steps: int = Field(default=12, ge=1)
    initial_merge_logit: float = -5.0
    overthinking_slope: float = 0.35

    @field_validator("verbosity_buckets")
    @classmethod
    def check_buckets(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value:
            raise ValueError("verbosity_buckets must not be empty")
        if any(v < 2 for v in value):
            raise ValueError("every verbosity bucket needs at least 2 words")
        return value

    @property
    def draws_per_response(self) -> int:
        """Uniforms consumed per response: step, verbosity, correctness, wrong answer, merges."""
        return 4 + self.max_logical_steps - 1

    def validate_for_training(self) -> None:
        if self.group_size < 2:
            raise ConfigInvalid("group_size must be at least 2 for nonzero advantage variance")


class TrainRecord(BaseModel):
    """Telemetry for one update."""

    update_index: int
    mean_steps: float
    mean_tokens: float
    max_step_tokens: int = Field(ge=0)
    mean_reward: float
    accuracy: float
    skipped_reason: SkipReason | None = None
    halted: bool = False

    skipped_groups: int = 0
    mean_logical_steps: float = 0.0
    merge_rate: float = 0.0
    loss: float | None = None
    mean_kl: float = 0.0
