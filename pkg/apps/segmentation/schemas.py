"""
Segmentation schemas: configuration plus the Response/Step records every
other module consumes.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Conjunctions that open a new reasoning step
DEFAULT_CONJUNCTIONS: tuple[str, ...] = (
    "wait",
    "alternatively",
    "but",
    "however",
    "alternative",
    "check",
    "double-check",
    "hmm",
    "okay",
    "maybe",
)


def whitespace_token_count(text: str) -> int:
    """Default token counter: whitespace-delimited words."""
    return len(text.split())


class SegmentationStrategy(StrEnum):
    PARAGRAPH = "paragraph"
    SENTENCE = "sentence"
    CONJUNCTION = "conjunction"
    SIMILARITY_MERGE = "similarity_merge"


class SegmentationConfig(BaseModel):
    """How reasoning text is cut into steps."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    strategy: SegmentationStrategy = SegmentationStrategy.PARAGRAPH
    conjunctions: tuple[str, ...] = DEFAULT_CONJUNCTIONS
    similarity_threshold: float = Field(default=0.5, ge=0.0, le=1.0)
    tokenizer: Callable[[str], int] = Field(default=whitespace_token_count, exclude=True)

    @field_validator("conjunctions")
    @classmethod
    def normalize_conjunctions(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        words = tuple(w.strip().lower() for w in value if w.strip())
        return tuple(dict.fromkeys(words))

    @model_validator(mode="after")
    def require_conjunctions(self) -> "SegmentationConfig":
        if self.strategy == SegmentationStrategy.CONJUNCTION and not self.conjunctions:
            raise ValueError("conjunction strategy needs at least one conjunction")
        return self


@dataclass(frozen=True)
class Step:
    """One reasoning step."""
    index: int
    text: str
    token_count: int


@dataclass
class Response:
    """One candidate answer with its segmented reasoning."""
    prompt_id: str
    raw_text: str
    think_text: str
    answer_text: str
    extracted_answer: str | None = None
    steps: list[Step] = field(default_factory=list)
    token_count: int = 0
    correct: bool | None = None  # set once scored

    @property
    def step_count(self) -> int:
        return len(self.steps)

    @property
    def max_step_tokens(self) -> int:
        return max((s.token_count for s in self.steps), default=0)
