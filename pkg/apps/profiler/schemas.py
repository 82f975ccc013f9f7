"""
Reasoning profile schemas.
"""

from collections.abc import Mapping
from enum import StrEnum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class ReasoningCategory(StrEnum):
    PIVOTAL_REASONING = "PivotalReasoning"
    PRODUCTIVE_ELABORATION_CALCULATION = "ProductiveElaborationCalculation"
    EXPLORING_ALTERNATIVES = "ExploringAlternatives"
    VERIFICATION_SELF_CORRECTION = "VerificationSelfCorrection"
    NON_SUBSTANTIVE = "NonSubstantive"


CATEGORY_LABELS: dict[ReasoningCategory, str] = {
    ReasoningCategory.PIVOTAL_REASONING: "Pivotal Reasoning",
    ReasoningCategory.PRODUCTIVE_ELABORATION_CALCULATION: "Productive Elaboration & Calculation",
    ReasoningCategory.EXPLORING_ALTERNATIVES: "Exploring Alternatives",
    ReasoningCategory.VERIFICATION_SELF_CORRECTION: "Verification & Self-Correction",
    ReasoningCategory.NON_SUBSTANTIVE: "Non-Substantive Statements",
}


class ProfilerConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    batch_size: int = Field(default=20, ge=1)
    max_in_flight: int = Field(default=4, ge=1)
    request_retries: int = Field(default=2, ge=0)
    judge: Literal["http", "keyword"] = "keyword"


class ProfileReport(BaseModel):
    fractions: dict[ReasoningCategory, float]
    sentence_count: int = Field(gt=0)
    fallback_count: int = 0

    @classmethod
    def from_counts(
        cls, counts: Mapping[ReasoningCategory, int], fallback_count: int = 0
    ) -> "ProfileReport":
        total = sum(counts.values())
        return cls(
            fractions={c: counts.get(c, 0) / total for c in ReasoningCategory},
            sentence_count=total,
            fallback_count=fallback_count,
        )

    def format_table(self) -> str:
        width = max(len(label) for label in CATEGORY_LABELS.values())
        lines = [f"{'Category':<{width}}  Share"]
        for category in ReasoningCategory:
            lines.append(f"{CATEGORY_LABELS[category]:<{width}}  {self.fractions[category]:6.2%}")
        lines.append(f"{'Sentences':<{width}}  {self.sentence_count}")
        if self.fallback_count:
            lines.append(f"{'Fallback labels':<{width}}  {self.fallback_count}")
        return "\n".join(lines)
