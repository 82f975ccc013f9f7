"""
GRPO schemas.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class GrpoConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    clip_epsilon: float = Field(default=0.2, gt=0.0, lt=1.0)
    kl_gamma: float = Field(default=0.001, ge=0.0)


@dataclass(frozen=True)
class AdvantageVector:
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def tolist(self) -> list[float]:
        return [float(v) for v in self.values]


@dataclass
class GrpoSample:
    """Per-token log-likelihoods of one response under the three policies."""
    logp_current: np.ndarray
    logp_old: np.ndarray
    logp_reference: np.ndarray
    advantage: float

    @property
    def token_count(self) -> int:
        return len(self.logp_current)


@dataclass
class GrpoBatch:
    samples: list[GrpoSample] = field(default_factory=list)

    @classmethod
    def from_arrays(
        cls,
        logp_current: Sequence[Sequence[float]],
        logp_old: Sequence[Sequence[float]],
        logp_reference: Sequence[Sequence[float]],
        advantages: Sequence[float],
    ) -> "GrpoBatch":
        """Build a batch from ragged per-response token arrays."""
        if not (len(logp_current) == len(logp_old) == len(logp_reference) == len(advantages)):
            raise ValueError("per-response arrays must have equal length")
        samples = [
            GrpoSample(
                logp_current=np.asarray(cur, dtype=float),
                logp_old=np.asarray(old, dtype=float),
                logp_reference=np.asarray(ref, dtype=float),
                advantage=float(adv),
            )
            for cur, old, ref, adv in zip(logp_current, logp_old, logp_reference, advantages)
        ]
        return cls(samples=samples)

    def __len__(self) -> int:
        return len(self.samples)
