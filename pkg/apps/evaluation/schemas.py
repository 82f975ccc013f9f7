"""
Evaluation schemas.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator


class EvalSummary(BaseModel):
    """Accuracy in percent and mean response length in tokens."""

    accuracy: float = Field(ge=0.0, le=100.0)
    mean_length: float = Field(ge=0.0)
    sample_count: int = Field(default=1, gt=0)


class AesConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    phi: float = 1.0  # length reduction weight
    eta: float = 3.0  # accuracy gain weight
    theta: float = 5.0  # accuracy loss weight

    @model_validator(mode="after")
    def check_asymmetry(self) -> "AesConfig":
        if not self.theta > self.eta > 0:
            raise ValueError("AES weights must satisfy theta > eta > 0")
        return self


class AesReport(BaseModel):
    delta_length: float
    delta_acc: float
    score: float

    @property
    def display_score(self) -> float:
        return round(self.score, 2)

    def format(self) -> str:
        return (
            f"AES {self.score:.2f} "
            f"(length {self.delta_length:+.2%}, accuracy {self.delta_acc:+.2%})"
        )
