"""
Record formats read and written by the pipeline commands.
"""

from pydantic import BaseModel, ConfigDict, Field


class StepRecord(BaseModel):
    index: int = Field(ge=0)
    text: str
    token_count: int = Field(ge=1)


class RolloutRecord(BaseModel):
    """
    One sampled response. Output of `segment` is a RolloutRecord with the
    segmentation fields filled in, so it can be fed straight to `score`.
    """

    model_config = ConfigDict(extra="ignore")

    prompt_id: str = Field(min_length=1)
    prompt_text: str = ""
    gold_answer: str = ""
    response_text: str
    token_count: int | None = Field(default=None, ge=0)

    think_text: str | None = None
    answer_text: str | None = None
    extracted_answer: str | None = None
    steps: list[StepRecord] | None = None
    step_count: int | None = None


class ScoredResponse(BaseModel):
    line: int
    step_count: int
    token_count: int
    extracted_answer: str | None
    correct: bool
    reward: dict
    advantage: float | None


class ScoredGroup(BaseModel):
    prompt_id: str
    gold_answer: str
    s_star: int | None
    skipped: bool
    responses: list[ScoredResponse]
