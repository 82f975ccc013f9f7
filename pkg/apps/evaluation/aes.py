"""
Accuracy-Efficiency Score.

delta_length = (L_base - L_model) / L_base
delta_acc    = (A_model - A_base) / A_base
score        = phi * delta_length + eta * delta_acc        if delta_acc >= 0
             = phi * delta_length - theta * |delta_acc|    otherwise
"""

import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from apps.segmentation.schemas import Response
from core.exceptions import BaselineDegenerate, DataError, EmptyInput
from utils.jsonl import read_jsonl

from .schemas import AesConfig, AesReport, EvalSummary

logger = logging.getLogger(__name__)


def aes(model: EvalSummary, baseline: EvalSummary, cfg: AesConfig | None = None) -> AesReport:
    cfg = cfg or AesConfig()
    if baseline.mean_length <= 0:
        raise BaselineDegenerate("baseline mean length is zero")
    if baseline.accuracy <= 0:
        raise BaselineDegenerate("baseline accuracy is zero")

    delta_length = (baseline.mean_length - model.mean_length) / baseline.mean_length
    delta_acc = (model.accuracy - baseline.accuracy) / baseline.accuracy

    if delta_acc >= 0:
        score = cfg.phi * delta_length + cfg.eta * delta_acc
    else:
        score = cfg.phi * delta_length - cfg.theta * abs(delta_acc)

    logger.debug(f"[AES] dlen={delta_length:.4f} dacc={delta_acc:.4f} score={score:.4f}")
    return AesReport(delta_length=delta_length, delta_acc=delta_acc, score=score)


def _summary(correct: Sequence[bool], lengths: Sequence[int]) -> EvalSummary:
    if not correct:
        raise EmptyInput("no responses to summarize")
    return EvalSummary(
        accuracy=100.0 * sum(correct) / len(correct),
        mean_length=float(np.mean(lengths)),
        sample_count=len(correct),
    )


def summarize(responses: Sequence[Response]) -> EvalSummary:
    """Percent correct and mean token count of scored responses."""
    return _summary([bool(r.correct) for r in responses], [r.token_count for r in responses])


def summarize_scored_file(path: str | Path) -> EvalSummary:
    """Summary of a `score` command output file (one group per line)."""
    correct: list[bool] = []
    lengths: list[int] = []
    for line_number, group in read_jsonl(path):
        try:
            for response in group["responses"]:
                correct.append(bool(response["correct"]))
                lengths.append(int(response["token_count"]))
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"line {line_number}: not a scored group ({e})") from e
    return _summary(correct, lengths)


def load_summary(path: str | Path) -> EvalSummary:
    """Read an EvalSummary JSON file, or derive one from scored JSONL output."""
    path = Path(path)
    if path.suffix == ".jsonl":
        return summarize_scored_file(path)
    try:
        return EvalSummary.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e
    except ValueError as e:
        raise DataError(f"{path} is not an evaluation summary: {e}") from e
