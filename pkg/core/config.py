"""
Run configuration.

A RunConfig bundles every component config. It is loaded from YAML, then
dotted overrides from the command line are applied ("reward.beta": 0.1) and
the result is validated as a whole. Any validation failure is ConfigInvalid.
"""

import copy
import logging
from pathlib import Path
from typing import Any

import yaml
from django.conf import settings
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from apps.evaluation.schemas import AesConfig
from apps.grpo.schemas import GrpoConfig
from apps.profiler.schemas import ProfilerConfig
from apps.rewards.schemas import RewardConfig
from apps.segmentation.schemas import SegmentationConfig
from apps.trainer.schemas import TrainConfig

from .exceptions import ConfigInvalid

logger = logging.getLogger(__name__)


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    output_dir: str = "runs/default"
    segmentation: SegmentationConfig = Field(default_factory=SegmentationConfig)
    reward: RewardConfig = Field(default_factory=RewardConfig)
    grpo: GrpoConfig = Field(default_factory=GrpoConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    aes: AesConfig = Field(default_factory=AesConfig)
    profiler: ProfilerConfig = Field(default_factory=ProfilerConfig)

    @model_validator(mode="after")
    def sync_seed(self) -> "RunConfig":
        # The run seed drives the trainer
        if self.train.seed != self.seed:
            self.train = self.train.model_copy(update={"seed": self.seed})
        return self

    def to_dict(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


def _set_dotted(data: dict[str, Any], dotted: str, value: Any) -> None:
    node = data
    *parents, leaf = dotted.split(".")
    for key in parents:
        child = node.setdefault(key, {})
        if not isinstance(child, dict):
            raise ConfigInvalid(f"cannot override {dotted}: {key} is not a section")
        node = child
    node[leaf] = value


def resolve_config_path(path: str | Path) -> Path:
    """Accept a path, or a bare name of a config shipped in RUN_CONFIG_DIR."""
    candidate = Path(path)
    if candidate.exists():
        return candidate
    shipped = Path(settings.RUN_CONFIG_DIR) / candidate
    for option in (shipped, shipped.with_suffix(".yaml")):
        if option.exists():
            return option
    raise ConfigInvalid(f"Run config not found: {path}")


def load_run_config(
    path: str | Path | None = None, overrides: dict[str, Any] | None = None
) -> RunConfig:
    data: dict[str, Any] = {}
    if path is not None:
        config_path = resolve_config_path(path)
        try:
            with open(config_path, encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigInvalid(f"{config_path}: invalid YAML: {e}") from e
        if not isinstance(data, dict):
            raise ConfigInvalid(f"{config_path}: top level must be a mapping")
        logger.debug(f"[Pipeline] Loaded run config {config_path}")

    data = copy.deepcopy(data)
    for dotted, value in (overrides or {}).items():
        if value is not None:
            _set_dotted(data, dotted, value)

    try:
        cfg = RunConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise ConfigInvalid(f"invalid run config: {problems}") from e

    cfg.train.validate_for_training()
    return cfg
