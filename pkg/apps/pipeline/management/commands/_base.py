"""
Shared plumbing for pipeline commands: config loading, flag overrides,
provenance sidecars, and mapping PipelineError onto exit codes.
"""

import logging
import sys
from pathlib import Path
from typing import Any

from django.core.management.base import BaseCommand, CommandError, CommandParser

from apps.rewards.schemas import AblationFlag
from core.config import RunConfig, load_run_config
from core.exceptions import EXIT_USAGE, ConfigInvalid, PipelineError
from utils.jsonl import write_json

logger = logging.getLogger(__name__)

ABLATION_ALIASES = {
    "cr": AblationFlag.DISABLE_CORRECT_REWARD,
    "cos": AblationFlag.INCORRECT_RESPONSES_SET_SSTAR,
    "wrm": AblationFlag.UNMASK_WRONG_BREVITY,
    "saw": AblationFlag.NO_SKIP_ALL_WRONG,
}


def parse_ablation(value: str) -> AblationFlag:
    key = value.strip().lstrip("-").lower()
    if key in ABLATION_ALIASES:
        return ABLATION_ALIASES[key]
    for flag in AblationFlag:
        if flag.value.lower() == key:
            return flag
    raise ConfigInvalid(f"unknown ablation: {value}")


def sidecar_path(output: str | Path) -> Path:
    output = Path(output)
    return output.with_name(output.name + ".run.json")


class PipelineCommand(BaseCommand):
    """Base class: subclasses implement add_command_arguments, overrides and run."""

    def create_parser(self, prog_name: str, subcommand: str, **kwargs: Any) -> CommandParser:
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        def usage_error(message: str) -> None:
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                sys.stderr.write(f"{parser.prog}: error: {message}\n")
                sys.exit(EXIT_USAGE)
            raise CommandError(f"Error: {message}", returncode=EXIT_USAGE)

        parser.error = usage_error  # type: ignore[method-assign]
        return parser

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--config", help="Run config YAML (path or name under configs/)")
        parser.add_argument("--seed", type=int, help="Run seed")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser: CommandParser) -> None:
        pass

    def overrides(self, options: dict[str, Any]) -> dict[str, Any]:
        return {}

    def load_config(self, options: dict[str, Any]) -> RunConfig:
        overrides = {"seed": options.get("seed"), **self.overrides(options)}
        return load_run_config(options.get("config"), overrides)

    def write_provenance(self, output: str | Path, cfg: RunConfig, **extra: Any) -> None:
        write_json(sidecar_path(output), {"command": self.command_name, **extra, "config": cfg.to_dict()})

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]

    def handle(self, *args: Any, **options: Any) -> None:
        try:
            self.run(options)
        except PipelineError as e:
            logger.error(f"[Pipeline] {self.command_name} failed: {e}")
            raise CommandError(str(e), returncode=e.exit_code) from e

    def run(self, options: dict[str, Any]) -> None:
        raise NotImplementedError


def add_segmentation_arguments(parser: CommandParser) -> None:
    parser.add_argument(
        "--strategy", choices=["paragraph", "sentence", "conjunction", "similarity_merge"]
    )
    parser.add_argument("--threshold", type=float, help="Similarity-merge threshold")
    parser.add_argument("--embedder", choices=["hashing", "http"], default="hashing")


def segmentation_overrides(options: dict[str, Any]) -> dict[str, Any]:
    return {
        "segmentation.strategy": options.get("strategy"),
        "segmentation.similarity_threshold": options.get("threshold"),
    }


def add_reward_arguments(parser: CommandParser) -> None:
    parser.add_argument("--beta", type=float, help="Step penalty weight")
    parser.add_argument("--token-penalty", type=float, help="Token penalty weight")
    parser.add_argument(
        "--ablation",
        action="append",
        default=None,
        help="Ablation switch (CR, COS, WRM, SAW or full name); repeatable",
    )


def reward_overrides(options: dict[str, Any]) -> dict[str, Any]:
    ablations = options.get("ablation")
    return {
        "reward.beta": options.get("beta"),
        "reward.token_penalty_weight": options.get("token_penalty"),
        "reward.ablation_flags": (
            sorted(parse_ablation(a).value for a in ablations) if ablations else None
        ),
    }
