"""
Score grouped rollouts with the step-aware reward.

    python manage.py score segmented.jsonl --output scored.jsonl --beta 0.01
"""

import logging
from typing import Any

from django.core.management.base import CommandParser

from apps.pipeline.io import group_rollouts, make_embedder, read_rollouts, score_rollout_group
from utils.jsonl import AtomicWriter

from ._base import (
    PipelineCommand,
    add_reward_arguments,
    add_segmentation_arguments,
    reward_overrides,
    segmentation_overrides,
)

logger = logging.getLogger(__name__)


class Command(PipelineCommand):
    help = "Write per-group S*, skip flag, reward breakdowns and advantages"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("input", help="Rollout or segmented JSONL file")
        parser.add_argument("--output", required=True, help="Output JSONL file (one group per line)")
        add_segmentation_arguments(parser)
        add_reward_arguments(parser)

    def overrides(self, options: dict[str, Any]) -> dict[str, Any]:
        return {**segmentation_overrides(options), **reward_overrides(options)}

    def run(self, options: dict[str, Any]) -> None:
        cfg = self.load_config(options)
        embedder = make_embedder(options["embedder"], cfg.segmentation)
        groups = group_rollouts(read_rollouts(options["input"]))

        skipped = 0
        with AtomicWriter(options["output"]) as writer:
            for prompt_id, gold_answer, rows in groups:
                scored = score_rollout_group(
                    prompt_id, gold_answer, rows, cfg.segmentation, cfg.reward, embedder
                )
                skipped += scored.skipped
                writer.write_record(scored)

        self.write_provenance(options["output"], cfg, input=options["input"], groups=len(groups))
        logger.info(f"[Reward] {len(groups)} groups scored, {skipped} skipped")
        self.stdout.write(f"Scored {len(groups)} groups ({skipped} skipped)")
