"""
Segment rollouts into reasoning steps.

    python manage.py segment rollouts.jsonl --output segmented.jsonl
"""

import logging
from typing import Any

from django.core.management.base import CommandParser

from apps.pipeline.io import make_embedder, read_rollouts, segmented_record, to_response
from utils.jsonl import AtomicWriter

from ._base import PipelineCommand, add_segmentation_arguments, segmentation_overrides

logger = logging.getLogger(__name__)


class Command(PipelineCommand):
    help = "Annotate each rollout line with its reasoning steps and step count"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("input", help="Rollout JSONL file")
        parser.add_argument("--output", required=True, help="Output JSONL file")
        add_segmentation_arguments(parser)

    def overrides(self, options: dict[str, Any]) -> dict[str, Any]:
        return segmentation_overrides(options)

    def run(self, options: dict[str, Any]) -> None:
        cfg = self.load_config(options)
        embedder = make_embedder(options["embedder"], cfg.segmentation)

        count = 0
        with AtomicWriter(options["output"]) as writer:
            for _, record in read_rollouts(options["input"]):
                response = to_response(
                    record.model_copy(update={"steps": None}), cfg.segmentation, embedder
                )
                writer.write_record(segmented_record(record, response))
                count += 1

        self.write_provenance(options["output"], cfg, input=options["input"], records=count)
        logger.info(f"[Segment] {count} records -> {options['output']}")
        self.stdout.write(f"Segmented {count} records")
