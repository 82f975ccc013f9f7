"""
Five-category reasoning profile of a rollout file.

    python manage.py profile rollouts.jsonl --judge keyword --output profile.json
"""

import logging
from typing import Any

from django.core.management.base import CommandParser

from apps.pipeline.io import read_rollouts
from apps.profiler.profiler import make_judge, profile
from apps.segmentation.schemas import SegmentationConfig
from apps.segmentation.segmenter import build_response
from utils.jsonl import write_json

from ._base import PipelineCommand

logger = logging.getLogger(__name__)


class Command(PipelineCommand):
    help = "Label reasoning sentences with a judge and report category shares"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("input", help="Rollout JSONL file")
        parser.add_argument("--output", help="Report JSON file")
        parser.add_argument("--judge", choices=["http", "keyword"])
        parser.add_argument("--batch-size", type=int)
        parser.add_argument("--max-in-flight", type=int)

    def overrides(self, options: dict[str, Any]) -> dict[str, Any]:
        return {
            "profiler.judge": options.get("judge"),
            "profiler.batch_size": options.get("batch_size"),
            "profiler.max_in_flight": options.get("max_in_flight"),
        }

    def run(self, options: dict[str, Any]) -> None:
        cfg = self.load_config(options)
        responses = [
            build_response(record.prompt_id, record.response_text, SegmentationConfig())
            for _, record in read_rollouts(options["input"])
        ]
        report = profile(responses, make_judge(cfg.profiler), cfg.profiler)

        if options.get("output"):
            write_json(options["output"], report)
            self.write_provenance(options["output"], cfg, input=options["input"])
        self.stdout.write(report.format_table())
