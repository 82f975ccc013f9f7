"""
Accuracy-Efficiency Score of a model against a baseline.

    python manage.py aes model.json baseline.json --output aes.json

Inputs are EvalSummary JSON files or `score` outputs (.jsonl).
"""

import logging
from typing import Any

from django.core.management.base import CommandParser

from apps.evaluation.aes import aes, load_summary
from utils.jsonl import write_json

from ._base import PipelineCommand

logger = logging.getLogger(__name__)


class Command(PipelineCommand):
    help = "Compute the Accuracy-Efficiency Score against a baseline"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("model", help="Model summary (.json) or scored output (.jsonl)")
        parser.add_argument("baseline", help="Baseline summary (.json) or scored output (.jsonl)")
        parser.add_argument("--output", help="Report JSON file")
        parser.add_argument("--phi", type=float)
        parser.add_argument("--eta", type=float)
        parser.add_argument("--theta", type=float)

    def overrides(self, options: dict[str, Any]) -> dict[str, Any]:
        return {f"aes.{k}": options.get(k) for k in ("phi", "eta", "theta")}

    def run(self, options: dict[str, Any]) -> None:
        cfg = self.load_config(options)
        model = load_summary(options["model"])
        baseline = load_summary(options["baseline"])
        report = aes(model, baseline, cfg.aes)

        if options.get("output"):
            write_json(
                options["output"],
                {**report.model_dump(), "display_score": report.display_score},
            )
            self.write_provenance(
                options["output"],
                cfg,
                model=model.model_dump(),
                baseline=baseline.model_dump(),
            )
        logger.info(f"[AES] {report.format()}")
        self.stdout.write(report.format())
