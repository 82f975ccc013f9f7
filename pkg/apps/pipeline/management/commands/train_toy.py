"""
Train the toy policy with the step-aware reward.

    python manage.py train_toy --config toy_default --output runs/seed0

The run directory gets records.jsonl (one TrainRecord per update),
run_config.json and policy.json (final parameters).
"""

import logging
from pathlib import Path
from typing import Any

from django.core.management.base import CommandParser

from apps.trainer.monitor import HackingMonitor
from apps.trainer.policy import ToyPolicy
from apps.trainer.problems import default_problem_bank
from apps.trainer.trainer import train
from utils.jsonl import AtomicWriter, write_json

from ._base import PipelineCommand, add_reward_arguments, reward_overrides

logger = logging.getLogger(__name__)


class Command(PipelineCommand):
    help = "Run the toy GRPO trainer and write its record stream to a run directory"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--output", help="Run directory (defaults to output_dir in the config)")
        parser.add_argument("--max-updates", type=int)
        parser.add_argument("--l-max", type=int, help="Step length limit in tokens")
        parser.add_argument("--lr", type=float, help="Learning rate")
        add_reward_arguments(parser)

    def overrides(self, options: dict[str, Any]) -> dict[str, Any]:
        return {
            **reward_overrides(options),
            "train.max_updates": options.get("max_updates"),
            "train.step_length_limit": options.get("l_max"),
            "train.learning_rate": options.get("lr"),
        }

    def run(self, options: dict[str, Any]) -> None:
        cfg = self.load_config(options)
        run_dir = Path(options.get("output") or cfg.output_dir)
        run_dir.mkdir(parents=True, exist_ok=True)
        write_json(run_dir / "run_config.json", cfg.to_dict())

        problems = default_problem_bank()
        policy = ToyPolicy.initial(problems, cfg.train)
        monitor = HackingMonitor()

        with AtomicWriter(run_dir / "records.jsonl") as writer:
            records = train(
                policy,
                problems,
                cfg.train,
                reward_cfg=cfg.reward,
                grpo_cfg=cfg.grpo,
                on_record=writer.write_record,
                monitor=monitor,
            )

        write_json(run_dir / "policy.json", policy.to_dict())

        last = records[-1] if records else None
        logger.info(f"[Trainer] Run finished: {len(records)} updates, monitor={monitor.summary()}")
        if last is None:
            self.stdout.write(f"No updates run; wrote {run_dir}")
            return
        self.stdout.write(
            f"{len(records)} updates, final mean_steps={last.mean_steps:.2f}, "
            f"accuracy={last.accuracy:.3f}, halted={last.halted} -> {run_dir}"
        )
