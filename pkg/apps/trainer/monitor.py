"""
Step-merging monitor.

Watches the record stream for the two phases of step-count reward hacking:
step count falls while the longest step stays put, then the longest step
grows as logical steps get folded into fewer paragraphs.
"""

import logging
from collections import deque
from enum import StrEnum

import numpy as np

from .schemas import SkipReason, TrainRecord

logger = logging.getLogger(__name__)


class MonitorPhase(StrEnum):
    WARMUP = "warmup"
    STEADY = "steady"
    STEP_REDUCTION = "step_reduction"
    STEP_MERGING = "step_merging"


class HackingMonitor:
    """
    Rolling-window detector over mean_steps and max_step_tokens.

    The first `window` records fix the baseline. Afterwards a rolling
    mean_steps below (1 - step_drop) * baseline marks step reduction, and a
    rolling max_step_tokens above growth * baseline while steps are below
    baseline marks the onset of step merging.
    """

    def __init__(self, window: int = 10, step_drop: float = 0.1, growth: float = 1.3):
        if window < 1:
            raise ValueError("window must be positive")
        self.window = window
        self.step_drop = step_drop
        self.growth = growth

        self._steps: deque[float] = deque(maxlen=window)
        self._max_step: deque[int] = deque(maxlen=window)
        self.baseline_steps: float | None = None
        self.baseline_max_step: float | None = None
        self.merge_onset: int | None = None
        self.first_stop: int | None = None
        self.phases: list[MonitorPhase] = []

    def observe(self, record: TrainRecord) -> MonitorPhase:
        self._steps.append(record.mean_steps)
        self._max_step.append(record.max_step_tokens)

        if record.skipped_reason == SkipReason.STEP_LENGTH_EXCEEDED and self.first_stop is None:
            self.first_stop = record.update_index

        phase = self._classify(record.update_index)
        self.phases.append(phase)
        return phase

    def _classify(self, update_index: int) -> MonitorPhase:
        if self.baseline_steps is None:
            if len(self._steps) < self.window:
                return MonitorPhase.WARMUP
            self.baseline_steps = float(np.mean(self._steps))
            self.baseline_max_step = float(np.mean(self._max_step))
            return MonitorPhase.STEADY

        if self.merge_onset is not None:
            return MonitorPhase.STEP_MERGING

        rolling_steps = float(np.mean(self._steps))
        rolling_max = float(np.mean(self._max_step))
        assert self.baseline_max_step is not None

        if rolling_steps < self.baseline_steps and rolling_max > self.growth * self.baseline_max_step:
            self.merge_onset = update_index
            logger.warning(
                f"[Trainer] Step merging detected at update {update_index}: "
                f"max step {rolling_max:.0f} vs baseline {self.baseline_max_step:.0f}, "
                f"steps {rolling_steps:.2f} vs baseline {self.baseline_steps:.2f}"
            )
            return MonitorPhase.STEP_MERGING

        if rolling_steps < (1.0 - self.step_drop) * self.baseline_steps:
            return MonitorPhase.STEP_REDUCTION
        return MonitorPhase.STEADY

    def summary(self) -> dict:
        return {
            "baseline_steps": self.baseline_steps,
            "baseline_max_step_tokens": self.baseline_max_step,
            "merge_onset": self.merge_onset,
            "first_stop": self.first_stop,
            "reduction_updates": sum(1 for p in self.phases if p == MonitorPhase.STEP_REDUCTION),
        }
