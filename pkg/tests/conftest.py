"""
Pytest configuration and fixtures.
"""

import json
import re
from pathlib import Path

import numpy as np
import pytest

from apps.rewards.schemas import Group
from apps.segmentation.schemas import Response, SegmentationConfig
from apps.segmentation.segmenter import build_response


def make_raw(step_count: int, answer: str, words: int = 3) -> str:
    """Response with `step_count` paragraphs in its think block and a boxed answer."""
    paragraphs = [" ".join([f"p{i}"] + ["x"] * (words - 1)) for i in range(step_count)]
    return "<think>" + "\n\n".join(paragraphs) + f"</think> The answer is \\boxed{{{answer}}}."


def make_response(step_count: int, answer: str, prompt_id: str = "q1", words: int = 3) -> Response:
    return build_response(prompt_id, make_raw(step_count, answer, words), SegmentationConfig())


def make_group(layout: list[tuple[int, bool]], gold: str = "321", prompt_id: str = "q1") -> Group:
    """Group from (step_count, correct) pairs."""
    responses = [
        make_response(steps, gold if correct else "999", prompt_id) for steps, correct in layout
    ]
    return Group(prompt_id=prompt_id, gold_answer=gold, responses=responses)


class TableEmbedder:
    """Embedder returning fixed vectors per exact text; unknown texts get a fresh axis."""

    def __init__(self, table: dict[str, list[float]], dim: int = 8):
        self.table = table
        self.dim = dim
        self.calls: list[list[str]] = []

    def embed(self, texts):
        self.calls.append(list(texts))
        rows = []
        for i, text in enumerate(texts):
            if text in self.table:
                rows.append(self.table[text])
            else:
                vector = [0.0] * self.dim
                vector[(len(self.table) + i) % self.dim] = 1.0
                rows.append(vector)
        return np.array(rows, dtype=float)


class FailingEmbedder:
    def embed(self, texts):
        raise RuntimeError("connection refused")


class ScriptedJudge:
    """Judge labelling every numbered sentence with categories from a callback."""

    SENTENCE_LINE = re.compile(r"^(\d+)\.\s(.*)$")

    def __init__(self, choose, fail_numbers: set[int] | None = None):
        self.choose = choose
        self.fail_numbers = fail_numbers or set()
        self.prompts: list[str] = []

    def _sentences(self, prompt: str) -> list[tuple[int, str]]:
        block = prompt[prompt.rfind("<sentences>") + len("<sentences>") : prompt.rfind("</sentences>")]
        out = []
        for line in block.strip().splitlines():
            match = self.SENTENCE_LINE.match(line)
            if match:
                out.append((int(match.group(1)), match.group(2)))
        return out

    async def complete(self, prompt: str) -> str:
        self.prompts.append(prompt)
        first_call = len(self.prompts) == 1
        lines = ["<labels>"]
        for number, sentence in self._sentences(prompt):
            if first_call and number in self.fail_numbers:
                lines.append(f"{number}: ???")
                continue
            lines.append(f"{number}: {self.choose(sentence)}")
        lines.append("</labels>")
        return "\n".join(lines)


class GarbageJudge:
    """Judge that never produces a parseable labels block."""

    def __init__(self):
        self.calls = 0

    async def complete(self, prompt: str) -> str:
        self.calls += 1
        return "I cannot help with that."


def write_jsonl(path: Path, rows: list[dict]) -> Path:
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


def read_jsonl(path: Path) -> list[dict]:
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


@pytest.fixture
def paragraph_cfg():
    return SegmentationConfig()


@pytest.fixture
def workdir(tmp_path):
    return tmp_path
