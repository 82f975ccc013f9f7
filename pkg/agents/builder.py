"""
Judge Prompt Builder - assembles sentence-labelling prompts from YAML config.

Flow:
1. Load judge config from agents/configs/<name>.yaml
2. Build the instruction block (role, categories, rules, output format)
3. Append the numbered sentences to label
"""

import threading
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from core.exceptions import ConfigInvalid

SENTENCES_OPEN = "<sentences>"
SENTENCES_CLOSE = "</sentences>"


@dataclass(frozen=True)
class CategorySpec:
    name: str
    label: str
    definition: str


@dataclass
class JudgeConfig:
    """Judge configuration loaded from YAML."""
    name: str
    description: str
    version: int
    role: str
    rules: str
    output_format: str
    categories: list[CategorySpec] = field(default_factory=list)


class JudgePromptBuilder:
    """
    Builds prompts for the reasoning judge.

    Combines:
    - Instructions (from YAML config)
    - Numbered sentences (from the trace being profiled)
    """

    def __init__(self, agent_name: str = "reasoning_judge"):
        self.agent_name = agent_name
        self.config = self._load_config(agent_name)

    def _load_config(self, agent_name: str) -> JudgeConfig:
        config_path = Path(__file__).parent / "configs" / f"{agent_name}.yaml"
        if not config_path.exists():
            raise ConfigInvalid(f"Judge config not found: {config_path}")

        with open(config_path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}

        categories = [
            CategorySpec(name=c["name"], label=c.get("label", c["name"]), definition=c["definition"])
            for c in data.get("categories", [])
        ]
        if not categories:
            raise ConfigInvalid(f"Judge config {agent_name} defines no categories")

        return JudgeConfig(
            name=data.get("name", agent_name),
            description=data.get("description", ""),
            version=data.get("version", 1),
            role=data.get("role", ""),
            rules=data.get("rules", ""),
            output_format=data.get("output_format", ""),
            categories=categories,
        )

    def build_instructions(self) -> str:
        parts = []

        if self.config.role:
            parts.append(self.config.role.strip())

        lines = ["CATEGORIES:"]
        for category in self.config.categories:
            lines.append(f"- {category.name} ({category.label}): {category.definition}")
        parts.append("\n".join(lines))

        if self.config.rules:
            parts.append(self.config.rules.strip())

        if self.config.output_format:
            parts.append(self.config.output_format.strip())

        return "\n\n".join(parts)

    def build_prompt(self, sentences: list[str]) -> str:
        """Instructions followed by the sentences numbered from 1, one per line."""
        numbered = "\n".join(
            f"{i}. {' '.join(s.split())}" for i, s in enumerate(sentences, start=1)
        )
        block = f"{SENTENCES_OPEN}\n{numbered}\n{SENTENCES_CLOSE}"
        return f"{self.build_instructions()}\n\n{block}"


_builders: dict[str, JudgePromptBuilder] = {}
_builders_lock = threading.Lock()


def get_prompt_builder(agent_name: str = "reasoning_judge") -> JudgePromptBuilder:
    """Get or create a cached prompt builder."""
    with _builders_lock:
        if agent_name not in _builders:
            _builders[agent_name] = JudgePromptBuilder(agent_name)
        return _builders[agent_name]
