"""
Agents module - external model clients driven by YAML configs.

Structure:
- configs/: YAML files with judge configurations
- judge/: chat-completion judge clients (HTTP and offline keyword judge)
- embeddings/: embedding clients (HTTP and offline hashing embedder)
- builder.py: Judge prompt building logic
"""

from .builder import JudgePromptBuilder, get_prompt_builder

__all__ = [
    "JudgePromptBuilder",
    "get_prompt_builder",
]
