"""
Step segmentation of reasoning text.

Strategies:
- paragraph: runs of two or more newlines
- sentence: terminator (. ! ?) followed by whitespace, inside paragraphs
- conjunction: before every whole-word conjunction, inside paragraphs
- similarity_merge: paragraphs, then adjacent pairs merged by embedding cosine
"""

import logging
import re
from functools import lru_cache

from agents.embeddings import EmbeddingClient, cosine_similarity
from apps.rewards.answers import extract_answer
from core.exceptions import ConfigInvalid, EmbedderUnavailable

from .schemas import Response, SegmentationConfig, SegmentationStrategy, Step

logger = logging.getLogger(__name__)

THINK_OPEN = "<think>"
THINK_CLOSE = "</think>"
PARAGRAPH_SEPARATOR = "\n\n"

PARAGRAPH_BREAK = re.compile(r"\n{2,}")
SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s+")


def split_regions(raw_text: str) -> tuple[str, str]:
    """
    Split a response into (think_text, answer_text).

    Uses the first <think> and the first </think> after it. Without a
    well-formed pair both regions are the whole text.
    """
    start = raw_text.find(THINK_OPEN)
    if start == -1:
        return raw_text, raw_text
    end = raw_text.find(THINK_CLOSE, start + len(THINK_OPEN))
    if end == -1:
        return raw_text, raw_text
    return raw_text[start + len(THINK_OPEN) : end], raw_text[end + len(THINK_CLOSE) :]


def _paragraphs(text: str) -> list[str]:
    text = text.replace("\r\n", "\n")
    return [piece.strip() for piece in PARAGRAPH_BREAK.split(text) if piece.strip()]


def _sentences(paragraph: str) -> list[str]:
    return [piece.strip() for piece in SENTENCE_BREAK.split(paragraph) if piece.strip()]


@lru_cache(maxsize=32)
def _conjunction_pattern(conjunctions: tuple[str, ...]) -> re.Pattern[str]:
    # Longest first so "alternatively" wins over "alternative"
    words = sorted(conjunctions, key=len, reverse=True)
    alternation = "|".join(re.escape(w) for w in words)
    return re.compile(rf"(?<![\w-])(?:{alternation})(?![\w-])", re.IGNORECASE)


def _split_on_conjunctions(paragraph: str, pattern: re.Pattern[str]) -> list[str]:
    cuts = [m.start() for m in pattern.finditer(paragraph) if m.start() > 0]
    bounds = [0, *cuts, len(paragraph)]
    pieces = (paragraph[a:b].strip() for a, b in zip(bounds, bounds[1:]))
    return [p for p in pieces if p]


def _merge_similar(
    paragraphs: list[str], threshold: float, embedder: EmbeddingClient
) -> list[str]:
    if len(paragraphs) < 2:
        return paragraphs

    try:
        vectors = embedder.embed(paragraphs)
    except EmbedderUnavailable:
        raise
    except Exception as e:
        logger.error(f"[Segment] Embedder failed: {e}")
        raise EmbedderUnavailable(str(e)) from e

    if len(vectors) != len(paragraphs):
        raise EmbedderUnavailable(
            f"embedder returned {len(vectors)} vectors for {len(paragraphs)} paragraphs"
        )

    merged: list[list[str]] = [[paragraphs[0]]]
    for i in range(1, len(paragraphs)):
        if cosine_similarity(vectors[i - 1], vectors[i]) >= threshold:
            merged[-1].append(paragraphs[i])
        else:
            merged.append([paragraphs[i]])
    return [PARAGRAPH_SEPARATOR.join(group) for group in merged]


def segment(
    think_text: str,
    cfg: SegmentationConfig,
    embedder: EmbeddingClient | None = None,
) -> list[Step]:
    """Cut reasoning text into ordered steps. Blank text gives no steps."""
    paragraphs = _paragraphs(think_text)

    match cfg.strategy:
        case SegmentationStrategy.PARAGRAPH:
            pieces = paragraphs
        case SegmentationStrategy.SENTENCE:
            pieces = [s for p in paragraphs for s in _sentences(p)]
        case SegmentationStrategy.CONJUNCTION:
            pattern = _conjunction_pattern(cfg.conjunctions)
            pieces = [c for p in paragraphs for c in _split_on_conjunctions(p, pattern)]
        case SegmentationStrategy.SIMILARITY_MERGE:
            if embedder is None:
                raise ConfigInvalid("similarity_merge strategy needs an embedder")
            pieces = _merge_similar(paragraphs, cfg.similarity_threshold, embedder)

    return [
        Step(index=i, text=text, token_count=max(1, cfg.tokenizer(text)))
        for i, text in enumerate(pieces)
    ]


def count_steps(response: Response) -> int:
    return len(response.steps)


def build_response(
    prompt_id: str,
    raw_text: str,
    cfg: SegmentationConfig,
    embedder: EmbeddingClient | None = None,
    token_count: int | None = None,
) -> Response:
    """Split regions, segment the think block and extract the final answer."""
    think_text, answer_text = split_regions(raw_text)
    steps = segment(think_text, cfg, embedder)
    return Response(
        prompt_id=prompt_id,
        raw_text=raw_text,
        think_text=think_text,
        answer_text=answer_text,
        extracted_answer=extract_answer(answer_text),
        steps=steps,
        token_count=token_count if token_count is not None else cfg.tokenizer(raw_text),
    )
