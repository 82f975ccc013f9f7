"""
Final-answer extraction and normalization.
"""

import re
from collections.abc import Callable

BOXED_MARKER = "\\boxed{"
NUMBER_PATTERN = re.compile(r"-?\d+(?:\.\d+)?(?:/\d+)?")

AnswerChecker = Callable[[str | None, str], bool]


def _last_boxed(text: str) -> str | None:
    """Contents of the last \\boxed{...}, honouring nested braces."""
    start = text.rfind(BOXED_MARKER)
    while start != -1:
        depth = 1
        pos = start + len(BOXED_MARKER)
        while pos < len(text) and depth:
            if text[pos] == "{":
                depth += 1
            elif text[pos] == "}":
                depth -= 1
            pos += 1
        if depth == 0:
            return text[start + len(BOXED_MARKER) : pos - 1]
        # Unbalanced: try an earlier box
        start = text.rfind(BOXED_MARKER, 0, start)
    return None


def normalize_answer(text: str) -> str:
    """Strip whitespace, dollar signs and leading zeros of integers."""
    cleaned = re.sub(r"\s+", "", text).replace("$", "")
    cleaned = cleaned.rstrip(".")
    match = re.fullmatch(r"(-?)0*(\d+)", cleaned)
    if match:
        return f"{match.group(1)}{match.group(2)}"
    return cleaned


def extract_answer(answer_text: str) -> str | None:
    """Last boxed expression, else the last number; normalized. None if nothing found."""
    boxed = _last_boxed(answer_text)
    if boxed is not None and boxed.strip():
        return normalize_answer(boxed)

    numbers = NUMBER_PATTERN.findall(answer_text)
    if numbers:
        return normalize_answer(numbers[-1])
    return None


def exact_match(extracted: str | None, gold: str) -> bool:
    """Default checker: equality after normalization."""
    if extracted is None:
        return False
    return normalize_answer(extracted) == normalize_answer(gold)
