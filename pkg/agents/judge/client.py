"""
Judge clients for sentence-level reasoning labels.

The wire contract is text in, text out: the prompt built by
JudgePromptBuilder goes in, a reply containing a <labels> block comes back.
"""

import asyncio
import logging
import re
from dataclasses import dataclass
from typing import Any, Protocol

import httpx
from django.conf import settings

from agents.builder import SENTENCES_CLOSE, SENTENCES_OPEN
from core.exceptions import JudgeUnavailable

logger = logging.getLogger(__name__)


@dataclass
class JudgeResult:
    """Result from one judge call."""
    success: bool
    data: Any = None
    error: str | None = None


class JudgeClient(Protocol):
    async def complete(self, prompt: str) -> str: ...


class HttpJudgeClient:
    """
    Chat-completion judge over HTTP.

    Retries transport failures and non-200 replies `retries` times, then
    raises JudgeUnavailable.
    """

    def __init__(
        self,
        api_url: str | None = None,
        api_key: str | None = None,
        model: str | None = None,
        timeout: float | None = None,
        retries: int = 2,
        transport: httpx.AsyncBaseTransport | None = None,
    ):
        self.api_url = api_url or settings.JUDGE_API_URL
        self.api_key = api_key if api_key is not None else settings.JUDGE_API_KEY
        self.model = model or settings.JUDGE_MODEL
        self.timeout = timeout or settings.JUDGE_TIMEOUT
        self.retries = retries
        self._transport = transport

    async def _call(self, prompt: str) -> JudgeResult:
        request_body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        try:
            async with httpx.AsyncClient(transport=self._transport) as client:
                response = await client.post(
                    self.api_url,
                    headers={
                        "Authorization": f"Bearer {self.api_key}",
                        "Content-Type": "application/json",
                    },
                    json=request_body,
                    timeout=self.timeout,
                )
        except httpx.TimeoutException:
            return JudgeResult(success=False, error=f"timeout after {self.timeout}s")
        except httpx.HTTPError as e:
            return JudgeResult(success=False, error=f"transport error: {e}")

        if response.status_code != 200:
            return JudgeResult(
                success=False, error=f"HTTP {response.status_code}: {response.text[:200]}"
            )

        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as e:
            return JudgeResult(success=False, error=f"malformed reply: {e}")
        return JudgeResult(success=True, data=content)

    async def complete(self, prompt: str) -> str:
        last_error = None
        for attempt in range(self.retries + 1):
            result = await self._call(prompt)
            if result.success:
                return result.data
            last_error = result.error
            logger.warning(f"[Judge] Attempt {attempt + 1} failed: {result.error}")
        raise JudgeUnavailable(f"judge failed after {self.retries + 1} attempts: {last_error}")


class KeywordJudgeClient:
    """
    Offline judge labelling sentences by cue words.

    Deterministic and crude; it exists so profiles can be produced without a
    judge endpoint.
    """

    SENTENCE_LINE = re.compile(r"^(\d+)\.\s(.*)$")
    VERIFICATION = re.compile(r"\b(wait|check|double-check|verify|confirm|mistake|recheck)\b", re.I)
    ALTERNATIVES = re.compile(r"\b(alternatively|alternative|another|instead|maybe|or perhaps)\b", re.I)
    FILLER = re.compile(r"^(hmm|okay|ok|so|well|alright|let me think)\b[\s,.!]*", re.I)
    CALCULATION = re.compile(r"\d|[=+*/^×÷]")

    def label(self, sentence: str) -> str:
        if self.VERIFICATION.search(sentence):
            return "VerificationSelfCorrection"
        if self.ALTERNATIVES.search(sentence):
            return "ExploringAlternatives"
        if self.FILLER.match(sentence) and len(sentence.split()) <= 4:
            return "NonSubstantive"
        if self.CALCULATION.search(sentence):
            return "ProductiveElaborationCalculation"
        return "PivotalReasoning"

    async def complete(self, prompt: str) -> str:
        start = prompt.rfind(SENTENCES_OPEN)
        end = prompt.rfind(SENTENCES_CLOSE)
        block = prompt[start + len(SENTENCES_OPEN) : end] if 0 <= start < end else ""

        lines = ["<labels>"]
        for line in block.strip().splitlines():
            match = self.SENTENCE_LINE.match(line.strip())
            if match:
                lines.append(f"{match.group(1)}: {self.label(match.group(2))}")
        lines.append("</labels>")
        await asyncio.sleep(0)
        return "\n".join(lines)
