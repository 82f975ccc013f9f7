"""
Embedding clients used by the similarity-merge segmentation strategy.

Two implementations share one call shape, ``embed(texts) -> ndarray``:
- HttpEmbeddingClient: OpenAI-compatible ``/embeddings`` endpoint
- HashingEmbedder: deterministic bag-of-words hashing, no network
"""

import hashlib
import logging
import re
from collections.abc import Sequence
from typing import Protocol

import httpx
import numpy as np
from django.conf import settings

from core.exceptions import EmbedderUnavailable

logger = logging.getLogger(__name__)

WORD_PATTERN = re.compile(r"[\w-]+")


class EmbeddingClient(Protocol):
    def embed(self, texts: Sequence[str]) -> np.ndarray: ...


def cosine_similarity(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; 0.0 when either vector is zero."""
    va = np.asarray(a, dtype=float)
    vb = np.asarray(b, dtype=float)
    denom = np.linalg.norm(va) * np.linalg.norm(vb)
    if denom == 0:
        return 0.0
    return float(np.dot(va, vb) / denom)


class HashingEmbedder:
    """Feature-hashing embedder: one blake2b bucket per lowercase word."""

    def __init__(self, dim: int = 256):
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim

    def _bucket(self, word: str) -> int:
        digest = hashlib.blake2b(word.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big") % self.dim

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        vectors = np.zeros((len(texts), self.dim), dtype=float)
        for row, text in enumerate(texts):
            for word in WORD_PATTERN.findall(text.lower()):
                vectors[row, self._bucket(word)] += 1.0
        norms = np.linalg.norm(vectors, axis=1, keepdims=True)
        np.divide(vectors, norms, out=vectors, where=norms > 0)
        return vectors


class HttpEmbeddingClient:
    """
    Client for an OpenAI-compatible embeddings endpoint.

    Endpoint, key, model and timeout default to the EMBEDDING_* settings.
    Any transport failure or malformed payload raises EmbedderUnavailable.
    """

    def __init__(
        self,
        api_url: str | None = None,
        api_key: str | None = None,
        model: str | None = None,
        timeout: float | None = None,
        transport: httpx.BaseTransport | None = None,
    ):
        self.api_url = api_url or settings.EMBEDDING_API_URL
        self.api_key = api_key if api_key is not None else settings.EMBEDDING_API_KEY
        self.model = model or settings.EMBEDDING_MODEL
        self.timeout = timeout or settings.EMBEDDING_TIMEOUT
        self._transport = transport

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        if not texts:
            return np.zeros((0, 0), dtype=float)

        payload = {"model": self.model, "input": list(texts)}
        try:
            with httpx.Client(timeout=self.timeout, transport=self._transport) as client:
                response = client.post(self.api_url, json=payload, headers=self._headers())
        except httpx.TimeoutException as e:
            logger.error(f"[Embedder] Timeout after {self.timeout}s")
            raise EmbedderUnavailable(f"embedding request timed out: {e}") from e
        except httpx.HTTPError as e:
            logger.error(f"[Embedder] Transport error: {e}")
            raise EmbedderUnavailable(f"embedding request failed: {e}") from e

        if response.status_code != 200:
            logger.error(f"[Embedder] HTTP {response.status_code}: {response.text[:200]}")
            raise EmbedderUnavailable(f"embedding endpoint returned {response.status_code}")

        try:
            items = sorted(response.json()["data"], key=lambda item: item.get("index", 0))
            vectors = np.array([item["embedding"] for item in items], dtype=float)
        except (ValueError, KeyError, TypeError) as e:
            raise EmbedderUnavailable(f"malformed embedding payload: {e}") from e

        if vectors.ndim != 2 or vectors.shape[0] != len(texts):
            raise EmbedderUnavailable(
                f"expected {len(texts)} vectors, got shape {vectors.shape}"
            )

        logger.debug(f"[Embedder] {len(texts)} texts -> dim {vectors.shape[1]}")
        return vectors
