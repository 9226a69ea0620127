"""Sentence similarity providers.

The built-in provider is a deterministic token-multiset cosine so the whole
toolkit runs offline; an HTTP provider can be pointed at a real sentence
embedding service via environment variables.
"""

from __future__ import annotations

import math
import os
import re
from collections import Counter

import httpx

from ..errors import TransportError

ENV_URL = "SCENEBENCH_EMBED_URL"
ENV_TIMEOUT = "SCENEBENCH_EMBED_TIMEOUT"
ENV_RETRIES = "SCENEBENCH_EMBED_RETRIES"

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class TokenCosineProvider:
    """Cosine similarity of lowercased, punctuation-stripped token multisets."""

    name = "token-cosine"

    def embed(self, text: str) -> dict[str, float]:
        counts = Counter(tokenize(text))
        norm = math.sqrt(sum(c * c for c in counts.values()))
        if norm == 0:
            return {}
        return {tok: c / norm for tok, c in counts.items()}

    def similarity(self, a: str, b: str) -> float:
        va, vb = self.embed(a), self.embed(b)
        if not va and not vb:
            return 1.0  # two empty texts are identical
        if not va or not vb:
            return 0.0
        return sum(w * vb.get(tok, 0.0) for tok, w in va.items())


class HttpEmbeddingProvider:
    """Client for an external embedding endpoint: {texts} -> {vectors}.

    Timeout and retry budget come from env vars; vectors are cached per text
    so repeated scoring stays deterministic and cheap.
    """

    name = "http-embedding"

    def __init__(self, url: str, timeout: float = 10.0, retries: int = 2):
        self.url = url
        self.timeout = timeout
        self.retries = retries
        self._cache: dict[str, list[float]] = {}

    @classmethod
    def from_env(cls) -> "HttpEmbeddingProvider | None":
        url = os.environ.get(ENV_URL)
        if not url:
            return None
        return cls(
            url,
            timeout=float(os.environ.get(ENV_TIMEOUT, "10")),
            retries=int(os.environ.get(ENV_RETRIES, "2")),
        )

    def embed(self, text: str) -> list[float]:
        if text not in self._cache:
            self._fetch([text])
        return self._cache[text]

    def _fetch(self, texts: list[str]) -> None:
        last_exc: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                resp = httpx.post(self.url, json={"texts": texts}, timeout=self.timeout)
                resp.raise_for_status()
                vectors = resp.json()["vectors"]
                for t, v in zip(texts, vectors):
                    self._cache[t] = [float(x) for x in v]
                return
            except (httpx.HTTPError, KeyError, ValueError) as exc:
                last_exc = exc
        raise TransportError(f"embedding endpoint {self.url} unreachable: {last_exc}")

    def similarity(self, a: str, b: str) -> float:
        va, vb = self.embed(a), self.embed(b)
        na = math.sqrt(sum(x * x for x in va))
        nb = math.sqrt(sum(x * x for x in vb))
        if na == 0 or nb == 0:
            return 0.0
        return sum(x * y for x, y in zip(va, vb)) / (na * nb)


def default_provider():
    """External provider when configured, deterministic fallback otherwise."""
    return HttpEmbeddingProvider.from_env() or TokenCosineProvider()
