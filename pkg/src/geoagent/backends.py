"""Pluggable completion and embedding backends.

Two completion backends: a scripted queue for deterministic offline runs
and an HTTP client speaking the common chat-completions wire format.
Embeddings come from the same HTTP service or from a deterministic
feature-hashed bag-of-words embedder used throughout the test suite.

Temperature defaults to 0 everywhere; the retrieval and agent paths force
it to 0 regardless of caller configuration.
"""

from __future__ import annotations

import math
import os
import re
import time
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np
import requests

from .errors import ScriptExhaustedError, TransportError, ValidationError

SCRIPT_DELIMITER = "---"


def estimate_tokens(text: str) -> int:
    """Documented heuristic: ceil(characters / 4). Not a tokenizer."""
    return math.ceil(len(text) / 4)


@dataclass(frozen=True)
class CompletionRequest:
    messages: tuple[tuple[str, str], ...]  # (role, text)
    temperature: float = 0.0
    max_output_tokens: int | None = None

    def __post_init__(self):
        if self.temperature < 0:
            raise ValidationError("temperature must be >= 0")


class CompletionBackend(Protocol):
    def complete(self, request: CompletionRequest) -> str: ...


class EmbeddingBackend(Protocol):
    @property
    def id(self) -> str: ...
    @property
    def dimension(self) -> int: ...
    def embed_batch(self, texts: list[str]) -> np.ndarray: ...


class ScriptedBackend:
    """Replays canned responses in order; a pure queue, blind to content."""

    def __init__(self, responses: list[str]):
        self._responses = list(responses)
        self._cursor = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedBackend":
        """Fixture format: plain-text blocks separated by a line '---'."""
        blocks, current = [], []
        for line in Path(path).read_text().splitlines():
            if line.strip() == SCRIPT_DELIMITER:
                blocks.append("\n".join(current))
                current = []
            else:
                current.append(line)
        if current:
            blocks.append("\n".join(current))
        return cls([b.strip("\n") for b in blocks if b.strip()])

    @property
    def remaining(self) -> int:
        return len(self._responses) - self._cursor

    def complete(self, request: CompletionRequest) -> str:
        if self._cursor >= len(self._responses):
            raise ScriptExhaustedError(
                f"scripted backend exhausted after {len(self._responses)} responses"
            )
        text = self._responses[self._cursor]
        self._cursor += 1
        return text


class HashingEmbedder:
    """Deterministic feature-hashed bag-of-words embedder.

    Identical texts map to identical vectors, so an exact query scores a
    cosine of 1.0 against its indexed chunk. crc32 keeps the hash stable
    across processes (Python's builtin hash is salted).
    """

    def __init__(self, dimension: int = 256):
        self._dimension = dimension

    @property
    def id(self) -> str:
        return f"hashed-bow-{self._dimension}"

    @property
    def dimension(self) -> int:
        return self._dimension

    def embed(self, text: str) -> np.ndarray:
        tokens = re.findall(r"\w+", text.lower())
        if not tokens:
            raise ValidationError("cannot embed empty or token-free text")
        vec = np.zeros(self._dimension)
        for token in tokens:
            h = zlib.crc32(token.encode("utf-8"))
            sign = 1.0 if (h >> 17) & 1 else -1.0
            vec[h % self._dimension] += sign
        return vec

    def embed_batch(self, texts: list[str]) -> np.ndarray:
        if not texts:
            raise ValidationError("embed_batch needs at least one text")
        return np.stack([self.embed(t) for t in texts])


@dataclass(frozen=True)
class BackendConfig:
    """HTTP backend settings; the credential itself is never stored, only
    the name of the environment variable holding it."""

    endpoint: str
    model: str
    embedding_model: str = "text-embedding-ada-002"
    api_key_env: str = "OPENAI_API_KEY"
    timeout: float = 30.0
    max_retries: int = 2


class HttpBackend:
    """Client for chat-completions and embeddings endpoints."""

    def __init__(self, config: BackendConfig):
        self.config = config

    def _api_key(self) -> str:
        key = os.environ.get(self.config.api_key_env, "")
        if not key:
            raise TransportError(
                f"credential environment variable {self.config.api_key_env} is unset"
            )
        return key

    def _post(self, path: str, payload: dict) -> dict:
        url = self.config.endpoint.rstrip("/") + path
        headers = {"Authorization": f"Bearer {self._api_key()}"}
        last_error: Exception | None = None
        for attempt in range(self.config.max_retries + 1):
            try:
                response = requests.post(
                    url, json=payload, headers=headers, timeout=self.config.timeout
                )
            except requests.RequestException as exc:
                last_error = exc
                if attempt < self.config.max_retries:
                    time.sleep(min(2**attempt * 0.1, 2.0))
                continue
            if response.status_code == 200:
                return response.json()
            retryable = response.status_code in (429, 500, 502, 503, 504)
            error = TransportError(
                f"{url} returned {response.status_code}: {response.text[:200]}",
                retryable=retryable,
                status=response.status_code,
            )
            if retryable and attempt < self.config.max_retries:
                last_error = error
                time.sleep(min(2**attempt * 0.1, 2.0))
                continue
            raise error
        raise TransportError(f"transport failure after retries: {last_error}", retryable=True)

    def complete(self, request: CompletionRequest) -> str:
        payload = {
            "model": self.config.model,
            "messages": [{"role": r, "content": t} for r, t in request.messages],
            "temperature": request.temperature,
        }
        if request.max_output_tokens is not None:
            payload["max_tokens"] = request.max_output_tokens
        data = self._post("/chat/completions", payload)
        return data["choices"][0]["message"]["content"]

    def embed_batch(self, texts: list[str]) -> np.ndarray:
        if not texts:
            raise ValidationError("embed_batch needs at least one text")
        data = self._post(
            "/embeddings", {"model": self.config.embedding_model, "input": texts}
        )
        rows = sorted(data["data"], key=lambda d: d["index"])
        return np.array([row["embedding"] for row in rows], dtype=np.float64)
