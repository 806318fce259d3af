"""Context-specific semantic search: chunk, embed, rank, assemble, answer.

The index is a brute-force linear scan over unit-normalized vectors;
ranking is by dot product (= cosine) descending, ties broken by ascending
chunk id. Defaults follow the workflow this engine reproduces: top five
hits and a 32k-token context budget.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .backends import CompletionBackend, CompletionRequest, estimate_tokens
from .errors import IndexCorruptionError, ValidationError
from .kernels import cosine_scores, normalize_rows

logger = logging.getLogger(__name__)

DEFAULT_TOP_K = 5
DEFAULT_TOKEN_BUDGET = 32000
TRUNCATION_MARKER = "...[truncated to fit token budget]"

ANSWER_TEMPLATE = (
    "Answer the question using only the context below. "
    "If the context does not contain the answer, say so.\n\n"
    "Context:\n{context}\n\n"
    "Question: {question}\n"
    "Answer:"
)


@dataclass(frozen=True)
class KnowledgeChunk:
    id: str
    source: str
    text: str
    token_estimate: int

    def __post_init__(self):
        if not self.text:
            raise ValidationError("chunk text must be non-empty")
        if self.token_estimate <= 0:
            raise ValidationError("token estimate must be > 0")


@dataclass(frozen=True)
class SearchHit:
    chunk_id: str
    score: float


@dataclass(frozen=True)
class GroundedAnswer:
    status: str  # ok | no_context
    text: str
    chunk_ids: tuple[str, ...]


def chunk_document(
    text: str, max_tokens: int, overlap: int = 0, source: str = "doc"
) -> list[KnowledgeChunk]:
    """Split by the token heuristic (4 chars/token) with fixed overlap.

    Dropping the first ``overlap`` tokens of every chunk after the first
    and concatenating reproduces the input exactly.
    """
    if not max_tokens > overlap >= 0:
        raise ValidationError("require max_tokens > overlap >= 0")
    if not text:
        return []
    max_chars = max_tokens * 4
    step = (max_tokens - overlap) * 4
    chunks = []
    start = 0
    while True:
        piece = text[start : start + max_chars]
        chunks.append(
            KnowledgeChunk(
                id=f"{source}:{len(chunks):04d}",
                source=source,
                text=piece,
                token_estimate=estimate_tokens(piece),
            )
        )
        if start + max_chars >= len(text):
            return chunks
        start += step


class VectorIndex:
    """Brute-force cosine index with disk persistence."""

    MANIFEST = "manifest.json"
    VECTORS = "vectors.npy"

    def __init__(self, embedder):
        self.embedder = embedder
        self.chunks: list[KnowledgeChunk] = []
        self._by_id: dict[str, KnowledgeChunk] = {}
        self._matrix: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.chunks)

    @property
    def dimension(self) -> int | None:
        return None if self._matrix is None else self._matrix.shape[1]

    def build(self, chunks: list[KnowledgeChunk]) -> "VectorIndex":
        if not chunks:
            raise ValidationError("cannot build an index from zero chunks")
        raw = self.embedder.embed_batch([c.text for c in chunks])
        self._set(chunks, normalize_rows(raw))
        return self

    def _set(self, chunks, matrix):
        self.chunks = list(chunks)
        self._by_id = {c.id: c for c in self.chunks}
        self._matrix = np.ascontiguousarray(matrix, dtype=np.float64)

    def chunk(self, chunk_id: str) -> KnowledgeChunk:
        return self._by_id[chunk_id]

    def embed_query(self, query: str) -> np.ndarray:
        raw = self.embedder.embed_batch([query])[0]
        return normalize_rows(raw)

    def search(self, query: str, k: int = DEFAULT_TOP_K) -> list[SearchHit]:
        """Top-k chunks by cosine, descending; ties by ascending chunk id."""
        if self._matrix is None or not self.chunks:
            logger.warning("search on an empty index returns no hits")
            return []
        scores = cosine_scores(self._matrix, self.embed_query(query))
        ranked = sorted(
            (SearchHit(c.id, float(s)) for c, s in zip(self.chunks, scores)),
            key=lambda h: (-h.score, h.chunk_id),
        )
        return ranked[:k]

    def assemble_context(
        self, hits: list[SearchHit], token_budget: int = DEFAULT_TOKEN_BUDGET
    ) -> str:
        """Concatenate hit texts in rank order without exceeding the budget.

        The top hit is always represented: if it alone does not fit it is
        truncated and marked.
        """
        if token_budget <= 0:
            raise ValidationError("token budget must be > 0")
        pieces, used = [], 0
        for rank, hit in enumerate(hits):
            chunk = self.chunk(hit.chunk_id)
            if used + chunk.token_estimate > token_budget:
                if rank == 0:
                    pieces.append(chunk.text[: token_budget * 4] + TRUNCATION_MARKER)
                break
            pieces.append(chunk.text)
            used += chunk.token_estimate
        return "\n\n".join(pieces)

    def answer(
        self,
        query: str,
        backend: CompletionBackend,
        k: int = DEFAULT_TOP_K,
        token_budget: int = DEFAULT_TOKEN_BUDGET,
    ) -> GroundedAnswer:
        """Grounded question answering over the index; temperature fixed at 0."""
        hits = self.search(query, k)
        if not hits:
            return GroundedAnswer(
                status="no_context",
                text="no context available: the index is empty",
                chunk_ids=(),
            )
        prompt = ANSWER_TEMPLATE.format(
            context=self.assemble_context(hits, token_budget), question=query
        )
        text = backend.complete(
            CompletionRequest(messages=(("user", prompt),), temperature=0.0)
        )
        return GroundedAnswer(
            status="ok", text=text, chunk_ids=tuple(h.chunk_id for h in hits)
        )

    # --- persistence: manifest + flat vector file ---------------------------

    def save(self, directory: str | Path):
        if self._matrix is None:
            raise ValidationError("nothing to save: index not built")
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        manifest = {
            "dimension": int(self._matrix.shape[1]),
            "embedder_id": getattr(self.embedder, "id", "unknown"),
            "chunks": [
                {
                    "id": c.id,
                    "source": c.source,
                    "text": c.text,
                    "token_estimate": c.token_estimate,
                }
                for c in self.chunks
            ],
        }
        (directory / self.MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n")
        np.save(directory / self.VECTORS, self._matrix)

    @classmethod
    def load(cls, directory: str | Path, embedder) -> "VectorIndex":
        directory = Path(directory)
        manifest = json.loads((directory / cls.MANIFEST).read_text())
        matrix = np.load(directory / cls.VECTORS)
        if matrix.ndim != 2 or matrix.shape[1] != manifest["dimension"]:
            raise IndexCorruptionError(
                f"vector file shape {matrix.shape} does not match manifest "
                f"dimension {manifest['dimension']}"
            )
        chunks = [KnowledgeChunk(**c) for c in manifest["chunks"]]
        if matrix.shape[0] != len(chunks):
            raise IndexCorruptionError(
                f"{matrix.shape[0]} vectors for {len(chunks)} chunks"
            )
        index = cls(embedder)
        index._set(chunks, matrix)
        return index
