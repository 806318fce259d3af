"""Hot numeric kernels for the similarity scan.

Scores are defined as a sequential left-to-right sum of products so the
numba kernel, the pure-numpy fallback, and any independent re-computation
produce bit-identical float64 results. The fallback is selected by
setting ``GEOAGENT_PURE_NUMPY=1`` (or automatically when numba is
unavailable). ``benchmarks/bench_search.py`` compares both paths.
"""

from __future__ import annotations

import os

import numpy as np


def cosine_scores_numpy(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Dot product of every row with the query, sequential accumulation.

    cumsum keeps the left-to-right addition order, matching the jit loop
    bit-for-bit (a BLAS matvec would differ in the last ulp).
    """
    return np.cumsum(matrix * query, axis=1)[:, -1]


def _build_numba_kernel():
    from numba import njit

    @njit(cache=True)
    def cosine_scores_jit(matrix, query):
        n, d = matrix.shape
        out = np.empty(n)
        for i in range(n):
            s = 0.0
            for j in range(d):
                s += matrix[i, j] * query[j]
            out[i] = s
        return out

    return cosine_scores_jit


if os.environ.get("GEOAGENT_PURE_NUMPY"):
    cosine_scores_numba = None
else:
    try:
        cosine_scores_numba = _build_numba_kernel()
    except ImportError:
        cosine_scores_numba = None


def active_kernel() -> str:
    return "numba" if cosine_scores_numba is not None else "numpy"


def cosine_scores(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Cosine similarity of unit rows against a unit query vector."""
    matrix = np.ascontiguousarray(matrix, dtype=np.float64)
    query = np.ascontiguousarray(query, dtype=np.float64)
    if cosine_scores_numba is not None:
        return cosine_scores_numba(matrix, query)
    return cosine_scores_numpy(matrix, query)


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    """L2-normalize each row; zero rows are rejected."""
    matrix = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(matrix, axis=-1, keepdims=True)
    if np.any(norms == 0):
        raise ValueError("cannot normalize a zero vector")
    return matrix / norms
