"""Embedding provider port and the shipped deterministic encoder.

Real deployments plug an API or local sentence encoder in here; the shipped
:class:`HashedBagOfWordsEmbedder` exists so natural-language triggers are
fully reproducible offline: lowercase alphanumeric tokens, each hashed with
64-bit FNV-1a into one of ``dimension`` buckets, counted, L2-normalized.
"""

from __future__ import annotations

import re
from typing import Protocol, runtime_checkable

import numpy as np

from govgate.errors import DimensionMismatch, ZeroVector

_TOKEN_RE = re.compile(r"[a-z0-9]+")

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


@runtime_checkable
class EmbeddingProvider(Protocol):
    """Deterministic text-to-vector port: same text, same vector."""

    @property
    def dimension(self) -> int: ...

    @property
    def signature(self) -> str: ...

    def embed(self, text: str) -> np.ndarray: ...


def fnv1a_64(data: bytes) -> int:
    value = _FNV_OFFSET
    for byte in data:
        value ^= byte
        value = (value * _FNV_PRIME) & _MASK64
    return value


class HashedBagOfWordsEmbedder:
    """Counting bag-of-words over FNV-1a hash buckets, L2-normalized.

    Token-less text (empty or punctuation-only) embeds to the zero vector;
    consumers treat that as "no signal" rather than a similarity of any kind.
    """

    def __init__(self, dimension: int = 256):
        if dimension < 2:
            raise ValueError("dimension must be >= 2")
        self._dimension = dimension

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def signature(self) -> str:
        return f"hashed-bow/fnv1a64/d{self._dimension}/v1"

    def embed(self, text: str) -> np.ndarray:
        counts = np.zeros(self._dimension, dtype=np.float64)
        for token in _TOKEN_RE.findall(text.lower()):
            counts[fnv1a_64(token.encode("utf-8")) % self._dimension] += 1.0
        norm = np.linalg.norm(counts)
        if norm == 0.0:
            return counts
        return counts / norm


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """a·b / (|a||b|), clamped into [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(f"vector shapes differ: {a.shape} vs {b.shape}")
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVector("cosine similarity is undefined for a zero vector")
    value = float(np.dot(a, b) / (norm_a * norm_b))
    return max(-1.0, min(1.0, value))
