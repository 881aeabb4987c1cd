"""Deterministic feature embeddings.

The default provider hashes tokens into a fixed-dimension sign vector
(classic feature hashing, seeded by a stable digest rather than Python's
randomized hash). It preserves the algebra the memory needs (determinism,
unit norm, token-overlap similarity) while staying a drop-in seat for a
learned encoder behind the same contract.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from typing import Protocol

import numpy as np


class EmbeddingProvider(Protocol):
    dim: int

    def embed_text(self, text: str) -> np.ndarray: ...

    def embed_visual(self, category: str, attributes: tuple[str, ...]) -> np.ndarray: ...


def _tokens(text: str) -> list[str]:
    out, cur = [], []
    for ch in text.lower():
        if ch.isalnum():
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


def normalize(v: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        v = v.copy()
        v[0] = 1.0
        return v
    return v / norm


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))


class HashingEmbedding:
    """Feature-hashing provider: each token lands on a salted bucket with a
    deterministic sign."""

    def __init__(self, dim: int = 128, seed: str = "homebench"):
        self.dim = dim
        self.seed = seed

    def _token_vector(self, salt: str, token: str) -> np.ndarray:
        h = hashlib.sha256(f"{self.seed}:{salt}:{token}".encode()).digest()
        idx = int.from_bytes(h[:4], "big") % self.dim
        sign = 1.0 if h[4] & 1 else -1.0
        v = np.zeros(self.dim)
        v[idx] = sign
        return v

    def _bag(self, salt: str, tokens: tuple[str, ...]) -> np.ndarray:
        v = np.zeros(self.dim)
        for tok in tokens:
            v += self._token_vector(salt, tok)
        return normalize(v)

    @lru_cache(maxsize=4096)
    def _text_cached(self, text: str) -> tuple:
        return tuple(self._bag("text", tuple(_tokens(text))))

    def embed_text(self, text: str) -> np.ndarray:
        return np.array(self._text_cached(text))

    @lru_cache(maxsize=4096)
    def _visual_cached(self, category: str, attributes: tuple[str, ...]) -> tuple:
        return tuple(self._bag("visual", (category, *attributes)))

    def embed_visual(self, category: str, attributes: tuple[str, ...]) -> np.ndarray:
        return np.array(self._visual_cached(category, attributes))


def embed_record(category: str, attributes: tuple[str, ...], label: str, provider: EmbeddingProvider) -> np.ndarray:
    """Fused feature: visual embedding of the sighting plus text embedding of
    the label, renormalized."""
    return normalize(provider.embed_visual(category, attributes) + provider.embed_text(label))
