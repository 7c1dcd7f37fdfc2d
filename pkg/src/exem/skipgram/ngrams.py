"""Character n-gram features for subword (fastText-style) training.

Tokens are wrapped as ``<token>`` and every substring of length
``min_n..max_n`` is hashed with 32-bit FNV-1a over its UTF-8 bytes, then
reduced modulo the bucket count.
"""
from __future__ import annotations

import numpy as np

FNV_OFFSET = 2166136261
FNV_PRIME = 16777619


def fnv1a_32(text: str) -> int:
    h = FNV_OFFSET
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * FNV_PRIME) & 0xFFFFFFFF
    return h


def char_ngrams(token: str, min_n: int, max_n: int) -> list[str]:
    if not token:
        raise ValueError("token must be non-empty")
    wrapped = f"<{token}>"
    grams = []
    for n in range(min_n, max_n + 1):
        for i in range(len(wrapped) - n + 1):
            grams.append(wrapped[i:i + n])
    return grams


def ngram_decompose(token: str, min_n: int = 3, max_n: int = 6, bucket_count: int = 2**21,
                    token_index: int = 0, vocab_size: int = 1) -> np.ndarray:
    """Feature ids for one token in a single id space.

    The first id is the whole-token feature ``token_index`` (a vocabulary
    index, below ``vocab_size``); each n-gram maps to
    ``vocab_size + fnv1a_32(gram) % bucket_count``.
    """
    buckets = [vocab_size + fnv1a_32(g) % bucket_count for g in char_ngrams(token, min_n, max_n)]
    return np.array([token_index, *buckets], dtype=np.int64)
