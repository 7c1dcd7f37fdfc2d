"""Token vocabulary and the smoothed unigram noise distribution."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

NOISE_POWER = 0.75


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]
    counts: np.ndarray
    noise: np.ndarray

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def index(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.tokens)}


def build_vocab(sentences, power: float = NOISE_POWER) -> Vocabulary:
    """Count tokens over an iterable of token sequences.

    Tokens are ordered by descending count, ties by first appearance, so the
    index assignment is a pure function of the corpus.
    """
    counter: Counter = Counter()
    for sentence in sentences:
        counter.update(sentence)
    if not counter:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    # Counter preserves insertion order, sorted() is stable
    ordered = sorted(counter.items(), key=lambda kv: -kv[1])
    tokens = tuple(t for t, _ in ordered)
    counts = np.array([c for _, c in ordered], dtype=np.int64)
    weights = counts.astype(np.float64) ** power
    return Vocabulary(tokens, counts, weights / weights.sum())
