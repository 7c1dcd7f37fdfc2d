"""Skip-gram with negative sampling over walk corpora, whole-token or subword."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numba
import numpy as np

from . import _kernels
from .embeddings import EmbeddingMatrix
from .ngrams import ngram_decompose
from .vocab import Vocabulary, build_vocab

logger = logging.getLogger(__name__)

MAX_TOKENS = 2**31 - 1


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 128
    window: int = 10
    epochs: int = 5
    negatives: int = 5
    learning_rate: float = 0.025
    min_ngram: int = 3
    max_ngram: int = 6
    buckets: int = 2**21
    sample: float = 0.0
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        for name in ("dim", "window", "epochs", "negatives", "buckets", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.min_ngram > self.max_ngram:
            raise ValueError("min_ngram must not exceed max_ngram")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


def _seed_state(*entropy) -> np.ndarray:
    return np.random.SeedSequence(list(entropy)).generate_state(1, dtype=np.uint64)


def _as_state(rng) -> np.ndarray:
    if isinstance(rng, np.random.Generator):
        return np.array([rng.integers(0, 2**63, dtype=np.int64)], dtype=np.uint64)
    return _seed_state(0 if rng is None else rng)


def positive_pairs(walk, window: int, rng=None) -> np.ndarray:
    """(center, context) pairs of one walk, as the trainer samples them.

    For every center an effective window is drawn uniformly from
    ``1..window``, so a context at distance ``d`` is kept with probability
    ``(window - d + 1) / window``.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    centers, contexts = _kernels._window_pairs(np.asarray(walk, dtype=np.int64), window,
                                                _as_state(rng))
    return np.stack([centers, contexts], axis=1)


def pair_loss_grad(h, u, label: int):
    """Loss ``-log sigmoid(+-h.u)`` and its gradients w.r.t. ``h`` and ``u``."""
    return _kernels._pair_loss_grad(np.asarray(h, np.float64), np.asarray(u, np.float64),
                                    int(label))


def sgd_step(center_features, context: int, label, step_size: float, syn0, syn1) -> float:
    """Apply one positive (label 1) or negative (label 0) update in place.

    The center vector is the sum of its feature rows in ``syn0``; every one
    of those rows receives the same input-side gradient step.
    """
    if step_size <= 0:
        raise ValueError("step_size must be positive")
    label = {"positive": 1, "negative": 0}.get(label, label)
    feats = np.asarray(center_features, dtype=np.int64)
    loss = _kernels._sgd_step(np.array([0, len(feats)], dtype=np.int64), feats, 0,
                              int(context), int(label), float(step_size), syn0, syn1)
    if not (np.isfinite(loss) and np.isfinite(syn0[feats]).all()
            and np.isfinite(syn1[int(context)]).all()):
        raise FloatingPointError(f"non-finite update for context {context}")
    return loss


def _features(vocab: Vocabulary, config: TrainConfig, mode: str):
    V = len(vocab)
    if mode == "w2v":
        return np.arange(V + 1, dtype=np.int64), np.arange(V, dtype=np.int64), 0
    per_token = [ngram_decompose(tok, config.min_ngram, config.max_ngram, config.buckets, i, V)
                 for i, tok in enumerate(vocab.tokens)]
    flat = np.concatenate(per_token)
    used = np.unique(flat[flat >= V])
    # only buckets that some token hits need a row; rows follow bucket order
    remap = flat.copy()
    grams = flat >= V
    remap[grams] = V + np.searchsorted(used, flat[grams])
    ptr = np.zeros(V + 1, dtype=np.int64)
    np.cumsum([len(p) for p in per_token], out=ptr[1:])
    return ptr, remap, len(used)


def train_with_history(sentences, config: TrainConfig, mode: str = "w2v"):
    """Train and return ``(EmbeddingMatrix, per-epoch mean losses)``."""
    if mode not in ("w2v", "ft"):
        raise ValueError(f"mode must be 'w2v' or 'ft', got {mode!r}")
    sentences = [list(s) for s in sentences]
    sentences = [s for s in sentences if s]
    vocab = build_vocab(sentences)
    index = vocab.index
    lengths = np.array([len(s) for s in sentences], dtype=np.int64)
    total_tokens = int(lengths.sum())
    if total_tokens > MAX_TOKENS:
        raise OverflowError(f"corpus has {total_tokens} tokens, limit is {MAX_TOKENS}")
    tokens = np.fromiter((index[t] for s in sentences for t in s), dtype=np.int64,
                         count=total_tokens)
    offsets = np.zeros(len(sentences) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])

    feat_ptr, feat_idx, n_grams = _features(vocab, config, mode)
    V, d = len(vocab), config.dim
    rng = np.random.default_rng(config.seed)
    syn0 = np.empty((V + n_grams, d))
    syn0[:V] = rng.uniform(-0.5 / d, 0.5 / d, size=(V, d))
    if n_grams:
        syn0[V:] = rng.uniform(-0.5 / d, 0.5 / d, size=(n_grams, d))
    syn1 = np.zeros((V, d))
    cum_noise = np.cumsum(vocab.noise)
    if config.sample > 0:
        freq = vocab.counts / total_tokens
        keep_prob = np.minimum((np.sqrt(freq / config.sample) + 1) * config.sample / freq, 1.0)
    else:
        keep_prob = np.zeros(0)

    total_work = float(config.epochs * total_tokens)
    workers = min(config.workers, len(sentences))
    if workers > 1:
        numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))
        bounds = np.linspace(0, len(sentences), workers + 1).astype(np.int64)
        states = np.stack([_seed_state(config.seed, 1, c) for c in range(workers)])
    else:
        state = _seed_state(config.seed, 1)

    losses = []
    for epoch in range(config.epochs):
        done_before = float(epoch * total_tokens)
        if workers > 1:
            loss, pairs, _, ok = _kernels._train_parallel(
                tokens, offsets, bounds, feat_ptr, feat_idx, syn0, syn1, cum_noise, keep_prob,
                config.window, config.negatives, config.learning_rate, total_work, done_before,
                states)
        else:
            loss, pairs, _, ok = _kernels._train_range(
                tokens, offsets, 0, len(sentences), feat_ptr, feat_idx, syn0, syn1, cum_noise,
                keep_prob, config.window, config.negatives, config.learning_rate, total_work,
                done_before, 1.0, state)
        if not ok:
            raise FloatingPointError(f"training diverged in epoch {epoch + 1}: loss={loss}")
        losses.append(loss / max(pairs, 1))
        logger.debug("epoch %d: %d pairs, mean loss %.5f", epoch + 1, pairs, losses[-1])

    if mode == "w2v":
        vectors = syn0[:V].copy()
    else:
        vectors = np.add.reduceat(syn0[feat_idx], feat_ptr[:-1], axis=0)
    if not np.isfinite(vectors).all():
        raise FloatingPointError("training produced non-finite vectors")
    return EmbeddingMatrix(mode, vocab.tokens, vectors), losses


def train(sentences, config: TrainConfig = TrainConfig(), mode: str = "w2v") -> EmbeddingMatrix:
    """Train node vectors from token sequences (walks rendered as node ids)."""
    return train_with_history(sentences, config, mode)[0]


def corpus_sentences(corpus, graph) -> list[list[str]]:
    names = graph.node_names
    return [[names[i] for i in walk] for walk in corpus.walks]
