"""Estimator front end: graph in, node embedding out."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .domset import find_dominating_set
from .graph import Graph
from .skipgram import (EmbeddingMatrix, TrainConfig, combine, corpus_sentences, cover_nodes,
                       train_with_history)
from .walker import WalkConfig, generate_walks

VARIANTS = ("w2v", "ft", "com", "sum", "avg")
_COMBINE_SCHEME = {"com": "concat", "sum": "sum", "avg": "avg"}


def check_graph(graph) -> Graph:
    if not isinstance(graph, Graph):
        raise TypeError(f"expected a Graph, got {type(graph).__name__}")
    if graph.node_count == 0:
        raise ValueError("graph has no nodes")
    return graph


class ExEm(TransformerMixin, BaseEstimator):
    """Dominating-set random walks followed by skip-gram training.

    ``fit(graph)`` builds the dominating set, samples the walk corpus and
    trains the requested ``variant``; ``transform(nodes)`` returns the rows
    for external node ids. ``com``, ``sum`` and ``avg`` train both the
    whole-token and subword models on the same corpus and merge them.
    ``walk_mode="uniform"`` gives the plain uniform-walk baseline.

    Attributes set by ``fit``: ``dominating_set_``, ``corpus_``,
    ``embedding_``, ``base_embeddings_`` and ``loss_history_``. Rows follow
    graph node order; a node no walk visited gets a zero vector.
    """

    def __init__(self, variant="w2v", walk_mode="exem-relaxed", walks_per_start=10,
                 walk_length=80, walks_total=None, dim=128, window=10, epochs=5, negatives=5,
                 learning_rate=0.025, min_ngram=3, max_ngram=6, buckets=2**21, sample=0.0,
                 seed=0, workers=1):
        self.variant = variant
        self.walk_mode = walk_mode
        self.walks_per_start = walks_per_start
        self.walk_length = walk_length
        self.walks_total = walks_total
        self.dim = dim
        self.window = window
        self.epochs = epochs
        self.negatives = negatives
        self.learning_rate = learning_rate
        self.min_ngram = min_ngram
        self.max_ngram = max_ngram
        self.buckets = buckets
        self.sample = sample
        self.seed = seed
        self.workers = workers

    def walk_config(self) -> WalkConfig:
        return WalkConfig(self.walks_per_start, self.walk_length, self.walk_mode, self.seed,
                          self.walks_total, self.workers)

    def train_config(self) -> TrainConfig:
        return TrainConfig(self.dim, self.window, self.epochs, self.negatives, self.learning_rate,
                           self.min_ngram, self.max_ngram, self.buckets, self.sample, self.seed,
                           self.workers)

    def fit(self, X, y=None):
        graph = check_graph(X)
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        walk_cfg = self.walk_config()
        train_cfg = self.train_config()
        self.dominating_set_ = find_dominating_set(graph, self.seed) if walk_cfg.is_exem else None
        self.corpus_ = generate_walks(graph, self.dominating_set_, walk_cfg)
        sentences = corpus_sentences(self.corpus_, graph)
        bases = ("w2v", "ft") if self.variant in _COMBINE_SCHEME else (self.variant,)
        self.base_embeddings_ = {}
        self.loss_history_ = {}
        for mode in bases:
            emb, losses = train_with_history(sentences, train_cfg, mode)
            self.base_embeddings_[mode] = cover_nodes(emb, graph.node_names)
            self.loss_history_[mode] = losses
        if self.variant in _COMBINE_SCHEME:
            self.embedding_ = combine(self.base_embeddings_["w2v"], self.base_embeddings_["ft"],
                                      _COMBINE_SCHEME[self.variant])
        else:
            self.embedding_ = self.base_embeddings_[self.variant]
        self.graph_ = graph
        return self

    def transform(self, X) -> np.ndarray:
        """Vectors for external node ids (or dense indices into the fitted graph)."""
        check_is_fitted(self, "embedding_")
        names = [self.graph_.node_names[x] if isinstance(x, (int, np.integer)) else str(x)
                 for x in X]
        return self.embedding_.rows(names)

    def fit_transform(self, X, y=None, **fit_params):
        self.fit(X, y)
        return self.embedding_.rows(self.graph_.node_names)


class ConstantEmbedder(BaseEstimator):
    """Gives every node the same vector; the no-signal reference for evaluations."""

    def __init__(self, dim=8, value=1.0, seed=0):
        self.dim = dim
        self.value = value
        self.seed = seed

    def fit(self, X, y=None):
        graph = check_graph(X)
        vectors = np.full((graph.node_count, self.dim), float(self.value))
        self.embedding_ = EmbeddingMatrix("w2v", graph.node_names, vectors)
        return self
