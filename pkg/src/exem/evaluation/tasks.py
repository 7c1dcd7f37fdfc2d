"""Downstream tasks: node classification, link prediction, topic recommendation."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from sklearn.base import clone

from ..graph import Graph, LabelMap
from ..skipgram.embeddings import EmbeddingMatrix
from .logistic import LogisticRegressionGD, OneVsRestLogistic
from .metrics import auc, f1_scores
from .operators import edge_feature
from .report import EvalReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RankedList:
    """``(node id, score)`` pairs, highest score first, ties by node id."""

    items: tuple

    @classmethod
    def from_scores(cls, ids, scores, k: int | None = None) -> "RankedList":
        ranked = sorted(zip(ids, map(float, scores)), key=lambda t: (-t[1], t[0]))
        return cls(tuple(ranked[:k] if k is not None else ranked))

    @property
    def ids(self) -> list[str]:
        return [i for i, _ in self.items]

    @property
    def scores(self) -> list[float]:
        return [s for _, s in self.items]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


def _cosine(M, q):
    norms = np.linalg.norm(M, axis=1) * np.linalg.norm(q)
    dots = M @ q
    return np.divide(dots, norms, out=np.zeros_like(dots), where=norms > 0)


def _split_point(n, ratio):
    return min(max(int(round(ratio * n)), 1), n - 1)


def evaluate_classification(embeddings: EmbeddingMatrix, labels: LabelMap, train_ratio=0.5,
                            repetitions=10, seed=0, decision="top-k", alpha=1.0,
                            max_iter=1000) -> EvalReport:
    """One-vs-rest logistic regression on a random split, repeated; mean micro/macro F1."""
    if not 0 < train_ratio < 1:
        raise ValueError("train_ratio must lie in (0, 1)")
    nodes = sorted(labels.labels)
    if len(nodes) < 2:
        raise ValueError("need at least two labeled nodes")
    X = embeddings.rows([labels.name_of(n) for n in nodes])
    Y = labels.indicator(nodes)
    cut = _split_point(len(nodes), train_ratio)
    report = EvalReport("classification", train_ratio, repetitions, seed,
                        {"micro_f1": [], "macro_f1": []},
                        {"decision": decision, "mode": embeddings.mode})
    for rep in range(repetitions):
        perm = np.random.default_rng([seed, rep]).permutation(len(nodes))
        train, test = perm[:cut], perm[cut:]
        clf = OneVsRestLogistic(alpha=alpha, max_iter=max_iter, decision=decision)
        clf.fit(X[train], Y[train])
        pred = clf.predict(X[test], k=Y[test].sum(axis=1))
        true_sets = [set(np.flatnonzero(row)) for row in Y[test]]
        pred_sets = [set(np.flatnonzero(row)) for row in pred]
        micro, macro = f1_scores(true_sets, pred_sets, labels=set().union(*true_sets, *pred_sets))
        report.per_repetition["micro_f1"].append(micro)
        report.per_repetition["macro_f1"].append(macro)
    return report


def sample_non_edges(graph: Graph, count: int, rng) -> np.ndarray:
    """Distinct uniformly drawn node pairs ``u < v`` that are not edges."""
    n = graph.node_count
    available = n * (n - 1) // 2 - graph.edge_count
    if count > available:
        raise ValueError(f"graph has only {available} non-edges, {count} requested")
    seen: set = set()
    out = []
    while len(out) < count:
        u, v = (int(x) for x in rng.integers(n, size=2))
        if u == v:
            continue
        u, v = min(u, v), max(u, v)
        if (u, v) in seen or graph.has_edge(u, v):
            continue
        seen.add((u, v))
        out.append((u, v))
    return np.array(out, dtype=np.int64).reshape(-1, 2)


def _reseed(embedder, seed):
    est = clone(embedder)
    if "seed" in est.get_params():
        est.set_params(seed=seed)
    return est


def evaluate_link_prediction(graph: Graph, embedder, op="hadamard", hide_ratio=0.5,
                             repetitions=10, seed=0, alpha=1.0) -> EvalReport:
    """Hide edges, embed the residual graph, classify hidden edges vs non-edges; mean AUC.

    ``embedder`` is an unfitted estimator whose ``fit(graph)`` sets
    ``embedding_`` (an :class:`EmbeddingMatrix`). It is cloned per
    repetition with a derived seed.
    """
    if not 0 < hide_ratio < 1:
        raise ValueError("hide_ratio must lie in (0, 1)")
    edges = graph.edges()
    m = len(edges)
    n_hide = int(round(hide_ratio * m))
    if n_hide < 1 or m - n_hide < 1:
        raise ValueError(f"cannot hide {hide_ratio:.0%} of {m} edges and keep at least one")
    names = graph.node_names
    report = EvalReport("link_prediction", hide_ratio, repetitions, seed, {"auc": []},
                        {"op": op})
    for rep in range(repetitions):
        rng = np.random.default_rng([seed, rep])
        hidden = edges[rng.permutation(m)[:n_hide]]
        residual = graph.without_edges(hidden)
        negatives = sample_non_edges(graph, n_hide, rng)
        est = _reseed(embedder, int(rng.integers(2**31)))
        emb = est.fit(residual).embedding_
        pairs = np.concatenate([hidden, negatives])
        y = np.r_[np.ones(n_hide, dtype=int), np.zeros(n_hide, dtype=int)]
        U = emb.rows([names[u] for u in pairs[:, 0]])
        V = emb.rows([names[v] for v in pairs[:, 1]])
        F = edge_feature(U, V, op)
        perm = rng.permutation(len(pairs))
        half = len(pairs) // 2
        train, test = perm[:half], perm[half:]
        if len(set(y[train])) < 2 or len(set(y[test])) < 2:
            raise ValueError("link prediction split produced a one-class partition")
        clf = LogisticRegressionGD(alpha=alpha).fit(F[train], y[train])
        scores = clf.decision_function(F[test])
        report.per_repetition["auc"].append(auc(scores[y[test] == 1], scores[y[test] == 0]))
    return report


def topic_centroid(embeddings: EmbeddingMatrix, labels: LabelMap, topic):
    label = labels.label_id(topic) if isinstance(topic, str) else int(topic)
    cluster = [labels.name_of(n) for n in labels.nodes_with(label)]
    if not cluster:
        raise ValueError(f"no node carries topic {topic!r}")
    centroid = embeddings.rows(cluster).mean(axis=0)
    if not np.linalg.norm(centroid) > 0:
        raise ValueError("degenerate centroid: topic vectors average to zero")
    return cluster, centroid


def recommend(embeddings: EmbeddingMatrix, labels: LabelMap, topic, k=10,
              candidates="cluster") -> RankedList:
    """Rank experts by cosine similarity to the mean vector of the topic's nodes.

    ``candidates="cluster"`` scores only nodes carrying the topic;
    ``"all"`` scores every embedded node against the same centroid.
    """
    cluster, centroid = topic_centroid(embeddings, labels, topic)
    ids = cluster if candidates == "cluster" else list(embeddings.names)
    scores = _cosine(embeddings.rows(ids), centroid)
    return RankedList.from_scores(ids, scores, k)


def nearest(embeddings: EmbeddingMatrix, query, k=10, exclude=()) -> RankedList:
    """Top-k nodes by cosine similarity to ``query`` (e.g. ``v(x) + v(y)``)."""
    q = np.asarray(query, dtype=np.float64)
    if q.shape != (embeddings.dimension,):
        raise ValueError(f"query has shape {q.shape}, expected ({embeddings.dimension},)")
    if not np.linalg.norm(q) > 0:
        raise ValueError("query vector is zero")
    skip = set(exclude)
    ids = [n for n in embeddings.names if n not in skip]
    scores = _cosine(embeddings.rows(ids), q)
    return RankedList.from_scores(ids, scores, k)
