"""F1 (micro/macro), pairwise AUC and nDCG@k."""
from __future__ import annotations

import logging
import math
from typing import Mapping

import numpy as np

logger = logging.getLogger(__name__)


def _aligned(true, pred):
    if isinstance(true, Mapping) or isinstance(pred, Mapping):
        if not (isinstance(true, Mapping) and isinstance(pred, Mapping)):
            raise TypeError("pass both label collections as mappings or both as sequences")
        if set(true) != set(pred):
            raise ValueError("true and predicted label maps cover different nodes")
        keys = sorted(true)
        return [set(true[k]) for k in keys], [set(pred[k]) for k in keys]
    if len(true) != len(pred):
        raise ValueError(f"{len(true)} true label sets vs {len(pred)} predicted")
    return [set(t) for t in true], [set(p) for p in pred]


def _f1(tp, fp, fn):
    denom = 2 * tp + fp + fn
    return 0.0 if denom == 0 else 2.0 * tp / denom


def f1_scores(true, pred, labels=None) -> tuple[float, float]:
    """Micro- and macro-averaged F1 over per-node label sets.

    ``labels`` fixes the label universe; by default it is every label seen in
    either collection. A label that is never predicted nor true-positive
    scores F1 = 0.
    """
    true, pred = _aligned(true, pred)
    if not true:
        raise ValueError("no nodes to score")
    if labels is None:
        labels = set().union(*true, *pred)
    labels = sorted(labels)
    if not labels:
        return 0.0, 0.0
    tp = dict.fromkeys(labels, 0)
    fp = dict.fromkeys(labels, 0)
    fn = dict.fromkeys(labels, 0)
    for t, p in zip(true, pred):
        for lab in p:
            if lab in tp:
                if lab in t:
                    tp[lab] += 1
                else:
                    fp[lab] += 1
        for lab in t - p:
            if lab in fn:
                fn[lab] += 1
    TP, FP, FN = sum(tp.values()), sum(fp.values()), sum(fn.values())
    precision = TP / (TP + FP) if TP + FP else 0.0
    recall = TP / (TP + FN) if TP + FN else 0.0
    micro = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    macro = sum(_f1(tp[l], fp[l], fn[l]) for l in labels) / len(labels)
    return micro, macro


def auc(positive_scores, negative_scores) -> float:
    """Fraction of positive/negative pairs ordered correctly, ties counting one half."""
    pos = np.asarray(positive_scores, dtype=np.float64).ravel()
    neg = np.sort(np.asarray(negative_scores, dtype=np.float64).ravel())
    if pos.size == 0 or neg.size == 0:
        raise ValueError("auc needs at least one positive and one negative score")
    below = np.searchsorted(neg, pos, side="left")
    upto = np.searchsorted(neg, pos, side="right")
    n1 = int(below.sum())
    n2 = int((upto - below).sum())
    return (n1 + 0.5 * n2) / (pos.size * neg.size)


def dcg_at_k(gains) -> float:
    """First position undiscounted, position ``i >= 2`` divided by ``log2(i)``."""
    total = 0.0
    for i, g in enumerate(gains, 1):
        total += g if i == 1 else g / math.log2(i)
    return total


def ndcg_at_k(predicted, relevance: Mapping, k: int) -> float:
    """nDCG@k of a ranked list against graded relevance.

    ``predicted`` is a :class:`RankedList` or a sequence of node ids; ids
    missing from ``relevance`` count as zero. The ideal ordering is taken
    over all of ``relevance``. Positions 1 and 2 carry equal weight under
    the ``log2(i)`` discount.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    ids = list(getattr(predicted, "ids", predicted))
    if any(r < 0 for r in relevance.values()):
        raise ValueError("relevance values must be non-negative")
    if k > len(ids):
        logger.warning("k=%d exceeds ranked list length %d; truncating", k, len(ids))
        k = len(ids)
    gains = [relevance.get(i, 0.0) for i in ids[:k]]
    ideal = sorted(relevance.values(), reverse=True)[:k]
    idcg = dcg_at_k(ideal)
    return 0.0 if idcg == 0 else dcg_at_k(gains) / idcg
