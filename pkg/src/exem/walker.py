"""Dominating-set constrained random walks, the uniform baseline and walk diagnostics."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple

import numba
import numpy as np

from .domset import DominatingSet
from .graph import Graph

logger = logging.getLogger(__name__)

MODES = ("exem-relaxed", "exem-strict", "uniform")
MAX_WALKS = 2**31 - 1
STRICT_RETRIES = 8


@dataclass(frozen=True)
class WalkConfig:
    walks_per_start: int = 10
    walk_length: int = 80
    mode: str = "exem-relaxed"
    seed: int = 0
    walks_total: int | None = None
    workers: int = 1

    def __post_init__(self):
        if self.walks_per_start < 1:
            raise ValueError("walks_per_start must be >= 1")
        if self.walk_length < 1:
            raise ValueError("walk_length must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.walks_total is not None and self.walks_total < 1:
            raise ValueError("walks_total must be >= 1")

    @property
    def is_exem(self) -> bool:
        return self.mode != "uniform"


@dataclass(frozen=True)
class WalkCorpus:
    """Walks in canonical (start index, replica) order.

    ``warned`` holds positions of exem-strict walks accepted without a second
    dominating node after exhausting retries.
    """

    walks: tuple
    config: WalkConfig
    ds_seed: int | None = None
    warned: frozenset = frozenset()
    generation: int = 0

    def __len__(self) -> int:
        return len(self.walks)

    @property
    def token_count(self) -> int:
        return int(sum(len(w) for w in self.walks))

    def starts(self) -> np.ndarray:
        return np.array([w[0] for w in self.walks], dtype=np.int64)


class WalkStats(NamedTuple):
    fraction_with_second_dominating: float
    mean_length: float
    start_coverage: float


@numba.njit(cache=True)
def _step_walk(indptr, indices, start, uniforms, out):
    out[0] = start
    cur = start
    n = 1
    for i in range(len(uniforms)):
        lo = indptr[cur]
        deg = indptr[cur + 1] - lo
        if deg == 0:
            break
        cur = indices[lo + int(uniforms[i] * deg)]
        out[n] = cur
        n += 1
    return n


def _walk_counts(starts, config: WalkConfig) -> np.ndarray:
    n = len(starts)
    if config.walks_total is not None:
        base, extra = divmod(config.walks_total, n)
        counts = np.full(n, base, dtype=np.int64)
        counts[:extra] += 1
    else:
        if config.walks_per_start * n > MAX_WALKS:
            raise OverflowError(
                f"{config.walks_per_start} walks x {n} starts exceeds {MAX_WALKS}"
            )
        counts = np.full(n, config.walks_per_start, dtype=np.int64)
    return counts


def _walks_for_starts(indptr, indices, membership, jobs, config: WalkConfig, generation):
    strict = config.mode == "exem-strict"
    out = np.empty(config.walk_length, dtype=np.int64)
    walks, warned = [], []
    for start, replica in jobs:
        rng = np.random.default_rng([config.seed, generation, start, replica])
        attempts = 1 + (STRICT_RETRIES if strict else 0)
        for attempt in range(attempts):
            n = _step_walk(indptr, indices, start, rng.random(config.walk_length - 1), out)
            walk = out[:n].copy()
            if not strict or int(membership[walk].sum()) >= 2:
                break
        else:
            warned.append(len(walks))
        walks.append(walk)
    return walks, warned


def _worker(args):
    return _walks_for_starts(*args)


def generate_walks(graph: Graph, ds: DominatingSet | None, config: WalkConfig,
                   starts=None, generation: int = 0) -> WalkCorpus:
    """Sample the walk corpus.

    Exem modes start every walk at a dominating node; uniform mode starts at
    every node. Each step moves to a uniformly chosen neighbor and a walk
    stops early at a node without neighbors. Every (start, replica) pair
    draws from its own RNG stream, so output does not depend on ``workers``.
    ``starts`` restricts the start nodes (used by incremental updates).
    """
    if config.is_exem:
        if ds is None:
            raise ValueError(f"mode {config.mode!r} requires a dominating set")
        if len(ds) == 0:
            raise ValueError("dominating set is empty")
        if ds.node_count != graph.node_count:
            raise ValueError("dominating set does not match graph size")
        pool = ds.sorted_members()
        membership = ds.membership
    else:
        pool = list(range(graph.node_count))
        membership = np.zeros(graph.node_count, dtype=bool)
    if starts is not None:
        pool = sorted(starts)
    if not pool:
        return WalkCorpus((), config, ds.seed if ds is not None else None, generation=generation)

    counts = _walk_counts(pool, config)
    jobs = [(s, r) for s, c in zip(pool, counts) for r in range(int(c))]
    if config.workers > 1 and len(jobs) > config.workers:
        chunks = np.array_split(np.arange(len(jobs)), config.workers)
        args = [(graph.indptr, graph.indices, membership, [jobs[i] for i in c], config, generation)
                for c in chunks]
        walks, warned = [], []
        with ProcessPoolExecutor(config.workers) as ex:
            for part_walks, part_warned in ex.map(_worker, args):
                warned.extend(len(walks) + i for i in part_warned)
                walks.extend(part_walks)
    else:
        walks, warned = _walks_for_starts(graph.indptr, graph.indices, membership, jobs,
                                          config, generation)
    if warned:
        logger.warning("%d of %d exem-strict walks accepted without a second dominating node",
                       len(warned), len(walks))
    return WalkCorpus(tuple(walks), config, ds.seed if ds is not None and config.is_exem else None,
                      frozenset(warned), generation)


def walk_stats(corpus: WalkCorpus, ds: DominatingSet) -> WalkStats:
    if len(corpus) == 0:
        raise ValueError("walk corpus is empty")
    mask = ds.membership
    with_second = sum(1 for w in corpus.walks if int(mask[w].sum()) >= 2)
    mean_length = sum(len(w) for w in corpus.walks) / len(corpus)
    starts = {int(w[0]) for w in corpus.walks}
    coverage = len(starts & ds.members) / len(ds) if len(ds) else 0.0
    return WalkStats(with_second / len(corpus), mean_length, coverage)


def update_walks_incremental(corpus: WalkCorpus, graph: Graph, ds: DominatingSet,
                             changed_nodes, config: WalkConfig | None = None):
    """Append walks covering the changed part of the graph.

    A changed node that is neither a member nor adjacent to one joins the
    dominating set. New walks then start from every member in or adjacent
    to ``changed_nodes``. Returns ``(corpus, ds)``; existing walks are kept
    as they are and new ones use a fresh RNG generation.
    """
    config = config or corpus.config
    changed = sorted(set(int(c) for c in changed_nodes))
    for c in changed:
        if not 0 <= c < graph.node_count:
            raise IndexError(f"changed node {c} not in graph")
    if not changed:
        return corpus, ds
    if ds.node_count != graph.node_count:
        ds = DominatingSet(ds.members, graph.node_count, ds.seed)
    joins = [c for c in changed
             if c not in ds and not ds.membership[graph.neighbors(c)].any()]
    if joins:
        ds = ds.extended(joins)
    starts = set()
    for c in changed:
        if c in ds:
            starts.add(c)
        starts.update(int(v) for v in graph.neighbors(c) if v in ds)
    added = generate_walks(graph, ds, replace(config, walks_total=None), starts=starts,
                           generation=corpus.generation + 1)
    offset = len(corpus)
    merged = WalkCorpus(corpus.walks + added.walks, corpus.config, corpus.ds_seed,
                        corpus.warned | frozenset(offset + i for i in added.warned),
                        corpus.generation + 1)
    return merged, ds


def write_corpus(corpus: WalkCorpus, graph: Graph, path) -> None:
    names = graph.node_names
    with open(path, "w", encoding="utf-8") as fh:
        for walk in corpus.walks:
            fh.write(" ".join(names[i] for i in walk) + "\n")


def read_corpus(path, graph: Graph, config: WalkConfig | None = None) -> WalkCorpus:
    walks = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tokens = line.split()
            if tokens:
                walks.append(np.array([graph.index_of(t) for t in tokens], dtype=np.int64))
    return WalkCorpus(tuple(walks), config or WalkConfig())
