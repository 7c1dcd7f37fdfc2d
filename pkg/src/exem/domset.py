"""Randomized independent dominating set construction and its verifier."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class DominatingSet:
    members: frozenset
    node_count: int
    seed: int | None = None
    _mask: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        members = frozenset(int(m) for m in self.members)
        bad = [m for m in members if not 0 <= m < self.node_count]
        if bad:
            raise IndexError(f"dominating-set members out of range: {sorted(bad)[:5]}")
        mask = np.zeros(self.node_count, dtype=bool)
        mask[list(members)] = True
        mask.setflags(write=False)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "_mask", mask)

    @property
    def membership(self) -> np.ndarray:
        return self._mask

    def __contains__(self, node) -> bool:
        return 0 <= node < self.node_count and bool(self._mask[node])

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def extended(self, nodes, node_count: int | None = None) -> "DominatingSet":
        n = self.node_count if node_count is None else node_count
        return DominatingSet(self.members | frozenset(nodes), n, self.seed)


class Verification(NamedTuple):
    dominating: bool
    independent: bool
    uncovered: list


def find_dominating_set(graph: Graph, seed=None) -> DominatingSet:
    """Pick uniformly among not-yet-dominated nodes until every node is dominated.

    Each pick removes the node and its neighbors from the candidate pool, so
    the result is also independent. Disconnected graphs are handled per
    component; isolated nodes always end up as members. The candidate pool is
    a swap-remove array, which keeps construction at O(V + E).
    """
    n = graph.node_count
    if n == 0:
        raise ValueError("cannot find a dominating set of an empty graph")
    rng = np.random.default_rng(seed)
    pool = np.arange(n, dtype=np.int64)
    pos = np.arange(n, dtype=np.int64)
    size = n
    members = []

    def drop(v):
        nonlocal size
        p = pos[v]
        if p >= size:
            return
        last = pool[size - 1]
        pool[p], pool[size - 1] = last, v
        pos[last], pos[v] = p, size - 1
        size -= 1

    while size:
        w = int(pool[rng.integers(size)])
        members.append(w)
        drop(w)
        for v in graph.neighbors(w):
            drop(v)
    return DominatingSet(frozenset(members), n, seed)


def verify_dominating_set(graph: Graph, ds: DominatingSet) -> Verification:
    n = graph.node_count
    if ds.node_count != n:
        raise IndexError(f"dominating set sized for {ds.node_count} nodes, graph has {n}")
    covered = ds.membership.copy()
    independent = True
    for m in ds.members:
        nbrs = graph.neighbors(m)
        covered[nbrs] = True
        if ds.membership[nbrs].any():
            independent = False
    uncovered = np.flatnonzero(~covered).tolist()
    return Verification(not uncovered, independent, uncovered)


def write_dominating_set(ds: DominatingSet, graph: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for m in ds.sorted_members():
            fh.write(graph.node_names[m] + "\n")


def read_dominating_set(path, graph: Graph) -> DominatingSet:
    with open(path, encoding="utf-8") as fh:
        names = [line.strip() for line in fh if line.strip()]
    return DominatingSet(frozenset(graph.index_of(s) for s in names), graph.node_count)
