"""Graph and label containers, edge-list ingestion and SBM synthesis."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

_SPLIT = re.compile(r"[ \t]+")


class GraphFormatError(ValueError):
    """Raised when an edge-list or label file cannot be parsed."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph in CSR form.

    Node ``i`` has neighbors ``indices[indptr[i]:indptr[i + 1]]``, sorted and
    free of duplicates and self-loops. ``node_names`` maps dense indices back
    to the external string ids.
    """

    indptr: np.ndarray
    indices: np.ndarray
    node_names: tuple[str, ...]
    _name_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        indptr = np.asarray(self.indptr, dtype=np.int64)
        indices = np.asarray(self.indices, dtype=np.int64)
        indptr.setflags(write=False)
        indices.setflags(write=False)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "node_names", tuple(self.node_names))
        object.__setattr__(
            self, "_name_index", {name: i for i, name in enumerate(self.node_names)}
        )
        if len(self._name_index) != len(self.node_names):
            raise ValueError("node names must be unique")
        if len(indptr) != len(self.node_names) + 1:
            raise ValueError("indptr length must be node_count + 1")

    @classmethod
    def from_edges(cls, node_names: Sequence[str], edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a normalized graph from index pairs.

        Self-loops are dropped and parallel edges merged.
        """
        n = len(node_names)
        pairs = np.array(list(edges), dtype=np.int64).reshape(-1, 2)
        if len(pairs) and (pairs.min() < 0 or pairs.max() >= n):
            raise ValueError("edge endpoint out of range")
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        both = np.concatenate([pairs, pairs[:, ::-1]])
        if len(both):
            both = np.unique(both, axis=0)
        counts = np.bincount(both[:, 0], minlength=n) if len(both) else np.zeros(n, np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        indices = both[:, 1] if len(both) else np.zeros(0, np.int64)
        return cls(indptr, indices, tuple(node_names))

    @property
    def node_count(self) -> int:
        return len(self.node_names)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        pos = np.searchsorted(nbrs, v)
        return bool(pos < len(nbrs) and nbrs[pos] == v)

    def index_of(self, name: str) -> int:
        try:
            return self._name_index[name]
        except KeyError:
            raise KeyError(f"node {name!r} not in graph") from None

    def __contains__(self, name) -> bool:
        return name in self._name_index

    def edges(self) -> np.ndarray:
        """Return each undirected edge once as an ``(m, 2)`` array with ``u < v``."""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degree)
        mask = src < self.indices
        return np.stack([src[mask], self.indices[mask]], axis=1)

    def named_edges(self) -> set[frozenset]:
        return {frozenset((self.node_names[u], self.node_names[v])) for u, v in self.edges()}

    def is_symmetric(self) -> bool:
        edges = set(zip(np.repeat(np.arange(self.node_count), self.degree).tolist(),
                        self.indices.tolist()))
        return all((v, u) in edges for u, v in edges)

    def without_edges(self, removed: np.ndarray) -> "Graph":
        """Return a copy with the given ``(m, 2)`` edges removed; nodes are kept."""
        drop = {(int(u), int(v)) for u, v in removed} | {(int(v), int(u)) for u, v in removed}
        kept = [(int(u), int(v)) for u, v in self.edges() if (int(u), int(v)) not in drop]
        return Graph.from_edges(self.node_names, kept)

    def with_edges(self, new_edges: Iterable[tuple[str, str]]) -> "Graph":
        """Return a copy with extra named edges; unseen names become new nodes."""
        names = list(self.node_names)
        index = dict(self._name_index)
        pairs = [tuple(e) for e in self.edges().tolist()]
        for a, b in new_edges:
            for name in (a, b):
                if name not in index:
                    index[name] = len(names)
                    names.append(name)
            pairs.append((index[a], index[b]))
        return Graph.from_edges(names, pairs)


@dataclass(frozen=True)
class LabelMap:
    """Multi-label assignment. ``labels[i]`` is a frozenset of label ids."""

    labels: dict
    vocabulary: tuple[str, ...]
    node_names: tuple[str, ...] = ()

    def __post_init__(self):
        for node, labs in self.labels.items():
            if not labs:
                raise ValueError(f"empty label set for node index {node}")

    def label_id(self, name: str) -> int:
        try:
            return self.vocabulary.index(name)
        except ValueError:
            raise KeyError(f"unknown label {name!r}") from None

    def name_of(self, node: int) -> str:
        return self.node_names[node] if self.node_names else str(node)

    def nodes_with(self, label: int) -> list[int]:
        return sorted(n for n, labs in self.labels.items() if label in labs)

    def indicator(self, nodes: Sequence[int]) -> np.ndarray:
        """Binary ``(len(nodes), n_labels)`` indicator matrix."""
        Y = np.zeros((len(nodes), len(self.vocabulary)), dtype=np.int8)
        for row, node in enumerate(nodes):
            for lab in self.labels.get(node, ()):
                Y[row, lab] = 1
        return Y


@dataclass(frozen=True)
class SbmSpec:
    n: int
    k: int
    p_in: float
    p_out: float
    seed: int = 0

    def __post_init__(self):
        if not (self.n >= self.k >= 1):
            raise ValueError(f"need n >= k >= 1, got n={self.n}, k={self.k}")
        for name in ("p_in", "p_out"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")


def _data_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def load_graph(path) -> Graph:
    """Read a whitespace-separated edge list.

    A third (weight) column is accepted and ignored. Lines starting with
    ``#`` are comments. A self-loop line registers its node without adding
    an edge, which is how isolated nodes are written out.
    """
    names: list[str] = []
    index: dict[str, int] = {}
    pairs = []
    for lineno, line in _data_lines(path):
        tokens = _SPLIT.split(line)
        if len(tokens) not in (2, 3):
            raise GraphFormatError(
                f"{path}:{lineno}: expected 2 or 3 fields, got {len(tokens)}"
            )
        ends = []
        for tok in tokens[:2]:
            if tok not in index:
                index[tok] = len(names)
                names.append(tok)
            ends.append(index[tok])
        pairs.append(tuple(ends))
    if not names:
        raise GraphFormatError(f"{path}: no edges or nodes")
    return Graph.from_edges(names, pairs)


def write_graph(graph: Graph, path) -> None:
    """Write an edge list that :func:`load_graph` reads back to the same graph.

    Nodes are declared first as self-loop lines so that isolated nodes and
    the index order survive the round trip.
    """
    names = graph.node_names
    with open(path, "w", encoding="utf-8") as fh:
        for name in names:
            fh.write(f"{name} {name}\n")
        for u, v in graph.edges():
            fh.write(f"{names[u]} {names[v]}\n")


def load_labels(path, graph: Graph) -> LabelMap:
    vocab: list[str] = []
    vocab_index: dict[str, int] = {}
    labels: dict[int, frozenset] = {}
    for lineno, line in _data_lines(path):
        parts = _SPLIT.split(line, maxsplit=1)
        node_id = parts[0]
        if node_id not in graph:
            raise GraphFormatError(f"{path}:{lineno}: node {node_id!r} not in graph")
        names = [s.strip() for s in parts[1].split(",")] if len(parts) > 1 else []
        names = [s for s in names if s]
        if not names:
            raise GraphFormatError(f"{path}:{lineno}: empty label list for node {node_id!r}")
        ids = set()
        for name in names:
            if name not in vocab_index:
                vocab_index[name] = len(vocab)
                vocab.append(name)
            ids.add(vocab_index[name])
        node = graph.index_of(node_id)
        labels[node] = labels.get(node, frozenset()) | frozenset(ids)
    return LabelMap(labels, tuple(vocab), graph.node_names)


def write_labels(labels: LabelMap, graph: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for node in sorted(labels.labels):
            names = ",".join(labels.vocabulary[i] for i in sorted(labels.labels[node]))
            fh.write(f"{graph.node_names[node]}\t{names}\n")


def sbm_blocks(n: int, k: int) -> np.ndarray:
    """Community id per node: ``k`` contiguous blocks whose sizes differ by at most one."""
    return (np.arange(n) * k) // n


def generate_sbm(spec: SbmSpec) -> tuple[Graph, LabelMap]:
    """Sample a planted-partition graph; each node is labeled with its block id."""
    rng = np.random.default_rng(spec.seed)
    block = sbm_blocks(spec.n, spec.k)
    members = [np.flatnonzero(block == b) for b in range(spec.k)]
    chunks = []
    for a in range(spec.k):
        for b in range(a, spec.k):
            p = spec.p_in if a == b else spec.p_out
            ma, mb = members[a], members[b]
            if a == b:
                iu, ju = np.triu_indices(len(ma), k=1)
                hit = rng.random(len(iu)) < p
                chunks.append(np.stack([ma[iu[hit]], ma[ju[hit]]], axis=1))
            else:
                hit = rng.random((len(ma), len(mb))) < p
                ii, jj = np.nonzero(hit)
                chunks.append(np.stack([ma[ii], mb[jj]], axis=1))
    edges = np.concatenate(chunks) if chunks else np.zeros((0, 2), np.int64)
    graph = Graph.from_edges([str(i) for i in range(spec.n)], edges)
    labels = LabelMap({i: frozenset([int(block[i])]) for i in range(spec.n)},
                      tuple(f"C{b}" for b in range(spec.k)), graph.node_names)
    return graph, labels


def sbm_expected_edges(spec: SbmSpec) -> float:
    sizes = np.bincount(sbm_blocks(spec.n, spec.k), minlength=spec.k).astype(float)
    within = float((sizes * (sizes - 1) / 2).sum())
    between = float((sizes.sum() ** 2 - (sizes ** 2).sum()) / 2)
    return within * spec.p_in + between * spec.p_out
