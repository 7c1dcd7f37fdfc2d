"""Node embedding table, text serialization and the com/sum/avg combiners."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

MODES = ("w2v", "ft", "com", "sum", "avg")
SCHEMES = {"concat": "com", "sum": "sum", "avg": "avg"}


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    mode: str
    names: tuple[str, ...]
    vectors: np.ndarray
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(self.names):
            raise ValueError(
                f"expected {len(self.names)} vectors, got array of shape {vectors.shape}"
            )
        if self.mode not in MODES:
            raise ValueError(f"unknown embedding mode {self.mode!r}")
        if not np.isfinite(vectors).all():
            raise ValueError("embedding contains non-finite components")
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> np.ndarray:
        return self.vectors[self._index[name]]

    def rows(self, names) -> np.ndarray:
        """Stack the vectors for ``names`` in the given order."""
        missing = sorted({n for n in names if n not in self._index})
        if missing:
            raise KeyError(f"no embedding for {len(missing)} node(s), e.g. {missing[:5]}")
        return self.vectors[[self._index[n] for n in names]]


def cover_nodes(emb: EmbeddingMatrix, names) -> EmbeddingMatrix:
    """Reorder to ``names``, giving nodes the corpus never visited a zero vector."""
    names = tuple(names)
    vectors = np.zeros((len(names), emb.dimension))
    absent = 0
    for i, n in enumerate(names):
        if n in emb:
            vectors[i] = emb[n]
        else:
            absent += 1
    if absent:
        logger.info("%d node(s) absent from the corpus get a zero vector", absent)
    return EmbeddingMatrix(emb.mode, names, vectors)


def combine(a: EmbeddingMatrix, b: EmbeddingMatrix, scheme: str) -> EmbeddingMatrix:
    """Merge two embeddings of the same node set; ``b`` is aligned to ``a``'s order."""
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {sorted(SCHEMES)}, got {scheme!r}")
    diff = set(a.names) ^ set(b.names)
    if diff:
        raise ValueError(f"node sets differ; symmetric difference: {sorted(diff)}")
    bv = b.rows(a.names)
    if scheme == "concat":
        out = np.hstack([a.vectors, bv])
    else:
        if a.dimension != b.dimension:
            raise ValueError(f"{scheme} needs equal dimensions, got {a.dimension} and {b.dimension}")
        out = a.vectors + bv
        if scheme == "avg":
            out = out / 2.0
    return EmbeddingMatrix(SCHEMES[scheme], a.names, out)


def write_embeddings(emb: EmbeddingMatrix, path) -> None:
    """Write the word2vec text format; floats use shortest round-trip repr."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(emb)} {emb.dimension}\n")
        for name, row in zip(emb.names, emb.vectors.tolist()):
            fh.write(name + " " + " ".join(map(repr, row)) + "\n")


def read_embeddings(path, mode: str = "w2v") -> EmbeddingMatrix:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: header must be 'count dimension'")
        count, dim = int(header[0]), int(header[1])
        names, rows = [], []
        for lineno, line in enumerate(fh, 2):
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise ValueError(f"{path}:{lineno}: expected {dim} values")
            names.append(parts[0])
            rows.append([float(x) for x in parts[1:]])
    if len(names) != count:
        raise ValueError(f"{path}: header announces {count} vectors, found {len(names)}")
    return EmbeddingMatrix(mode, tuple(names), np.array(rows, dtype=np.float64).reshape(count, dim))
