"""Binary operators turning two node vectors into an edge feature vector."""
import numpy as np

EDGE_OPERATORS = ("average", "hadamard", "weighted-l1", "weighted-l2")


def edge_feature(u, v, op: str = "hadamard") -> np.ndarray:
    """Elementwise edge feature; works on single vectors or row-aligned batches."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    if op == "average":
        return (u + v) / 2.0
    if op == "hadamard":
        return u * v
    if op == "weighted-l1":
        return np.abs(u - v)
    if op == "weighted-l2":
        return (u - v) ** 2
    raise ValueError(f"unknown edge operator {op!r}; choose from {EDGE_OPERATORS}")
