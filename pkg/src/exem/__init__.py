"""Graph embeddings from dominating-set constrained random walks and skip-gram."""
from .domset import DominatingSet, find_dominating_set, verify_dominating_set
from .estimator import ConstantEmbedder, ExEm
from .graph import Graph, LabelMap, SbmSpec, generate_sbm, load_graph, load_labels
from .skipgram import EmbeddingMatrix, TrainConfig, combine, train
from .walker import WalkConfig, WalkCorpus, generate_walks, update_walks_incremental, walk_stats

__version__ = "0.1.0"

__all__ = [
    "ConstantEmbedder", "DominatingSet", "EmbeddingMatrix", "ExEm", "Graph", "LabelMap",
    "SbmSpec", "TrainConfig", "WalkConfig", "WalkCorpus", "combine", "find_dominating_set",
    "generate_sbm", "generate_walks", "load_graph", "load_labels", "train",
    "update_walks_incremental", "verify_dominating_set", "walk_stats",
]
