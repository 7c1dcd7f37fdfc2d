from .embeddings import EmbeddingMatrix, combine, cover_nodes, read_embeddings, write_embeddings
from .ngrams import char_ngrams, fnv1a_32, ngram_decompose
from .trainer import (TrainConfig, corpus_sentences, pair_loss_grad, positive_pairs,
                      sgd_step, train, train_with_history)
from .vocab import Vocabulary, build_vocab

__all__ = [
    "EmbeddingMatrix", "TrainConfig", "Vocabulary", "build_vocab", "char_ngrams", "combine",
    "corpus_sentences", "cover_nodes", "fnv1a_32", "ngram_decompose", "pair_loss_grad", "positive_pairs",
    "read_embeddings", "sgd_step", "train", "train_with_history", "write_embeddings",
]
