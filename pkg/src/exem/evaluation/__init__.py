from .logistic import LogisticRegressionGD, OneVsRestLogistic
from .metrics import auc, dcg_at_k, f1_scores, ndcg_at_k
from .operators import EDGE_OPERATORS, edge_feature
from .report import EvalReport, read_report
from .tasks import (RankedList, evaluate_classification, evaluate_link_prediction, nearest,
                    recommend, sample_non_edges, topic_centroid)

__all__ = [
    "EDGE_OPERATORS", "EvalReport", "LogisticRegressionGD", "OneVsRestLogistic", "RankedList",
    "auc", "dcg_at_k", "edge_feature", "evaluate_classification", "evaluate_link_prediction",
    "f1_scores", "ndcg_at_k", "nearest", "read_report", "recommend", "sample_non_edges",
    "topic_centroid",
]
