"""From-scratch classifiers over categorical feature vectors."""

from .base import (
    NEGATIVE,
    POSITIVE,
    Classifier,
    ModelSpec,
    encode_vector,
    encode_vectors,
    load_model,
    parse_model_list,
    parse_model_spec,
    save_model,
)
from .knn import KnnModel, knn_predict, knn_score
from .naive_bayes import NaiveBayesModel, nb_fit, nb_score
from .svm import LinearSvmModel, svm_fit, svm_predict, svm_score
from .tree import (
    DecisionTreeModel,
    TreeLeaf,
    TreeNode,
    TreeParams,
    TreeSplit,
    dt_fit,
    dt_predict,
    dt_score,
    entropy,
    gain_ratio,
)

__all__ = [
    "NEGATIVE",
    "POSITIVE",
    "Classifier",
    "ModelSpec",
    "encode_vector",
    "encode_vectors",
    "load_model",
    "parse_model_list",
    "parse_model_spec",
    "save_model",
    "KnnModel",
    "knn_predict",
    "knn_score",
    "NaiveBayesModel",
    "nb_fit",
    "nb_score",
    "LinearSvmModel",
    "svm_fit",
    "svm_predict",
    "svm_score",
    "DecisionTreeModel",
    "TreeLeaf",
    "TreeNode",
    "TreeParams",
    "TreeSplit",
    "dt_fit",
    "dt_predict",
    "dt_score",
    "entropy",
    "gain_ratio",
]
