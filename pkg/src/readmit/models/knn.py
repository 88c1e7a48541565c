"""k-nearest neighbors under overlap (Hamming) distance.

All features are categorical, so the distance between two vectors is the
number of positions where they disagree. Neighbor ties on distance break
toward earlier training rows; a tied vote resolves to the negative class.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..features import FeatureCatalog, FeatureVector
from .base import NEGATIVE, POSITIVE, encode_vector, encode_vectors


@dataclass(frozen=True)
class KnnModel:
    codes: np.ndarray  # (n, n_features) training category codes
    labels: np.ndarray  # (n,) 0/1
    k: int
    catalog: FeatureCatalog
    # Where the memorized training matrix lives, for serialization; the
    # model file stores this reference instead of inlining the matrix.
    training_ref: str | None = None

    @classmethod
    def fit(
        cls,
        vectors: Sequence[FeatureVector],
        labels: Sequence[int],
        catalog: FeatureCatalog,
        k: int,
        training_ref: str | None = None,
    ) -> "KnnModel":
        if len(vectors) == 0:
            raise ValueError("knn fit on an empty training set")
        if not 1 <= k <= len(vectors):
            raise ValueError(f"k {k} outside [1, {len(vectors)}]")
        codes = encode_vectors(vectors, catalog)
        y = np.asarray(labels, dtype=np.int64)
        if y.shape[0] != codes.shape[0]:
            raise ValueError("labels length != vectors length")
        return cls(
            codes=codes, labels=y, k=k, catalog=catalog, training_ref=training_ref
        )

    def predict(self, vector: FeatureVector) -> int:
        return knn_predict(self, vector)

    def score(self, vector: FeatureVector) -> float:
        return knn_score(self, vector)

    def to_json_obj(self) -> dict:
        if self.training_ref is None:
            raise ValueError(
                "knn model has no training_ref; save the feature matrix first"
            )
        return {"kind": "knn", "k": self.k, "training_ref": self.training_ref}

    @classmethod
    def from_json_obj(cls, doc: dict, base_dir=None) -> "KnnModel":
        from ..io import load_feature_matrix

        ref = doc["training_ref"]
        path = Path(ref)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        vectors, catalog, labels = load_feature_matrix(path)
        return cls.fit(
            vectors, labels, catalog, k=int(doc["k"]), training_ref=ref
        )


def _neighbor_labels(model: KnnModel, vector: FeatureVector) -> np.ndarray:
    query = encode_vector(vector, model.catalog)
    distances = (model.codes != query).sum(axis=1)
    # Stable sort keeps training-set index order within equal distances.
    order = np.argsort(distances, kind="stable")
    return model.labels[order[: model.k]]


def knn_predict(model: KnnModel, vector: FeatureVector) -> int:
    """Majority label among the k nearest; a tied vote is negative."""
    votes = _neighbor_labels(model, vector)
    pos = int(votes.sum())
    return POSITIVE if 2 * pos > model.k else NEGATIVE


def knn_score(model: KnnModel, vector: FeatureVector) -> float:
    """Positive fraction among the k nearest."""
    votes = _neighbor_labels(model, vector)
    return float(votes.sum() / model.k)
