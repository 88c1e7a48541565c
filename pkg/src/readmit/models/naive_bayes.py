"""Categorical naive Bayes with add-alpha smoothing.

Class priors come from unsmoothed class counts; per-feature category
likelihoods are smoothed over the catalog's full category set, so tokens
never seen in training still receive finite probability. Posteriors are
computed in log space and normalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..features import FeatureCatalog, FeatureVector
from .base import NEGATIVE, POSITIVE, encode_vector, encode_vectors
from .tree import _catalog_from_obj, _catalog_to_obj


@dataclass(frozen=True)
class NaiveBayesModel:
    class_counts: tuple[int, int]  # (single admission, readmitted)
    # count_tables[j][class] is the category-count vector of feature j.
    count_tables: tuple[np.ndarray, ...]
    catalog: FeatureCatalog
    alpha: float

    def predict(self, vector: FeatureVector) -> int:
        # A posterior of exactly one half resolves to the negative class.
        return POSITIVE if self.score(vector) > 0.5 else NEGATIVE

    def score(self, vector: FeatureVector) -> float:
        return nb_score(self, vector)

    def to_json_obj(self) -> dict:
        return {
            "kind": "naive_bayes",
            "alpha": self.alpha,
            "class_counts": list(self.class_counts),
            "count_tables": [table.tolist() for table in self.count_tables],
            "catalog": _catalog_to_obj(self.catalog),
        }

    @classmethod
    def from_json_obj(cls, doc: dict, base_dir=None) -> "NaiveBayesModel":
        neg, pos = doc["class_counts"]
        return cls(
            class_counts=(int(neg), int(pos)),
            count_tables=tuple(
                np.asarray(table, dtype=np.int64) for table in doc["count_tables"]
            ),
            catalog=_catalog_from_obj(doc["catalog"]),
            alpha=float(doc["alpha"]),
        )


def nb_fit(
    vectors: Sequence[FeatureVector],
    labels: Sequence[int],
    catalog: FeatureCatalog,
    alpha: float = 1.0,
) -> NaiveBayesModel:
    if len(vectors) == 0:
        raise ValueError("nb_fit on an empty training set")
    if alpha <= 0:
        raise ValueError(f"alpha {alpha} not positive")
    codes = encode_vectors(vectors, catalog)
    y = np.asarray(labels, dtype=np.int64)
    if y.shape[0] != codes.shape[0]:
        raise ValueError("labels length != vectors length")
    pos = int(y.sum())
    class_counts = (len(y) - pos, pos)
    tables = []
    for j, feature in enumerate(catalog.features):
        k = len(feature.categories)
        table = np.zeros((2, k), dtype=np.int64)
        for cls in (NEGATIVE, POSITIVE):
            table[cls] = np.bincount(codes[y == cls, j], minlength=k)
        tables.append(table)
    return NaiveBayesModel(
        class_counts=class_counts,
        count_tables=tuple(tables),
        catalog=catalog,
        alpha=alpha,
    )


def nb_score(model: NaiveBayesModel, vector: FeatureVector) -> float:
    """Posterior probability of readmission for one vector."""
    codes = encode_vector(vector, model.catalog)
    total = sum(model.class_counts)
    log_joint = []
    for cls in (NEGATIVE, POSITIVE):
        class_count = model.class_counts[cls]
        if class_count == 0:
            log_joint.append(-math.inf)
            continue
        value = math.log(class_count / total)
        for j, feature in enumerate(model.catalog.features):
            k = len(feature.categories)
            count = model.count_tables[j][cls, codes[j]]
            value += math.log(
                (count + model.alpha) / (class_count + model.alpha * k)
            )
        log_joint.append(value)
    # Normalize in log space; at least one class has training mass.
    peak = max(log_joint)
    weights = [math.exp(v - peak) for v in log_joint]
    return weights[POSITIVE] / (weights[NEGATIVE] + weights[POSITIVE])
