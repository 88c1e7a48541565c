"""Linear SVM on one-hot features, trained by stochastic subgradient descent.

Each categorical feature expands to one indicator coordinate per category.
Training minimizes L2-regularized hinge loss with the 1/(lambda*t) step
schedule; the pass order is reshuffled each epoch by a seeded generator,
so fitting is deterministic given the seed. The bias is treated as one
more regularized coordinate with constant input 1, which keeps the huge
early steps of the 1/(lambda*t) schedule from letting it random-walk.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..features import FeatureCatalog, FeatureVector
from .base import NEGATIVE, POSITIVE, encode_vector, encode_vectors
from .tree import _catalog_from_obj, _catalog_to_obj

DEFAULT_LAMBDA = 1e-4
DEFAULT_EPOCHS = 50


def one_hot_offsets(catalog: FeatureCatalog) -> np.ndarray:
    """Start index of each feature's block in the one-hot layout."""
    sizes = [len(f.categories) for f in catalog.features]
    return np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)


@dataclass(frozen=True)
class LinearSvmModel:
    weights: np.ndarray  # one coordinate per (feature, category)
    bias: float
    catalog: FeatureCatalog
    lam: float
    epochs: int
    seed: int

    def predict(self, vector: FeatureVector) -> int:
        # Zero margin resolves to the negative class.
        return POSITIVE if self.score(vector) > 0 else NEGATIVE

    def score(self, vector: FeatureVector) -> float:
        return svm_score(self, vector)

    def to_json_obj(self) -> dict:
        return {
            "kind": "linear_svm",
            "lambda": self.lam,
            "epochs": self.epochs,
            "seed": self.seed,
            "bias": self.bias,
            "weights": self.weights.tolist(),
            "catalog": _catalog_to_obj(self.catalog),
        }

    @classmethod
    def from_json_obj(cls, doc: dict, base_dir=None) -> "LinearSvmModel":
        return cls(
            weights=np.asarray(doc["weights"], dtype=float),
            bias=float(doc["bias"]),
            catalog=_catalog_from_obj(doc["catalog"]),
            lam=float(doc["lambda"]),
            epochs=int(doc["epochs"]),
            seed=int(doc["seed"]),
        )


def svm_fit(
    vectors: Sequence[FeatureVector],
    labels: Sequence[int],
    catalog: FeatureCatalog,
    lam: float = DEFAULT_LAMBDA,
    epochs: int = DEFAULT_EPOCHS,
    seed: int = 0,
) -> LinearSvmModel:
    if len(vectors) == 0:
        raise ValueError("svm_fit on an empty training set")
    if lam <= 0:
        raise ValueError(f"lambda {lam} not positive")
    y = np.asarray(labels, dtype=np.int64)
    if set(np.unique(y)) != {NEGATIVE, POSITIVE}:
        raise ValueError("svm_fit needs both classes in the training set")
    codes = encode_vectors(vectors, catalog)
    if y.shape[0] != codes.shape[0]:
        raise ValueError("labels length != vectors length")
    offsets = one_hot_offsets(catalog)
    active = codes + offsets  # (n, n_features) one-hot indices per row
    dim = offsets[-1] + len(catalog.features[-1].categories)

    rng = np.random.default_rng(seed)
    w = np.zeros(int(dim))
    b = 0.0
    sign = np.where(y == POSITIVE, 1.0, -1.0)
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(len(vectors)):
            t += 1
            eta = 1.0 / (lam * t)
            idx = active[i]
            margin = sign[i] * (w[idx].sum() + b)
            shrink = 1.0 - eta * lam
            w *= shrink
            b *= shrink
            if margin < 1.0:
                w[idx] += eta * sign[i]
                b += eta * sign[i]
    return LinearSvmModel(
        weights=w, bias=b, catalog=catalog, lam=lam, epochs=epochs, seed=seed
    )


def svm_score(model: LinearSvmModel, vector: FeatureVector) -> float:
    """Signed margin of one vector."""
    codes = encode_vector(vector, model.catalog)
    idx = codes + one_hot_offsets(model.catalog)
    return float(model.weights[idx].sum() + model.bias)


def svm_predict(model: LinearSvmModel, vector: FeatureVector) -> int:
    return model.predict(vector)
