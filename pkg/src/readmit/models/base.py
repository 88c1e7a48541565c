"""Shared plumbing for the four classifier families.

All models consume categorical feature vectors. Internally they work on
integer category codes computed against a catalog, so encoding lives here,
together with model-spec parsing ("dt", "nb", "knn:<k>", "svm") and the
structured-text serialization entry points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from ..features import FeatureCatalog, FeatureVector

NEGATIVE = 0  # single admission
POSITIVE = 1  # readmitted


class Classifier(Protocol):
    """Fitted model: hard labels plus a real-valued risk score."""

    def predict(self, vector: FeatureVector) -> int: ...

    def score(self, vector: FeatureVector) -> float: ...


def encode_vector(vector: FeatureVector, catalog: FeatureCatalog) -> np.ndarray:
    """Integer category codes of one vector, validated against the catalog."""
    if len(vector) != len(catalog.features):
        raise ValueError(
            f"vector width {len(vector)} != catalog width {len(catalog.features)}"
        )
    codes = np.empty(len(vector), dtype=np.int64)
    for j, (token, feature) in enumerate(zip(vector, catalog.features)):
        try:
            codes[j] = feature.categories.index(token)
        except ValueError:
            raise ValueError(
                f"token {token!r} not a category of feature {feature.name!r}"
            ) from None
    return codes


def encode_vectors(
    vectors: Sequence[FeatureVector], catalog: FeatureCatalog
) -> np.ndarray:
    """Code matrix (n, n_features) for a batch of vectors."""
    out = np.empty((len(vectors), len(catalog.features)), dtype=np.int64)
    for i, vector in enumerate(vectors):
        out[i] = encode_vector(vector, catalog)
    return out


@dataclass(frozen=True)
class ModelSpec:
    """Parsed model specification: family name plus its parameter."""

    name: str
    family: str
    k: int | None = None

    def fit(
        self,
        vectors: Sequence[FeatureVector],
        labels: Sequence[int],
        catalog: FeatureCatalog,
        seed: int = 0,
    ):
        from .knn import KnnModel
        from .naive_bayes import nb_fit
        from .svm import svm_fit
        from .tree import dt_fit

        if self.family == "dt":
            return dt_fit(vectors, labels, catalog)
        if self.family == "nb":
            return nb_fit(vectors, labels, catalog)
        if self.family == "knn":
            assert self.k is not None
            return KnnModel.fit(vectors, labels, catalog, k=self.k)
        if self.family == "svm":
            return svm_fit(vectors, labels, catalog, seed=seed)
        raise ValueError(f"unknown model family {self.family!r}")


def parse_model_spec(text: str) -> ModelSpec:
    """Parse one spec token: dt | nb | knn:<k> | svm."""
    text = text.strip()
    if text in ("dt", "nb", "svm"):
        return ModelSpec(name=text, family=text)
    if text.startswith("knn:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"malformed k in model spec {text!r}") from None
        if k < 1:
            raise ValueError(f"k must be >= 1 in model spec {text!r}")
        return ModelSpec(name=text, family="knn", k=k)
    raise ValueError(f"unknown model spec {text!r}")


def parse_model_list(text: str) -> list[ModelSpec]:
    """Parse a comma-separated model list, e.g. "dt,nb,knn:2,svm"."""
    specs = [parse_model_spec(part) for part in text.split(",") if part.strip()]
    if not specs:
        raise ValueError("empty model list")
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate model specs in {text!r}")
    return specs


def save_model(model, path: str | Path) -> None:
    """Write any fitted model as a structured text (JSON) document."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(model.to_json_obj(), handle, indent=2)
        handle.write("\n")


def load_model(path: str | Path):
    """Load a model saved by ``save_model``; dispatches on its kind."""
    from .knn import KnnModel
    from .naive_bayes import NaiveBayesModel
    from .svm import LinearSvmModel
    from .tree import DecisionTreeModel

    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    kinds = {
        "decision_tree": DecisionTreeModel,
        "naive_bayes": NaiveBayesModel,
        "knn": KnnModel,
        "linear_svm": LinearSvmModel,
    }
    kind = doc.get("kind")
    if kind not in kinds:
        raise ValueError(f"unknown model kind {kind!r}")
    return kinds[kind].from_json_obj(doc, base_dir=Path(path).parent)
