"""Stratified k-fold cross-validation and the comparison metrics.

Every model family is evaluated identically: records are dealt into
stratified folds, each fold is predicted by a model fitted on the other
folds, and the held-out predictions are pooled into a single confusion
matrix and score list from which accuracy, recall, precision, F measure,
and AUC are computed. The positive class is readmission throughout, so
recall is sensitivity to readmission.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .features import FeatureCatalog, FeatureVector
from .models.base import POSITIVE, ModelSpec


@dataclass(frozen=True)
class FoldAssignment:
    fold_of: np.ndarray  # fold index per record
    k: int
    seed: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != fold)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @classmethod
    def from_predictions(
        cls, predictions: Sequence[int], labels: Sequence[int]
    ) -> "ConfusionMatrix":
        pred = np.asarray(predictions, dtype=np.int64)
        y = np.asarray(labels, dtype=np.int64)
        if pred.shape != y.shape:
            raise ValueError("predictions and labels differ in length")
        return cls(
            tp=int(((pred == 1) & (y == 1)).sum()),
            fp=int(((pred == 1) & (y == 0)).sum()),
            fn=int(((pred == 0) & (y == 1)).sum()),
            tn=int(((pred == 0) & (y == 0)).sum()),
        )


@dataclass(frozen=True)
class EvaluationResult:
    model_name: str
    confusion: ConfusionMatrix
    accuracy: float
    recall: float
    precision: float
    f_measure: float
    auc: float


def stratified_folds(
    labels: Sequence[int], k: int = 10, seed: int = 0
) -> FoldAssignment:
    """Deal records into k folds, preserving class balance to within one.

    Within each class, record indices are shuffled by the seeded generator
    and dealt round-robin, so per-fold class counts differ from exact
    proportionality by at most one.
    """
    y = np.asarray(labels, dtype=np.int64)
    if k < 2:
        raise ValueError(f"k {k} < 2")
    rng = np.random.default_rng(seed)
    fold_of = np.full(len(y), -1, dtype=np.int64)
    for cls in (0, 1):
        members = np.flatnonzero(y == cls)
        if len(members) < k:
            raise ValueError(
                f"class {cls} has {len(members)} records, fewer than k={k}"
            )
        rng.shuffle(members)
        fold_of[members] = np.arange(len(members)) % k
    return FoldAssignment(fold_of=fold_of, k=k, seed=seed)


def metrics(cm: ConfusionMatrix) -> tuple[float, float, float, float]:
    """(accuracy, precision, recall, f_measure) with zero-denominator
    conventions: a ratio with an empty denominator is 0."""
    if cm.total == 0:
        raise ValueError("metrics of an empty confusion matrix")
    accuracy = (cm.tp + cm.tn) / cm.total
    precision = cm.tp / (cm.tp + cm.fp) if cm.tp + cm.fp > 0 else 0.0
    recall = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn > 0 else 0.0
    f_measure = f_score(precision, recall)
    return accuracy, precision, recall, f_measure


def f_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def roc_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Probability a random positive outscores a random negative, ties half.

    Computed by the rank (Mann-Whitney) formulation with average ranks for
    ties, which equals the trapezoidal area under the ROC curve.
    """
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=np.int64)
    if s.shape != y.shape:
        raise ValueError("scores and labels differ in length")
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_auc needs both classes present")
    ranks = rankdata(s, method="average")
    pos_rank_sum = float(ranks[y == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


def cross_validate(
    vectors: Sequence[FeatureVector],
    labels: Sequence[int],
    catalog: FeatureCatalog,
    spec: ModelSpec,
    k: int = 10,
    seed: int = 0,
) -> EvaluationResult:
    """Pooled k-fold evaluation of one model spec.

    Each fold's model is fitted on the remaining folds; held-out
    predictions and scores are pooled over all folds before computing the
    metrics, so every record contributes exactly once.
    """
    y = np.asarray(labels, dtype=np.int64)
    folds = stratified_folds(labels, k=k, seed=seed)
    predictions = np.full(len(y), -1, dtype=np.int64)
    scores = np.zeros(len(y))
    for fold in range(k):
        train_idx = folds.train_indices(fold)
        test_idx = folds.test_indices(fold)
        model = spec.fit(
            [vectors[i] for i in train_idx],
            y[train_idx],
            catalog,
            # Per-fold fitting seed, derived so reruns are reproducible.
            seed=seed * 1_000_003 + fold,
        )
        for i in test_idx:
            predictions[i] = model.predict(vectors[i])
            scores[i] = model.score(vectors[i])
    cm = ConfusionMatrix.from_predictions(predictions, y)
    accuracy, precision, recall, f_measure = metrics(cm)
    return EvaluationResult(
        model_name=spec.name,
        confusion=cm,
        accuracy=accuracy,
        recall=recall,
        precision=precision,
        f_measure=f_measure,
        auc=roc_auc(scores, y),
    )


def majority_baseline_accuracy(labels: Sequence[int]) -> float:
    """Accuracy of always predicting the larger class."""
    y = np.asarray(labels, dtype=np.int64)
    if len(y) == 0:
        raise ValueError("empty labels")
    pos = int((y == POSITIVE).sum())
    return max(pos, len(y) - pos) / len(y)
