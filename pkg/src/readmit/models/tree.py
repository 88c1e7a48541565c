"""Multiway categorical decision tree selected by gain ratio.

Splits are multiway: one child per category observed at the node, so each
feature is used at most once on any root-to-leaf path. Split selection
maximizes gain ratio (information gain over split information) among
admissible splits, where admissible means at least two branches receive
min_leaf cases. Recursion stops on purity, feature exhaustion, the depth
cap, nodes too small to split, or a best ratio below the floor. No
post-pruning: the stopping rules are the complexity control.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..features import Feature, FeatureCatalog, FeatureVector
from .base import NEGATIVE, POSITIVE, encode_vector, encode_vectors


def entropy(distribution: Sequence[float]) -> float:
    """Shannon entropy in bits of a nonnegative count distribution."""
    counts = np.asarray(distribution, dtype=float)
    if counts.size == 0:
        raise ValueError("entropy of an empty distribution")
    if (counts < 0).any():
        raise ValueError("negative count in distribution")
    total = counts.sum()
    if total <= 0:
        raise ValueError("entropy of a zero-total distribution")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def gain_ratio(
    parent_counts: Sequence[float],
    child_counts: Sequence[Sequence[float]],
) -> float:
    """Information gain of a split divided by its split information.

    ``child_counts`` is one class-count row per branch and must partition
    the parent counts. Returns 0 when split information is 0 (all mass in
    one branch).
    """
    parent = np.asarray(parent_counts, dtype=float)
    children = np.asarray(child_counts, dtype=float)
    if children.ndim != 2 or children.shape[1] != parent.shape[0]:
        raise ValueError("child counts shaped inconsistently with parent")
    if not np.allclose(children.sum(axis=0), parent, rtol=1e-9, atol=1e-9):
        raise ValueError("children do not partition parent counts")
    total = parent.sum()
    sizes = children.sum(axis=1)
    split_info = entropy(sizes)
    if split_info <= 0:
        return 0.0
    children_entropy = 0.0
    for row, size in zip(children, sizes):
        if size > 0:
            children_entropy += (size / total) * entropy(row)
    # Float cancellation can leave the (mathematically nonnegative) gain
    # a hair below zero; clamp so a zero floor never stops growth early.
    gain = max(entropy(parent) - children_entropy, 0.0)
    return float(gain / split_info)


@dataclass(frozen=True)
class TreeParams:
    min_leaf: int = 20
    max_depth: int | None = 12
    min_gain_ratio: float = 1e-6


@dataclass(frozen=True)
class TreeLeaf:
    counts: tuple[int, int]  # (single admission, readmitted)

    @property
    def label(self) -> int:
        # Tie resolves to the negative (single admission) class.
        return POSITIVE if self.counts[POSITIVE] > self.counts[NEGATIVE] else NEGATIVE

    @property
    def score(self) -> float:
        """Laplace-smoothed positive fraction."""
        neg, pos = self.counts
        return (pos + 1) / (neg + pos + 2)


@dataclass(frozen=True)
class TreeSplit:
    feature_index: int
    feature_name: str
    counts: tuple[int, int]
    children: dict[str, "TreeNode"] = field(compare=False)

    def route(self, token: str) -> "TreeNode":
        """Child for a category token; unseen tokens go to the largest child."""
        child = self.children.get(token)
        if child is not None:
            return child
        return max(self.children.values(), key=lambda c: sum(_counts(c)))


TreeNode = TreeLeaf | TreeSplit


def _counts(node: TreeNode) -> tuple[int, int]:
    return node.counts


@dataclass(frozen=True)
class DecisionTreeModel:
    root: TreeNode
    catalog: FeatureCatalog
    params: TreeParams

    def predict(self, vector: FeatureVector) -> int:
        return dt_predict(self, vector)

    def score(self, vector: FeatureVector) -> float:
        return dt_score(self, vector)

    def to_json_obj(self) -> dict:
        def encode(node: TreeNode) -> dict:
            if isinstance(node, TreeLeaf):
                return {"type": "leaf", "counts": list(node.counts)}
            return {
                "type": "split",
                "feature": node.feature_name,
                "feature_index": node.feature_index,
                "counts": list(node.counts),
                "children": {
                    token: encode(child) for token, child in node.children.items()
                },
            }

        return {
            "kind": "decision_tree",
            "params": {
                "min_leaf": self.params.min_leaf,
                "max_depth": self.params.max_depth,
                "min_gain_ratio": self.params.min_gain_ratio,
            },
            "catalog": _catalog_to_obj(self.catalog),
            "root": encode(self.root),
        }

    @classmethod
    def from_json_obj(cls, doc: dict, base_dir=None) -> "DecisionTreeModel":
        def decode(node: dict) -> TreeNode:
            if node["type"] == "leaf":
                neg, pos = node["counts"]
                return TreeLeaf((int(neg), int(pos)))
            neg, pos = node["counts"]
            return TreeSplit(
                feature_index=int(node["feature_index"]),
                feature_name=node["feature"],
                counts=(int(neg), int(pos)),
                children={
                    token: decode(child)
                    for token, child in node["children"].items()
                },
            )

        params = TreeParams(
            min_leaf=int(doc["params"]["min_leaf"]),
            max_depth=(
                None
                if doc["params"]["max_depth"] is None
                else int(doc["params"]["max_depth"])
            ),
            min_gain_ratio=float(doc["params"]["min_gain_ratio"]),
        )
        return cls(
            root=decode(doc["root"]),
            catalog=_catalog_from_obj(doc["catalog"]),
            params=params,
        )


def _catalog_to_obj(catalog: FeatureCatalog) -> dict:
    return {
        "support_threshold": catalog.support_threshold,
        "features": [
            {"name": f.name, "kind": f.kind, "categories": list(f.categories)}
            for f in catalog.features
        ],
    }


def _catalog_from_obj(doc: dict) -> FeatureCatalog:
    return FeatureCatalog(
        tuple(
            Feature(f["name"], f["kind"], tuple(f["categories"]))
            for f in doc["features"]
        ),
        float(doc["support_threshold"]),
    )


def _node_class_counts(labels: np.ndarray) -> tuple[int, int]:
    pos = int(labels.sum())
    return (len(labels) - pos, pos)


def dt_fit(
    vectors: Sequence[FeatureVector],
    labels: Sequence[int],
    catalog: FeatureCatalog,
    params: TreeParams = TreeParams(),
) -> DecisionTreeModel:
    """Grow a tree by recursive gain-ratio splitting.

    Deterministic: ties between equally good features resolve to the lower
    catalog index, and children are laid out in catalog category order.
    """
    if len(vectors) == 0:
        raise ValueError("dt_fit on an empty training set")
    codes = encode_vectors(vectors, catalog)
    y = np.asarray(labels, dtype=np.int64)
    if y.shape[0] != codes.shape[0]:
        raise ValueError("labels length != vectors length")
    n_features = len(catalog.features)
    category_counts = [len(f.categories) for f in catalog.features]

    def best_split(idx: np.ndarray, used: frozenset[int]) -> tuple[int, float]:
        parent = np.bincount(y[idx], minlength=2)
        best_j, best_ratio = -1, -1.0
        for j in range(n_features):
            if j in used:
                continue
            k = category_counts[j]
            table = np.bincount(
                codes[idx, j] * 2 + y[idx], minlength=2 * k
            ).reshape(k, 2)
            # A split must leave at least two branches with min_leaf cases;
            # otherwise chains of skewed splits carve single-digit leaves.
            if int((table.sum(axis=1) >= params.min_leaf).sum()) < 2:
                continue
            ratio = gain_ratio(parent, table)
            if ratio > best_ratio:
                best_j, best_ratio = j, ratio
        return best_j, best_ratio

    def build(idx: np.ndarray, used: frozenset[int], depth: int) -> TreeNode:
        counts = _node_class_counts(y[idx])
        pure = counts[NEGATIVE] == 0 or counts[POSITIVE] == 0
        at_depth = params.max_depth is not None and depth >= params.max_depth
        too_small = len(idx) < 2 * params.min_leaf
        if pure or at_depth or too_small or len(used) == n_features:
            return TreeLeaf(counts)
        j, ratio = best_split(idx, used)
        if j < 0 or ratio < params.min_gain_ratio:
            return TreeLeaf(counts)
        children: dict[str, TreeNode] = {}
        child_used = used | {j}
        column = codes[idx, j]
        for code, token in enumerate(catalog.features[j].categories):
            sub = idx[column == code]
            if len(sub) == 0:
                continue
            children[token] = build(sub, child_used, depth + 1)
        return TreeSplit(
            feature_index=j,
            feature_name=catalog.features[j].name,
            counts=counts,
            children=children,
        )

    root = build(np.arange(len(vectors)), frozenset(), 0)
    return DecisionTreeModel(root=root, catalog=catalog, params=params)


def _route_to_leaf(model: DecisionTreeModel, vector: FeatureVector) -> TreeLeaf:
    # Validates the vector against the catalog before routing.
    encode_vector(vector, model.catalog)
    node = model.root
    while isinstance(node, TreeSplit):
        node = node.route(vector[node.feature_index])
    return node


def dt_predict(model: DecisionTreeModel, vector: FeatureVector) -> int:
    """Majority label of the leaf the vector routes to."""
    return _route_to_leaf(model, vector).label


def dt_score(model: DecisionTreeModel, vector: FeatureVector) -> float:
    """Laplace-smoothed readmission fraction of the routed leaf."""
    return _route_to_leaf(model, vector).score
