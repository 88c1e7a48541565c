"""Rendering: the model-comparison table and annotated decision trees.

The comparison table mirrors the published layout (accuracy, recall, and
precision as one-decimal percentages; F measure and AUC to two decimals).
Trees are annotated by routing a dataset through them and accumulating
per-node class counts, then exported as DOT graphs or indented text with
node-level readmission percentages, the shape of the per-age-band
subgroup analyses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .evaluation import EvaluationResult
from .features import FeatureCatalog, FeatureVector
from .models.base import NEGATIVE, POSITIVE, encode_vector
from .models.tree import (
    DecisionTreeModel,
    TreeLeaf,
    TreeNode,
    TreeParams,
    TreeSplit,
    dt_fit,
)

CLASS_NAMES = {NEGATIVE: "single admission", POSITIVE: "readmitted"}

_COLUMNS = ("Accuracy", "Recall", "Precision", "F Measure", "AUC")


def _format_cells(result: EvaluationResult) -> tuple[str, ...]:
    return (
        f"{100 * result.accuracy:.1f}",
        f"{100 * result.recall:.1f}",
        f"{100 * result.precision:.1f}",
        f"{result.f_measure:.2f}",
        f"{result.auc:.2f}",
    )


def render_comparison(results: Sequence[EvaluationResult]) -> str:
    """Fixed-column text table, one row per result in input order."""
    if not results:
        raise ValueError("render_comparison with no results")
    name_width = max(len("Model"), *(len(r.model_name) for r in results))
    widths = [max(len(c), 9) for c in _COLUMNS]
    lines = [
        "Model".ljust(name_width)
        + "".join(c.rjust(w + 2) for c, w in zip(_COLUMNS, widths))
    ]
    for result in results:
        cells = _format_cells(result)
        lines.append(
            result.model_name.ljust(name_width)
            + "".join(c.rjust(w + 2) for c, w in zip(cells, widths))
        )
    return "\n".join(lines) + "\n"


def comparison_rows(results: Sequence[EvaluationResult]) -> list[dict]:
    """Machine-readable variant of the comparison table."""
    return [
        {
            "model": r.model_name,
            "accuracy": r.accuracy,
            "recall": r.recall,
            "precision": r.precision,
            "f_measure": r.f_measure,
            "auc": r.auc,
        }
        for r in results
    ]


@dataclass
class AnnotatedNode:
    """Tree node plus the class counts of the records routed through it."""

    n: int
    counts: tuple[int, int]  # (single admission, readmitted)
    split_feature: str | None = None
    leaf_label: int | None = None
    children: dict[str, "AnnotatedNode"] = field(default_factory=dict)

    @property
    def percent_single_admission(self) -> float | None:
        return 100.0 * self.counts[NEGATIVE] / self.n if self.n else None

    @property
    def percent_readmitted(self) -> float | None:
        return 100.0 * self.counts[POSITIVE] / self.n if self.n else None


@dataclass(frozen=True)
class AnnotatedTree:
    root: AnnotatedNode
    model: DecisionTreeModel


def _pct(value: float | None) -> str:
    # Empty nodes print an em dash rather than implying a measured zero.
    return "—" if value is None else f"{value:.1f}%"


def annotate_tree(
    model: DecisionTreeModel,
    vectors: Sequence[FeatureVector],
    labels: Sequence[int],
) -> AnnotatedTree:
    """Route every record through the tree, accumulating per-node counts.

    Annotation covers the model's full structure: nodes no record reaches
    keep n = 0 and render their percentages as an em dash.
    """

    def skeleton(node: TreeNode) -> AnnotatedNode:
        if isinstance(node, TreeLeaf):
            return AnnotatedNode(n=0, counts=(0, 0), leaf_label=node.label)
        return AnnotatedNode(
            n=0,
            counts=(0, 0),
            split_feature=node.feature_name,
            children={
                token: skeleton(child) for token, child in node.children.items()
            },
        )

    root = skeleton(model.root)
    for vector, label in zip(vectors, labels):
        encode_vector(vector, model.catalog)
        node, annotated = model.root, root
        while True:
            annotated.n += 1
            neg, pos = annotated.counts
            annotated.counts = (
                (neg + 1, pos) if label == NEGATIVE else (neg, pos + 1)
            )
            if isinstance(node, TreeLeaf):
                break
            token = vector[node.feature_index]
            child = node.children.get(token)
            if child is None:
                child = node.route(token)
                token = next(
                    t for t, c in node.children.items() if c is child
                )
            node = child
            annotated = annotated.children[token]
    return AnnotatedTree(root=root, model=model)


def subgroup_trees(
    vectors: Sequence[FeatureVector],
    labels: Sequence[int],
    catalog: FeatureCatalog,
    by: str,
    params: TreeParams = TreeParams(),
) -> dict[str, AnnotatedTree]:
    """One annotated tree per category of the partition feature.

    The dataset is split by the feature's categories; each nonempty
    subgroup gets its own tree fitted without the partition feature among
    the candidates, mirroring the per-age-band analyses.
    """
    j = catalog.index_of(by)
    reduced = catalog.drop(by)
    out: dict[str, AnnotatedTree] = {}
    for token in catalog.features[j].categories:
        rows = [i for i, v in enumerate(vectors) if v[j] == token]
        if not rows:
            continue
        sub_vectors = [vectors[i][:j] + vectors[i][j + 1 :] for i in rows]
        sub_labels = [labels[i] for i in rows]
        model = dt_fit(sub_vectors, sub_labels, reduced, params)
        out[token] = annotate_tree(model, sub_vectors, sub_labels)
    return out


def _node_label(node: AnnotatedNode) -> str:
    if node.split_feature is not None:
        head = node.split_feature
    else:
        head = CLASS_NAMES[node.leaf_label]
    return (
        f"{head}\\nn={node.n}\\n"
        f"single {_pct(node.percent_single_admission)} / "
        f"readmit {_pct(node.percent_readmitted)}"
    )


def export_tree_dot(tree: AnnotatedTree, graph_name: str = "readmission_tree") -> str:
    """DOT digraph of an annotated tree; byte-deterministic for a tree."""
    lines = [f"digraph {graph_name} {{", "  node [shape=box];"]
    counter = 0

    def walk(node: AnnotatedNode) -> int:
        nonlocal counter
        my_id = counter
        counter += 1
        label = _node_label(node).replace('"', '\\"')
        lines.append(f'  n{my_id} [label="{label}"];')
        for token, child in node.children.items():
            child_id = walk(child)
            edge = token.replace('"', '\\"')
            lines.append(f'  n{my_id} -> n{child_id} [label="{edge}"];')
        return my_id

    walk(tree.root)
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_tree_text(tree: AnnotatedTree) -> str:
    """Indented plain-text rendering for terminals."""
    lines: list[str] = []

    def walk(node: AnnotatedNode, prefix: str) -> None:
        if node.split_feature is not None:
            head = f"[{node.split_feature}]"
        else:
            head = CLASS_NAMES[node.leaf_label]
        lines.append(
            f"{prefix}{head}  n={node.n}  "
            f"single {_pct(node.percent_single_admission)} / "
            f"readmit {_pct(node.percent_readmitted)}"
        )
        for token, child in node.children.items():
            lines.append(f"{prefix}  {node.split_feature} = {token}:")
            walk(child, prefix + "    ")

    walk(tree.root, "")
    return "\n".join(lines) + "\n"
