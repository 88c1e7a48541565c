"""Command-line front end for the readmission pipeline.

Subcommands chain through files: ``synth`` writes a cohort, ``featurize``
turns it into a feature matrix plus catalog, ``evaluate`` cross-validates
a model list into a comparison report, and ``tree``/``subgroup`` export
annotated decision trees as DOT. Exit status is 0 on success, 1 on usage
errors, 2 on data or validation errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import io as rio
from .evaluation import cross_validate
from .models.base import parse_model_list
from .models.tree import TreeParams, dt_fit
from .reporting import (
    annotate_tree,
    export_tree_dot,
    render_comparison,
    subgroup_trees,
)
from .synth import CohortProfile, cohort_summary, generate_cohort, load_profile

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage problems; this pipeline reserves 2
    # for data errors, so remap while keeping the one-line diagnostic.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="readmit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    synth = sub.add_parser("synth", help="generate a synthetic cohort file")
    synth.add_argument("--n", type=int, default=None, help="cohort size")
    synth.add_argument(
        "--prevalence", type=float, default=None, help="readmission prevalence"
    )
    synth.add_argument("--seed", type=int, default=None, help="generator seed")
    synth.add_argument("--out", required=True, help="cohort file to write")
    synth.add_argument(
        "--profile", default=None, help="JSON profile file; flags override it"
    )
    synth.add_argument(
        "--summary",
        action="store_true",
        help="print realized cohort statistics after writing",
    )

    feat = sub.add_parser("featurize", help="build a feature matrix and catalog")
    feat.add_argument("--in", dest="input", required=True, help="cohort file")
    feat.add_argument(
        "--threshold",
        type=float,
        default=0.05,
        help="tag support threshold in [0, 1)",
    )
    feat.add_argument("--out", required=True, help="feature matrix to write")
    feat.add_argument("--catalog", required=True, help="catalog file to write")

    ev = sub.add_parser("evaluate", help="cross-validate models into a report")
    ev.add_argument("--features", required=True, help="feature matrix file")
    ev.add_argument(
        "--models",
        default="dt,nb,knn:2,knn:5,knn:10,svm",
        help="comma-separated specs from dt, nb, knn:<k>, svm",
    )
    ev.add_argument("--folds", type=int, default=10, help="cross-validation folds")
    ev.add_argument("--seed", type=int, default=0, help="fold and fitting seed")
    ev.add_argument("--report", required=True, help="comparison report to write")

    tree = sub.add_parser("tree", help="export the full-data annotated tree")
    tree.add_argument("--features", required=True, help="feature matrix file")
    tree.add_argument("--out", required=True, help="DOT file to write")
    tree.add_argument("--min-leaf", type=int, default=TreeParams.min_leaf)
    tree.add_argument("--max-depth", type=int, default=TreeParams.max_depth)

    group = sub.add_parser("subgroup", help="export one tree per feature band")
    group.add_argument("--features", required=True, help="feature matrix file")
    group.add_argument("--by", required=True, help="partition feature name")
    group.add_argument("--out-dir", required=True, help="directory for DOT files")

    return parser


def _cmd_synth(args: argparse.Namespace) -> int:
    profile = load_profile(args.profile) if args.profile else CohortProfile()
    overrides = {
        key: value
        for key, value in (
            ("n", args.n),
            ("prevalence", args.prevalence),
            ("seed", args.seed),
        )
        if value is not None
    }
    if overrides:
        profile = dataclasses.replace(profile, **overrides)
    profile.validate()
    cohort = generate_cohort(profile)
    rio.save_cohort(cohort, args.out)
    if args.summary:
        summary = cohort_summary(cohort)
        print(
            f"n={summary.count} prevalence={summary.prevalence:.3f} "
            f"age {summary.age_mean:.1f} ({summary.age_sd:.1f}) "
            f"los {summary.los_mean:.1f} ({summary.los_sd:.1f}) "
            f"experience {summary.experience_mean:.2f} "
            f"({summary.experience_sd:.2f})"
        )
    return 0


def _cmd_featurize(args: argparse.Namespace, parser: _Parser) -> int:
    if not 0 <= args.threshold < 1:
        parser.error(f"--threshold {args.threshold} outside [0, 1)")
    from .features import build_catalog, featurize_cohort

    cohort = rio.load_cohort(args.input)
    if not cohort.episodes:
        raise rio.IngestError(f"--in {args.input}: cohort is empty")
    catalog = build_catalog(cohort, args.threshold)
    vectors, labels = featurize_cohort(cohort, catalog)
    rio.save_feature_matrix(vectors, catalog, labels, args.out)
    rio.save_catalog(catalog, args.catalog)
    return 0


def _cmd_evaluate(args: argparse.Namespace, parser: _Parser) -> int:
    if args.folds < 2:
        parser.error(f"--folds {args.folds} must be >= 2")
    try:
        specs = parse_model_list(args.models)
    except ValueError as exc:
        parser.error(f"--models: {exc}")
    vectors, catalog, labels = rio.load_feature_matrix(args.features)
    results = [
        cross_validate(vectors, labels, catalog, spec, k=args.folds, seed=args.seed)
        for spec in specs
    ]
    table = render_comparison(results)
    Path(args.report).write_text(table, encoding="utf-8")
    print(table, end="")
    return 0


def _cmd_tree(args: argparse.Namespace, parser: _Parser) -> int:
    if args.min_leaf < 1:
        parser.error(f"--min-leaf {args.min_leaf} must be >= 1")
    if args.max_depth < 0:
        parser.error(f"--max-depth {args.max_depth} must be >= 0")
    vectors, catalog, labels = rio.load_feature_matrix(args.features)
    params = TreeParams(min_leaf=args.min_leaf, max_depth=args.max_depth)
    model = dt_fit(vectors, labels, catalog, params)
    annotated = annotate_tree(model, vectors, labels)
    Path(args.out).write_text(export_tree_dot(annotated), encoding="utf-8")
    return 0


def _safe_filename(text: str) -> str:
    return "".join(c if c.isalnum() or c in "-._" else "_" for c in text)


def _cmd_subgroup(args: argparse.Namespace) -> int:
    vectors, catalog, labels = rio.load_feature_matrix(args.features)
    if args.by not in catalog.names:
        raise rio.IngestError(f"--by {args.by}: feature not in matrix header")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trees = subgroup_trees(vectors, labels, catalog, args.by)
    for token, tree in trees.items():
        name = f"{_safe_filename(args.by)}={_safe_filename(token)}.dot"
        (out_dir / name).write_text(export_tree_dot(tree), encoding="utf-8")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "featurize":
            return _cmd_featurize(args, parser)
        if args.command == "evaluate":
            return _cmd_evaluate(args, parser)
        if args.command == "tree":
            return _cmd_tree(args, parser)
        if args.command == "subgroup":
            return _cmd_subgroup(args)
    except (rio.IngestError, ValueError) as exc:
        print(f"readmit {args.command}: {exc}", file=sys.stderr)
        return DATA_ERROR
    except OSError as exc:
        print(f"readmit {args.command}: {exc}", file=sys.stderr)
        return DATA_ERROR
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
