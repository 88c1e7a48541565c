"""Readmission-prediction workbench on synthetic nursing-EHR cohorts.

The pipeline: generate a calibrated synthetic cohort with a planted
readmission rule, discretize it into categorical feature vectors, fit
four classifier families from scratch, evaluate them with stratified
10-fold cross-validation, and render comparison tables and annotated
subgroup decision trees.
"""

from .cohort import (
    ALL_TAG_NAMES,
    Cohort,
    Episode,
    NandaClass,
    NandaDomain,
    NicClass,
    NicDomain,
    NocOutcome,
    ShiftRecord,
    validate_cohort,
    validate_episode,
)
from .evaluation import (
    ConfusionMatrix,
    EvaluationResult,
    FoldAssignment,
    cross_validate,
    majority_baseline_accuracy,
    metrics,
    roc_auc,
    stratified_folds,
)
from .features import (
    Feature,
    FeatureCatalog,
    FeatureVector,
    age_band,
    build_catalog,
    featurize,
    featurize_cohort,
    los_band,
    los_hours,
    noc_met,
    shift_bucket,
    tag_support,
    team_experience,
)
from .io import (
    load_catalog,
    load_cohort,
    load_feature_matrix,
    save_catalog,
    save_cohort,
    save_feature_matrix,
)
from .synth import (
    CohortProfile,
    CohortSummary,
    PlantedSignal,
    cohort_summary,
    default_planted_signal,
    default_tag_frequencies,
    full_catalog,
    generate_cohort,
    planted_labels,
    planted_scores,
)

__version__ = "0.1.0"
