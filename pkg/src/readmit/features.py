"""Categorical feature extraction for episodes.

Every predictor is categorical: four discretizers translate the continuous
episode attributes into bands, two derived flags summarize outcome
attainment and team staffing, and each retained taxonomy tag becomes a
present/absent flag. Tags are retained only when their cohort support
strictly exceeds the configured threshold (default 5%), which is the
pipeline's feature-selection mechanism.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Sequence

from .cohort import (
    ALL_TAG_NAMES,
    RATING_MAX,
    RATING_MIN,
    Cohort,
    Episode,
    ShiftRecord,
)

AGE_BANDS = ("young", "middle-aged", "old", "very-old")
LOS_BANDS = ("short", "medium", "long")
TEAM_LEVELS = ("experienced", "inexperienced")
NOC_LEVELS = ("met", "not-met")
SHIFT_BUCKETS = ("morning", "afternoon", "evening")
RATING_TOKENS = tuple(str(r) for r in range(RATING_MIN, RATING_MAX + 1))
FLAG_TOKENS = ("0", "1")

DEFAULT_SUPPORT_THRESHOLD = 0.05

EXPERIENCED_YEARS = 2.0

# LOS band edges in hours; exactly 48 is medium, exactly 120 is long.
LOS_SHORT_MAX = 48.0
LOS_MEDIUM_MAX = 120.0

# A feature vector is one token per catalog feature, in catalog order.
FeatureVector = tuple[str, ...]


@dataclass(frozen=True)
class Feature:
    """One catalog entry: a named categorical with a fixed token set."""

    name: str
    kind: str  # "categorical" or "binary"
    categories: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("categorical", "binary"):
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if len(self.categories) < 2:
            raise ValueError(f"feature {self.name!r} needs >= 2 categories")


#: The nine fixed features, always present and always first in the catalog.
FIXED_FEATURES: tuple[Feature, ...] = (
    Feature("age_band", "categorical", AGE_BANDS),
    Feature("los_band", "categorical", LOS_BANDS),
    Feature("team_experience", "categorical", TEAM_LEVELS),
    Feature("noc_met", "categorical", NOC_LEVELS),
    Feature("admission_shift", "categorical", SHIFT_BUCKETS),
    Feature("discharge_shift", "categorical", SHIFT_BUCKETS),
    Feature("initial_rating", "categorical", RATING_TOKENS),
    Feature("expected_rating", "categorical", RATING_TOKENS),
    Feature("final_rating", "categorical", RATING_TOKENS),
)

FIXED_FEATURE_NAMES = tuple(f.name for f in FIXED_FEATURES)


@dataclass(frozen=True)
class FeatureCatalog:
    """Ordered feature list: the nine fixed features plus retained tag flags."""

    features: tuple[Feature, ...]
    support_threshold: float = DEFAULT_SUPPORT_THRESHOLD

    def __post_init__(self) -> None:
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise ValueError("catalog feature names not unique")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def index_of(self, name: str) -> int:
        for i, f in enumerate(self.features):
            if f.name == name:
                return i
        raise KeyError(f"feature {name!r} not in catalog")

    def drop(self, name: str) -> "FeatureCatalog":
        """Catalog without one feature (used for subgroup analyses)."""
        self.index_of(name)
        return FeatureCatalog(
            tuple(f for f in self.features if f.name != name),
            self.support_threshold,
        )


def age_band(age_years: int) -> str:
    """Adult age band: young 18-49, middle-aged 50-64, old 65-84, very-old 85+."""
    if age_years < 18:
        raise ValueError(f"age_years {age_years} below adult range")
    if age_years <= 49:
        return "young"
    if age_years <= 64:
        return "middle-aged"
    if age_years <= 84:
        return "old"
    return "very-old"


def los_hours(episode: Episode) -> float:
    """Length of stay: the sum of the episode's shift hours."""
    return float(sum(s.duration_hours for s in episode.shifts))


def los_band(hours: float) -> str:
    """Stay band: short below 48h, medium 48h up to 120h, long 120h and over."""
    if hours <= 0:
        raise ValueError(f"length of stay {hours} not positive")
    if hours < LOS_SHORT_MAX:
        return "short"
    if hours < LOS_MEDIUM_MAX:
        return "medium"
    return "long"


def team_experience(shifts: Sequence[ShiftRecord]) -> str:
    """Experienced iff strictly more than half the shifts had a nurse with
    at least two years in the current position."""
    if not shifts:
        raise ValueError("team_experience needs at least one shift")
    experienced = sum(
        1 for s in shifts if s.nurse_experience_years >= EXPERIENCED_YEARS
    )
    return "experienced" if 2 * experienced > len(shifts) else "inexperienced"


def noc_met(expected_rating: int, final_rating: int) -> str:
    """Met iff the final rating is the same or better than the expected one."""
    for rating in (expected_rating, final_rating):
        if not RATING_MIN <= rating <= RATING_MAX:
            raise ValueError(f"rating {rating} outside {RATING_MIN}-{RATING_MAX}")
    return "met" if final_rating >= expected_rating else "not-met"


def shift_bucket(t: datetime) -> str:
    """Nursing shift containing a clock time: morning 07-15, afternoon 15-23,
    evening 23-07 (wrapping past midnight)."""
    hour = t.hour
    if 7 <= hour < 15:
        return "morning"
    if 15 <= hour < 23:
        return "afternoon"
    return "evening"


def tag_support(tag_name: str, cohort: Cohort) -> float:
    """Fraction of cohort episodes carrying the tag."""
    if not cohort.episodes:
        raise ValueError("tag_support over an empty cohort")
    hits = sum(1 for e in cohort.episodes if tag_name in e.tag_names())
    return hits / len(cohort.episodes)


def build_catalog(
    cohort: Cohort, threshold: float = DEFAULT_SUPPORT_THRESHOLD
) -> FeatureCatalog:
    """The nine fixed features plus a flag for every tag whose support
    strictly exceeds ``threshold``, in canonical taxonomy order."""
    if not cohort.episodes:
        raise ValueError("build_catalog over an empty cohort")
    if not 0 <= threshold < 1:
        raise ValueError(f"threshold {threshold} outside [0, 1)")
    tag_sets = [e.tag_names() for e in cohort.episodes]
    n = len(tag_sets)
    features = list(FIXED_FEATURES)
    for tag in ALL_TAG_NAMES:
        support = sum(1 for tags in tag_sets if tag in tags) / n
        if support > threshold:
            features.append(Feature(tag, "binary", FLAG_TOKENS))
    return FeatureCatalog(tuple(features), threshold)


def feature_token(episode: Episode, feature: Feature) -> str:
    """The token a single catalog feature takes on an episode."""
    name = feature.name
    if name == "age_band":
        return age_band(episode.age_years)
    if name == "los_band":
        return los_band(los_hours(episode))
    if name == "team_experience":
        return team_experience(episode.shifts)
    if name == "noc_met":
        return noc_met(
            episode.pain_control.expected_rating, episode.pain_control.final_rating
        )
    if name == "admission_shift":
        return shift_bucket(episode.admission_time)
    if name == "discharge_shift":
        return shift_bucket(episode.discharge_time)
    if name == "initial_rating":
        return str(episode.pain_control.initial_rating)
    if name == "expected_rating":
        return str(episode.pain_control.expected_rating)
    if name == "final_rating":
        return str(episode.pain_control.final_rating)
    if feature.kind == "binary":
        return "1" if name in episode.tag_names() else "0"
    raise ValueError(f"cannot derive feature {name!r} from an episode")


def featurize(episode: Episode, catalog: FeatureCatalog) -> FeatureVector:
    """Feature vector of an episode, one token per catalog feature."""
    return tuple(feature_token(episode, f) for f in catalog.features)


def featurize_cohort(
    cohort: Cohort, catalog: FeatureCatalog
) -> tuple[list[FeatureVector], list[int]]:
    """Vectors and 0/1 readmission labels for every episode, in order."""
    vectors = [featurize(e, catalog) for e in cohort.episodes]
    labels = [int(e.readmitted) for e in cohort.episodes]
    return vectors, labels


def check_vector(vector: Iterable[str], catalog: FeatureCatalog) -> FeatureVector:
    """Validate that a token sequence conforms to the catalog."""
    tokens = tuple(vector)
    if len(tokens) != len(catalog.features):
        raise ValueError(
            f"vector width {len(tokens)} != catalog width {len(catalog.features)}"
        )
    for token, feature in zip(tokens, catalog.features):
        if token not in feature.categories:
            raise ValueError(
                f"token {token!r} not a category of feature {feature.name!r}"
            )
    return tokens
