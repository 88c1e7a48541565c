"""Domain model for hospital-stay episodes documented by nursing plans of care.

An episode is one continuous stay: demographics, the ordered nurse shifts
that covered it, the Pain Control outcome ratings, the nursing-taxonomy
tags observed anywhere in the stay, and the readmission label. All types
are immutable values; structural rules are checked by ``validate_episode``
rather than at construction so that ingestion can report every problem in
a record at once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime

RATING_MIN = 1
RATING_MAX = 5
ADULT_MIN_AGE = 18
MIN_SHIFTS = 2

PAIN_CONTROL = "Pain Control"


class NandaDomain(enum.Enum):
    """Nursing-diagnosis domains retained after frequency screening."""

    ACTIVITY_REST = "Activity/Rest"
    COMFORT = "Comfort"
    COPING_STRESS_TOLERANCE = "Coping/Stress Tolerance"
    ELIMINATION = "Elimination"
    HEALTH_PROMOTION = "Health Promotion"
    LIFE_PRINCIPLES = "Life Principles"
    NUTRITION = "Nutrition"
    PERCEPTION = "Perception"
    ROLE_RELATIONSHIPS = "Role Relationships"
    SAFETY_PROTECTION = "Safety/Protection"


class NandaClass(enum.Enum):
    """Nursing-diagnosis classes retained after frequency screening."""

    ACTIVITY_EXERCISE = "Activity/Exercise"
    CARDIOVASCULAR_PULMONARY_RESPONSES = "Cardiovascular/Pulmonary Responses"
    COGNITION = "Cognition"
    HYDRATION = "Hydration"
    INFECTION = "Infection"
    PHYSICAL_COMFORT = "Physical Comfort"
    PHYSICAL_INJURY = "Physical Injury"
    PULMONARY_SYSTEM = "Pulmonary System"


class NicDomain(enum.Enum):
    """Nursing-intervention domains (all seven appear in the data)."""

    BEHAVIORAL = "Behavioral"
    COMMUNITY = "Community"
    FAMILY = "Family"
    HEALTH_SYSTEM = "Health System"
    SAFETY = "Safety"
    PHYSIOLOGICAL_BASIC = "Physiological: Basic"
    PHYSIOLOGICAL_COMPLEX = "Physiological: Complex"


class NicClass(enum.Enum):
    """Nursing-intervention classes retained after frequency screening."""

    ACTIVITY_EXERCISE_MANAGEMENT = "Activity & Exercise Management"
    COGNITIVE_THERAPY = "Cognitive Therapy"
    COMMUNICATION_ENHANCEMENT = "Communication Enhancement"
    DRUG_MANAGEMENT = "Drug Management"
    ELECTROLYTE_ACID_BASE_MANAGEMENT = "Electrolyte and Acid/Base Management"
    IMMOBILITY_MANAGEMENT = "Immobility Management"
    INFORMATION_MANAGEMENT = "Information Management"
    NUTRITION_SUPPORT = "Nutrition Support"
    PATIENT_EDUCATION = "Patient Education"
    PHYSICAL_COMFORT_PROMOTION = "Physical Comfort Promotion"
    PSYCHOLOGICAL_COMFORT_PROMOTION = "Psychological Comfort Promotion"
    RESPIRATORY_MANAGEMENT = "Respiratory Management"
    RISK_MANAGEMENT = "Risk Management"
    SELF_CARE_FACILITATION = "Self-Care Facilitation"
    SKIN_WOUND_MANAGEMENT = "Skin/Wound Management"
    TISSUE_PERFUSION_MANAGEMENT = "Tissue Perfusion Management"


#: Taxonomy groups in the canonical listing order used for feature layout
#: and serialization: NANDA domains, NIC domains, NANDA classes, NIC classes.
#: Each entry is (tag prefix, Episode attribute, enum class).
TAXONOMY_GROUPS: tuple[tuple[str, str, type[enum.Enum]], ...] = (
    ("nanda_domain", "nanda_domains", NandaDomain),
    ("nic_domain", "nic_domains", NicDomain),
    ("nanda_class", "nanda_classes", NandaClass),
    ("nic_class", "nic_classes", NicClass),
)

#: Every taxonomy tag as a ("<group>:<name>") feature identifier, in
#: canonical order. 10 + 7 + 8 + 16 = 41 tags.
ALL_TAG_NAMES: tuple[str, ...] = tuple(
    f"{group}:{member.value}" for group, _, cls in TAXONOMY_GROUPS for member in cls
)


@dataclass(frozen=True)
class NocOutcome:
    """Outcome ratings on the 1-5 NOC scale, 1 worst and 5 best."""

    initial_rating: int
    expected_rating: int
    final_rating: int
    name: str = PAIN_CONTROL


@dataclass(frozen=True)
class ShiftRecord:
    """One nurse shift: when it started, how long, who staffed it.

    The staffing nurse is represented only by years of experience in the
    current position, which is all the downstream features consume.
    """

    start_time: datetime
    duration_hours: float
    nurse_experience_years: float


@dataclass(frozen=True)
class Episode:
    """One continuous hospital stay, the unit of prediction.

    Diagnoses, interventions and their groupings are carried as presence
    sets at the episode level; per-shift plans of care are collapsed into
    the shift list. ``readmitted`` is the prediction target.
    """

    episode_id: str
    age_years: int
    admission_time: datetime
    discharge_time: datetime
    shifts: tuple[ShiftRecord, ...]
    pain_control: NocOutcome
    nanda_domains: frozenset[NandaDomain] = field(default_factory=frozenset)
    nanda_classes: frozenset[NandaClass] = field(default_factory=frozenset)
    nic_domains: frozenset[NicDomain] = field(default_factory=frozenset)
    nic_classes: frozenset[NicClass] = field(default_factory=frozenset)
    readmitted: bool = False

    def tag_names(self) -> frozenset[str]:
        """All taxonomy tags of this episode as feature identifiers."""
        names: set[str] = set()
        for group, attr, _ in TAXONOMY_GROUPS:
            for member in getattr(self, attr):
                names.add(f"{group}:{member.value}")
        return frozenset(names)


@dataclass(frozen=True)
class Cohort:
    """A list of episodes with unique identifiers."""

    episodes: tuple[Episode, ...]

    def __len__(self) -> int:
        return len(self.episodes)


def validate_episode(episode: Episode) -> list[str]:
    """Check every structural invariant of an episode.

    Returns an empty list when the episode is valid, otherwise one message
    per violated invariant. Violations are data, not faults: the function
    never raises.
    """
    violations: list[str] = []
    if episode.age_years < ADULT_MIN_AGE:
        violations.append(
            f"age_years {episode.age_years} below adult minimum {ADULT_MIN_AGE}"
        )
    if len(episode.shifts) < MIN_SHIFTS:
        violations.append(f"shifts length {len(episode.shifts)} < {MIN_SHIFTS}")
    if episode.discharge_time <= episode.admission_time:
        violations.append("discharge_time not after admission_time")
    total_hours = sum(s.duration_hours for s in episode.shifts)
    if total_hours <= 0:
        violations.append("sum of shift durations not positive")
    for i, shift in enumerate(episode.shifts):
        if shift.duration_hours <= 0:
            violations.append(f"shift {i} duration_hours {shift.duration_hours} <= 0")
        if shift.nurse_experience_years < 0:
            violations.append(
                f"shift {i} nurse_experience_years {shift.nurse_experience_years} < 0"
            )
    for label, rating in (
        ("initial", episode.pain_control.initial_rating),
        ("expected", episode.pain_control.expected_rating),
        ("final", episode.pain_control.final_rating),
    ):
        if not RATING_MIN <= rating <= RATING_MAX:
            violations.append(
                f"{label} rating {rating} outside {RATING_MIN}-{RATING_MAX}"
            )
    return violations


def validate_cohort(cohort: Cohort) -> dict[str, list[str]]:
    """Map episode_id -> violations for every invalid episode in a cohort."""
    problems: dict[str, list[str]] = {}
    seen: set[str] = set()
    for episode in cohort.episodes:
        violations = validate_episode(episode)
        if episode.episode_id in seen:
            violations = violations + ["duplicate episode_id"]
        seen.add(episode.episode_id)
        if violations:
            problems[episode.episode_id] = violations
    return problems
