"""Seeded synthetic cohort generation calibrated to published marginals.

The generator draws demographics, stays, staffing, outcome ratings, and
taxonomy tags from independent per-field distributions whose realized
moments match the configured targets, then plants a known readmission
rule: each episode gets a risk score from a sparse additive log-odds
signal, the top fraction of scores (set by the configured prevalence and
noise rate) become base positives, and every base label is flipped
independently with the configured noise probability. The base rule is the
distribution's Bayes classifier, so its accuracy on fresh draws is one
minus the flip rate, which lets classifier behavior be verified against a
known ground truth.

Truncated-normal fields (age, nurse experience) are sampled from a parent
normal whose mean is solved numerically so the post-truncation mean hits
the target; length of stay uses a moment-matched log-normal, whose heavy
right tail reflects the published sd exceeding the mean.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.stats import norm

from .cohort import (
    ALL_TAG_NAMES,
    TAXONOMY_GROUPS,
    Cohort,
    Episode,
    NocOutcome,
    ShiftRecord,
)
from .features import (
    FIXED_FEATURES,
    FLAG_TOKENS,
    Feature,
    FeatureCatalog,
    feature_token,
)

SHIFT_HOURS = 8.0

AGE_BOUNDS = (18.0, 100.0)
EXPERIENCE_BOUNDS = (0.0, 40.0)

# Study window start for admission timestamps (three calendar years).
ADMISSION_EPOCH = datetime(2005, 1, 1, tzinfo=timezone.utc)
ADMISSION_WINDOW_DAYS = 3 * 365

# Rating draw probabilities for scores 1..5: admission ratings for a pain
# cohort sit at the bottom of the scale, expectations cluster around
# modest improvement, and final ratings spread with actual outcomes.
INITIAL_RATING_P = (0.85, 0.09, 0.04, 0.015, 0.005)
EXPECTED_RATING_P = (0.03, 0.88, 0.05, 0.03, 0.01)
FINAL_RATING_P = (0.08, 0.15, 0.22, 0.33, 0.22)

# Admissions cluster in the day shift; weights are per nursing shift
# (morning, afternoon, evening), uniform within the shift.
ADMISSION_SHIFT_P = (0.70, 0.20, 0.10)
_SHIFT_WINDOWS = ((7, 15), (15, 23), (23, 31))  # hours, evening wraps


def default_tag_frequencies() -> dict[str, float]:
    """Marginal inclusion probability for every taxonomy tag.

    The default cohort is sparse: two comfort-related tags are near
    universal, the two protective signal tags sit at 10%, and everything
    else is rare enough that the 5% support filter ordinarily excludes it,
    so the screening step has real work to do on default data.
    """
    freqs = {tag: 0.03 for tag in ALL_TAG_NAMES}
    freqs.update(
        {
            "nanda_domain:Comfort": 0.97,
            "nanda_class:Physical Comfort": 0.96,
            "nanda_domain:Nutrition": 0.10,
            "nic_domain:Behavioral": 0.10,
        }
    )
    return freqs


def default_planted_signal() -> "PlantedSignal":
    """Risk signal concentrated on the predictors the subgroup analyses
    surface, with a steep weight hierarchy: age strongest, then stay
    length, then final rating, then discharge shift and the protective
    Nutrition / Behavioral tags. The hierarchy makes the planted rule
    nearly decision-tree shaped (age decides except near the boundary,
    where the next feature level resolves), which is what lets the fitted
    tree's structure be verified against the known ground truth."""
    weights = {
        "age_band": {
            "young": 0.0,
            "middle-aged": 1.2,
            "old": 2.4,
            "very-old": 3.6,
        },
        "los_band": {"short": 0.0, "medium": 0.5, "long": 1.0},
        "final_rating": {"1": 0.24, "2": 0.12, "3": 0.0, "4": -0.12, "5": -0.24},
        "discharge_shift": {"morning": -0.04, "afternoon": 0.03, "evening": 0.02},
        "nanda_domain:Nutrition": {"1": -0.06},
        "nic_domain:Behavioral": {"1": -0.06},
    }
    return PlantedSignal(weights=weights, bias=0.0, noise_flip_prob=0.26)


@dataclass(frozen=True)
class PlantedSignal:
    """Additive log-odds readmission rule with symmetric label noise.

    ``weights[feature][category]`` contributes to an episode's risk score
    when the feature takes that category; unlisted categories contribute
    zero. The decision boundary is not the raw sign of the score: the
    generator thresholds scores at the rank set by the configured
    prevalence (see ``planted_labels``), so ``bias`` is an overall score
    offset kept for completeness of the rule form.
    """

    weights: Mapping[str, Mapping[str, float]]
    bias: float = 0.0
    noise_flip_prob: float = 0.26

    def score(self, tokens: Mapping[str, str]) -> float:
        total = self.bias
        for feature, per_category in self.weights.items():
            token = tokens.get(feature)
            if token is not None:
                total += per_category.get(token, 0.0)
        return total


@dataclass(frozen=True)
class CohortProfile:
    """Generator configuration; identical profiles yield identical cohorts."""

    n: int = 2300
    prevalence: float = 0.426
    age_mean: float = 59.0
    age_sd: float = 18.4
    los_mean: float = 91.5
    los_sd: float = 98.5
    exp_mean: float = 1.7
    exp_sd: float = 2.4
    tag_frequencies: Mapping[str, float] = field(
        default_factory=default_tag_frequencies
    )
    signal: PlantedSignal = field(default_factory=default_planted_signal)
    seed: int = 0

    def validate(self) -> None:
        if self.n < 10:
            raise ValueError(f"n {self.n} < 10")
        if not 0 < self.prevalence < 1:
            raise ValueError(f"prevalence {self.prevalence} outside (0, 1)")
        for name, sd in (
            ("age_sd", self.age_sd),
            ("los_sd", self.los_sd),
            ("exp_sd", self.exp_sd),
        ):
            if sd <= 0:
                raise ValueError(f"{name} {sd} not positive")
        if self.los_mean <= 0:
            raise ValueError(f"los_mean {self.los_mean} not positive")
        if not AGE_BOUNDS[0] < self.age_mean < AGE_BOUNDS[1]:
            raise ValueError(f"age_mean {self.age_mean} outside {AGE_BOUNDS}")
        if not EXPERIENCE_BOUNDS[0] < self.exp_mean < EXPERIENCE_BOUNDS[1]:
            raise ValueError(
                f"exp_mean {self.exp_mean} outside {EXPERIENCE_BOUNDS}"
            )
        for tag, freq in self.tag_frequencies.items():
            if tag not in ALL_TAG_NAMES:
                raise ValueError(f"unknown taxonomy tag {tag!r}")
            if not 0 <= freq <= 1:
                raise ValueError(f"frequency {freq} for {tag!r} outside [0, 1]")
        p = self.signal.noise_flip_prob
        if not 0 <= p < 0.5:
            raise ValueError(f"noise_flip_prob {p} outside [0, 0.5)")
        if not p < self.prevalence < 1 - p:
            raise ValueError(
                f"prevalence {self.prevalence} unreachable under flip noise {p}"
            )


@dataclass(frozen=True)
class CohortSummary:
    """Realized cohort statistics, mirroring the published variable rows."""

    count: int
    prevalence: float
    age_mean: float
    age_sd: float
    los_mean: float
    los_sd: float
    experience_mean: float
    experience_sd: float
    tag_frequencies: dict[str, float]
    degenerate_sd: bool


def truncated_normal_parent_mean(
    target_mean: float, sd: float, lower: float, upper: float
) -> float:
    """Parent-normal mean whose [lower, upper]-truncation has the target mean.

    Truncation pulls the realized mean toward the interval's center, so the
    parent mean must be offset to compensate; the realized mean is strictly
    increasing in the parent mean, which makes bracketed root finding safe.
    """
    if not lower < target_mean < upper:
        raise ValueError(
            f"target mean {target_mean} outside truncation bounds "
            f"({lower}, {upper})"
        )

    def realized(mu: float) -> float:
        a = (lower - mu) / sd
        b = (upper - mu) / sd
        z = norm.cdf(b) - norm.cdf(a)
        if z <= 0:
            return lower if mu < lower else upper
        return mu + sd * (norm.pdf(a) - norm.pdf(b)) / z

    lo, hi = target_mean - 2 * sd, target_mean + 2 * sd
    while realized(lo) > target_mean:
        lo -= 2 * sd
    while realized(hi) < target_mean:
        hi += 2 * sd
    return float(brentq(lambda mu: realized(mu) - target_mean, lo, hi, xtol=1e-10))


def _sample_truncated_normal(
    rng: np.random.Generator,
    size: int,
    parent_mean: float,
    sd: float,
    lower: float,
    upper: float,
) -> np.ndarray:
    a = norm.cdf((lower - parent_mean) / sd)
    b = norm.cdf((upper - parent_mean) / sd)
    u = rng.random(size)
    return parent_mean + sd * norm.ppf(a + u * (b - a))


def _lognormal_params(mean: float, sd: float) -> tuple[float, float]:
    """(mu, sigma) of the log-normal with the given mean and sd."""
    sigma2 = np.log1p((sd / mean) ** 2)
    mu = np.log(mean) - sigma2 / 2
    return float(mu), float(np.sqrt(sigma2))


def _shift_durations(los: float) -> list[float]:
    """Partition a stay into consecutive shifts of up to SHIFT_HOURS.

    Stays too short for two full-or-partial shifts are split in half so
    every episode satisfies the two-shift minimum.
    """
    full = int(los // SHIFT_HOURS)
    remainder = los - SHIFT_HOURS * full
    durations = [SHIFT_HOURS] * full
    if remainder > 1e-9:
        durations.append(remainder)
    if len(durations) < 2:
        durations = [los / 2, los / 2]
    return durations


_TAG_MEMBERS = {
    f"{group}:{member.value}": (attr, member)
    for group, attr, cls in TAXONOMY_GROUPS
    for member in cls
}


def full_catalog() -> FeatureCatalog:
    """Catalog with the fixed features and all 41 tag flags (no filtering)."""
    tags = tuple(Feature(name, "binary", FLAG_TOKENS) for name in ALL_TAG_NAMES)
    return FeatureCatalog(FIXED_FEATURES + tags, support_threshold=0.0)


# Used only to read signal tokens off an episode; includes every tag so
# planted weights are honored regardless of any support filtering.
_SIGNAL_CATALOG = full_catalog()


def planted_scores(
    signal: PlantedSignal, episodes: Sequence[Episode]
) -> np.ndarray:
    """Risk score of each episode under the signal's weights."""
    by_name = {f.name: f for f in _SIGNAL_CATALOG.features}
    scores = np.empty(len(episodes))
    for i, episode in enumerate(episodes):
        tokens = {
            name: feature_token(episode, by_name[name])
            for name in signal.weights
            if name in by_name
        }
        scores[i] = signal.score(tokens)
    return scores


def base_positive_rate(prevalence: float, noise_flip_prob: float) -> float:
    """Pre-noise positive rate that yields the target prevalence after
    symmetric flips: prevalence = q(1-p) + (1-q)p solved for q."""
    p = noise_flip_prob
    return (prevalence - p) / (1 - 2 * p)


def planted_labels(
    profile: CohortProfile, episodes: Sequence[Episode]
) -> np.ndarray:
    """Pre-noise labels of the planted rule on the given episodes.

    The rule marks the top-scoring fraction q = (prevalence - p)/(1 - 2p)
    of episodes positive; score ties break toward earlier episodes. These
    are the Bayes-optimal predictions for the generated distribution, so
    their agreement with generated labels concentrates at 1 - p.
    """
    profile.validate()
    scores = planted_scores(profile.signal, episodes)
    q = base_positive_rate(profile.prevalence, profile.signal.noise_flip_prob)
    m = int(round(q * len(episodes)))
    m = min(max(m, 0), len(episodes))
    labels = np.zeros(len(episodes), dtype=bool)
    if m > 0:
        order = np.argsort(-scores, kind="stable")
        labels[order[:m]] = True
    return labels


def generate_cohort(profile: CohortProfile) -> Cohort:
    """Generate ``profile.n`` valid episodes, a pure function of the profile."""
    profile.validate()
    rng = np.random.default_rng(profile.seed)
    n = profile.n

    age_parent = truncated_normal_parent_mean(
        profile.age_mean, profile.age_sd, *AGE_BOUNDS
    )
    ages = np.rint(
        _sample_truncated_normal(
            rng, n, age_parent, profile.age_sd, *AGE_BOUNDS
        )
    ).astype(int)

    los_mu, los_sigma = _lognormal_params(profile.los_mean, profile.los_sd)
    los = np.exp(los_mu + los_sigma * rng.standard_normal(n))

    admit_days = rng.integers(0, ADMISSION_WINDOW_DAYS, size=n)
    shift_idx = rng.choice(3, size=n, p=ADMISSION_SHIFT_P)
    shift_offset = rng.random(n)
    admit_seconds = np.empty(n, dtype=np.int64)
    for b, (start, end) in enumerate(_SHIFT_WINDOWS):
        mask = shift_idx == b
        hours = start + shift_offset[mask] * (end - start)
        admit_seconds[mask] = (hours % 24 * 3600).astype(np.int64)

    initial = rng.choice(5, size=n, p=INITIAL_RATING_P) + 1
    expected = rng.choice(5, size=n, p=EXPECTED_RATING_P) + 1
    final = rng.choice(5, size=n, p=FINAL_RATING_P) + 1

    tag_names = ALL_TAG_NAMES
    freq = np.array([profile.tag_frequencies.get(t, 0.0) for t in tag_names])
    tag_hits = rng.random((n, len(tag_names))) < freq

    exp_parent = truncated_normal_parent_mean(
        profile.exp_mean, profile.exp_sd, *EXPERIENCE_BOUNDS
    )
    exp_cdf_lo = norm.cdf((EXPERIENCE_BOUNDS[0] - exp_parent) / profile.exp_sd)
    exp_cdf_hi = norm.cdf((EXPERIENCE_BOUNDS[1] - exp_parent) / profile.exp_sd)

    episodes: list[Episode] = []
    for i in range(n):
        admission = ADMISSION_EPOCH + timedelta(
            days=int(admit_days[i]), seconds=int(admit_seconds[i])
        )
        durations = _shift_durations(float(los[i]))
        u = rng.random(len(durations))
        experience = exp_parent + profile.exp_sd * norm.ppf(
            exp_cdf_lo + u * (exp_cdf_hi - exp_cdf_lo)
        )
        shifts = []
        elapsed = 0.0
        for dur, years in zip(durations, experience):
            shifts.append(
                ShiftRecord(
                    start_time=admission + timedelta(hours=elapsed),
                    duration_hours=float(dur),
                    nurse_experience_years=float(years),
                )
            )
            elapsed += dur
        tags = {attr: set() for _, attr, _ in TAXONOMY_GROUPS}
        for j, name in enumerate(tag_names):
            if tag_hits[i, j]:
                attr, member = _TAG_MEMBERS[name]
                tags[attr].add(member)
        episodes.append(
            Episode(
                episode_id=f"E{i:06d}",
                age_years=int(ages[i]),
                admission_time=admission,
                discharge_time=admission + timedelta(hours=float(los[i])),
                shifts=tuple(shifts),
                pain_control=NocOutcome(
                    initial_rating=int(initial[i]),
                    expected_rating=int(expected[i]),
                    final_rating=int(final[i]),
                ),
                nanda_domains=frozenset(tags["nanda_domains"]),
                nanda_classes=frozenset(tags["nanda_classes"]),
                nic_domains=frozenset(tags["nic_domains"]),
                nic_classes=frozenset(tags["nic_classes"]),
                readmitted=False,
            )
        )

    base = planted_labels(profile, episodes)
    # Flip an exact per-class count of labels rather than iid coin flips:
    # the planted rule's accuracy is then exactly 1 - noise_flip_prob and
    # the realized prevalence matches the profile up to rounding.
    flips = np.zeros(n, dtype=bool)
    p_flip = profile.signal.noise_flip_prob
    for side in (True, False):
        members = np.flatnonzero(base == side)
        k = int(round(p_flip * len(members)))
        if k > 0:
            flips[rng.choice(members, size=k, replace=False)] = True
    labels = base ^ flips
    episodes = [
        Episode(
            episode_id=e.episode_id,
            age_years=e.age_years,
            admission_time=e.admission_time,
            discharge_time=e.discharge_time,
            shifts=e.shifts,
            pain_control=e.pain_control,
            nanda_domains=e.nanda_domains,
            nanda_classes=e.nanda_classes,
            nic_domains=e.nic_domains,
            nic_classes=e.nic_classes,
            readmitted=bool(labels[i]),
        )
        for i, e in enumerate(episodes)
    ]
    return Cohort(tuple(episodes))


def cohort_summary(cohort: Cohort) -> CohortSummary:
    """Realized count, prevalence, moments, and per-tag frequencies.

    Experience is the per-episode mean over its shifts, then summarized
    across episodes; standard deviations use the unbiased (n-1) convention
    and degenerate single-episode cohorts report sd 0 with a flag.
    """
    if not cohort.episodes:
        raise ValueError("cohort_summary over an empty cohort")
    n = len(cohort.episodes)
    ages = np.array([e.age_years for e in cohort.episodes], dtype=float)
    los = np.array(
        [sum(s.duration_hours for s in e.shifts) for e in cohort.episodes]
    )
    experience = np.array(
        [
            float(np.mean([s.nurse_experience_years for s in e.shifts]))
            for e in cohort.episodes
        ]
    )
    degenerate = n < 2

    def sd(values: np.ndarray) -> float:
        return 0.0 if degenerate else float(np.std(values, ddof=1))

    tag_freqs = {}
    tag_sets = [e.tag_names() for e in cohort.episodes]
    for tag in ALL_TAG_NAMES:
        tag_freqs[tag] = sum(1 for tags in tag_sets if tag in tags) / n
    return CohortSummary(
        count=n,
        prevalence=sum(e.readmitted for e in cohort.episodes) / n,
        age_mean=float(ages.mean()),
        age_sd=sd(ages),
        los_mean=float(los.mean()),
        los_sd=sd(los),
        experience_mean=float(experience.mean()),
        experience_sd=sd(experience),
        tag_frequencies=tag_freqs,
        degenerate_sd=degenerate,
    )


def profile_from_dict(doc: Mapping) -> CohortProfile:
    """Build a profile from a parsed JSON object; unknown keys rejected."""
    known = {
        "n",
        "prevalence",
        "age_mean",
        "age_sd",
        "los_mean",
        "los_sd",
        "exp_mean",
        "exp_sd",
        "tag_frequencies",
        "signal",
        "seed",
    }
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown profile fields: {sorted(unknown)}")
    kwargs: dict = {k: doc[k] for k in known & set(doc) if k != "signal"}
    if "signal" in doc:
        sig = dict(doc["signal"])
        unknown_sig = set(sig) - {"weights", "bias", "noise_flip_prob"}
        if unknown_sig:
            raise ValueError(f"unknown signal fields: {sorted(unknown_sig)}")
        default = default_planted_signal()
        kwargs["signal"] = PlantedSignal(
            weights=sig.get("weights", default.weights),
            bias=float(sig.get("bias", default.bias)),
            noise_flip_prob=float(
                sig.get("noise_flip_prob", default.noise_flip_prob)
            ),
        )
    profile = CohortProfile(**kwargs)
    profile.validate()
    return profile


def load_profile(path: str | Path) -> CohortProfile:
    with open(path, "r", encoding="utf-8") as handle:
        return profile_from_dict(json.load(handle))
