"""Shared fixtures: hand-built episodes and the benchmark cohort."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from readmit.cohort import Cohort, Episode, NocOutcome, ShiftRecord
from readmit.features import build_catalog, featurize_cohort
from readmit.synth import CohortProfile, generate_cohort

BENCH_SEED = 42


def make_episode(
    episode_id="E1",
    age_years=59,
    admission=datetime(2005, 3, 1, 10, 0, tzinfo=timezone.utc),
    shift_hours=(8.0, 8.0),
    experience=(3.0, 3.0),
    initial=2,
    expected=2,
    final=4,
    readmitted=False,
    los_hours=None,
    **tags,
):
    """Episode factory with valid defaults; tweak only what a test needs."""
    durations = list(shift_hours)
    if los_hours is not None:
        durations = [8.0] * int(los_hours // 8)
        rest = los_hours - 8.0 * len(durations)
        if rest > 0:
            durations.append(rest)
        while len(durations) < 2:
            durations = [d / 2 for d in durations for _ in (0, 1)]
    exp = list(experience)
    while len(exp) < len(durations):
        exp.append(exp[-1])
    shifts = []
    elapsed = 0.0
    for hours, years in zip(durations, exp):
        shifts.append(
            ShiftRecord(
                start_time=admission + timedelta(hours=elapsed),
                duration_hours=hours,
                nurse_experience_years=years,
            )
        )
        elapsed += hours
    return Episode(
        episode_id=episode_id,
        age_years=age_years,
        admission_time=admission,
        discharge_time=admission + timedelta(hours=elapsed),
        shifts=tuple(shifts),
        pain_control=NocOutcome(
            initial_rating=initial, expected_rating=expected, final_rating=final
        ),
        readmitted=readmitted,
        **tags,
    )


@pytest.fixture(scope="session")
def bench_profile():
    return CohortProfile(seed=BENCH_SEED)


@pytest.fixture(scope="session")
def bench_cohort(bench_profile):
    return generate_cohort(bench_profile)


@pytest.fixture(scope="session")
def bench_features(bench_cohort):
    catalog = build_catalog(bench_cohort, 0.05)
    vectors, labels = featurize_cohort(bench_cohort, catalog)
    return catalog, vectors, labels


@pytest.fixture()
def tiny_cohort():
    return Cohort(
        (
            make_episode("E1", age_years=40, readmitted=False),
            make_episode("E2", age_years=60, readmitted=True),
            make_episode("E3", age_years=75, readmitted=True),
        )
    )
