from datetime import timedelta

import pytest

from readmit.cohort import (
    ALL_TAG_NAMES,
    Cohort,
    NandaClass,
    NandaDomain,
    NicClass,
    NicDomain,
    NocOutcome,
    validate_cohort,
    validate_episode,
)

from conftest import make_episode


def test_taxonomy_sizes():
    assert len(NandaDomain) == 10
    assert len(NandaClass) == 8
    assert len(NicDomain) == 7
    assert len(NicClass) == 16
    assert len(ALL_TAG_NAMES) == 41


@pytest.mark.parametrize("cls", [NandaDomain, NandaClass, NicDomain, NicClass])
def test_tags_round_trip_through_names(cls):
    names = [member.value for member in cls]
    assert len(set(names)) == len(names)
    for member in cls:
        assert cls(member.value) is member


def test_valid_episode_passes():
    episode = make_episode(age_years=59, initial=3, expected=3, final=3)
    assert validate_episode(episode) == []


def test_single_shift_violation():
    episode = make_episode(shift_hours=(8.0,))
    violations = validate_episode(episode)
    assert any("shifts length 1" in v for v in violations)


def test_out_of_range_rating_violation():
    episode = make_episode()
    bad = NocOutcome(initial_rating=3, expected_rating=6, final_rating=3)
    episode = type(episode)(
        **{**episode.__dict__, "pain_control": bad}
    )
    violations = validate_episode(episode)
    assert any("expected rating 6" in v for v in violations)


def test_underage_violation():
    violations = validate_episode(make_episode(age_years=17))
    assert any("below adult minimum" in v for v in violations)


def test_discharge_before_admission_violation():
    episode = make_episode()
    broken = type(episode)(
        **{
            **episode.__dict__,
            "discharge_time": episode.admission_time - timedelta(hours=1),
        }
    )
    violations = validate_episode(broken)
    assert any("discharge_time" in v for v in violations)


def test_validation_is_pure():
    episode = make_episode(shift_hours=(8.0,))
    assert validate_episode(episode) == validate_episode(episode)


def test_tag_names_use_group_prefixes():
    episode = make_episode(
        nanda_domains=frozenset({NandaDomain.NUTRITION}),
        nic_domains=frozenset({NicDomain.BEHAVIORAL}),
    )
    assert episode.tag_names() == {
        "nanda_domain:Nutrition",
        "nic_domain:Behavioral",
    }


def test_validate_cohort_flags_duplicates_and_bad_episodes():
    cohort = Cohort(
        (
            make_episode("E1"),
            make_episode("E1"),
            make_episode("E2", age_years=12),
        )
    )
    problems = validate_cohort(cohort)
    assert "duplicate episode_id" in problems["E1"]
    assert any("below adult minimum" in v for v in problems["E2"])
