"""Reading and writing cohorts, feature matrices, and catalogs.

Cohorts are stored as newline-delimited JSON records (one episode per
line), feature matrices as comma-separated tables with the label in the
last column, and catalogs as a single JSON document. Loading is strict:
every malformed record, invalid episode, duplicate identifier, ragged row,
or out-of-vocabulary token is an explicit error, never a silent repair.
"""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from .cohort import (
    PAIN_CONTROL,
    TAXONOMY_GROUPS,
    Cohort,
    Episode,
    NocOutcome,
    ShiftRecord,
    validate_episode,
)
from .features import (
    FIXED_FEATURES,
    FLAG_TOKENS,
    Feature,
    FeatureCatalog,
    FeatureVector,
)

LABEL_COLUMN = "readmitted"

_EPISODE_FIELDS = (
    "episode_id",
    "age_years",
    "admission_time",
    "discharge_time",
    "shifts",
    "pain_control",
    "nanda_domains",
    "nanda_classes",
    "nic_domains",
    "nic_classes",
    "readmitted",
)


class IngestError(ValueError):
    """Base class for strict-loading failures."""


class ParseError(IngestError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CohortValidationError(IngestError):
    def __init__(self, episode_id: str, violations: Sequence[str]):
        super().__init__(f"episode {episode_id!r}: " + "; ".join(violations))
        self.episode_id = episode_id
        self.violations = list(violations)


class DuplicateEpisodeIdError(IngestError):
    def __init__(self, episode_id: str):
        super().__init__(f"duplicate episode_id {episode_id!r}")
        self.episode_id = episode_id


class MatrixFormatError(IngestError):
    pass


def parse_rfc3339(text: str) -> datetime:
    """Parse an RFC-3339 timestamp; a trailing Z means UTC."""
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def format_rfc3339(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.isoformat()


def _episode_to_record(episode: Episode) -> dict:
    record: dict = {
        "episode_id": episode.episode_id,
        "age_years": episode.age_years,
        "admission_time": format_rfc3339(episode.admission_time),
        "discharge_time": format_rfc3339(episode.discharge_time),
        "shifts": [
            {
                "start_time": format_rfc3339(s.start_time),
                "duration_hours": s.duration_hours,
                "nurse_experience_years": s.nurse_experience_years,
            }
            for s in episode.shifts
        ],
        "pain_control": {
            "initial": episode.pain_control.initial_rating,
            "expected": episode.pain_control.expected_rating,
            "final": episode.pain_control.final_rating,
        },
    }
    for _, attr, cls in TAXONOMY_GROUPS:
        members = getattr(episode, attr)
        # Canonical enum order keeps the output byte-stable.
        record[attr] = [m.value for m in cls if m in members]
    record["readmitted"] = episode.readmitted
    return {key: record[key] for key in _EPISODE_FIELDS}


def _record_to_episode(record: dict, line: int) -> Episode:
    if not isinstance(record, dict):
        raise ParseError(line, "record is not an object")
    missing = [f for f in _EPISODE_FIELDS if f not in record]
    if missing:
        raise ParseError(line, f"missing fields: {', '.join(missing)}")
    try:
        shifts = tuple(
            ShiftRecord(
                start_time=parse_rfc3339(s["start_time"]),
                duration_hours=float(s["duration_hours"]),
                nurse_experience_years=float(s["nurse_experience_years"]),
            )
            for s in record["shifts"]
        )
        pain = record["pain_control"]
        tags = {}
        for _, attr, cls in TAXONOMY_GROUPS:
            tags[attr] = frozenset(cls(name) for name in record[attr])
        return Episode(
            episode_id=str(record["episode_id"]),
            age_years=int(record["age_years"]),
            admission_time=parse_rfc3339(record["admission_time"]),
            discharge_time=parse_rfc3339(record["discharge_time"]),
            shifts=shifts,
            pain_control=NocOutcome(
                initial_rating=int(pain["initial"]),
                expected_rating=int(pain["expected"]),
                final_rating=int(pain["final"]),
                name=PAIN_CONTROL,
            ),
            readmitted=bool(record["readmitted"]),
            **tags,
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(line, f"malformed record: {exc}") from exc


def load_cohort(path: str | Path) -> Cohort:
    """Load a newline-delimited cohort file, validating every episode."""
    episodes: list[Episode] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, f"invalid JSON: {exc.msg}") from exc
            episode = _record_to_episode(record, line_no)
            if episode.episode_id in seen:
                raise DuplicateEpisodeIdError(episode.episode_id)
            seen.add(episode.episode_id)
            violations = validate_episode(episode)
            if violations:
                raise CohortValidationError(episode.episode_id, violations)
            episodes.append(episode)
    return Cohort(tuple(episodes))


def save_cohort(cohort: Cohort, path: str | Path) -> None:
    """Write a cohort as one JSON record per line; round-trips exactly."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for episode in cohort.episodes:
            handle.write(json.dumps(_episode_to_record(episode), sort_keys=False))
            handle.write("\n")


def save_feature_matrix(
    vectors: Sequence[FeatureVector],
    catalog: FeatureCatalog,
    labels: Sequence[int],
    path: str | Path,
) -> None:
    """Write vectors and 0/1 labels as a comma-separated table.

    The header is the catalog's feature names followed by the label
    column; one row per episode in input order.
    """
    if len(vectors) != len(labels):
        raise MatrixFormatError(
            f"{len(vectors)} vectors but {len(labels)} labels"
        )
    width = len(catalog.features)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(list(catalog.names) + [LABEL_COLUMN])
        for i, (vector, label) in enumerate(zip(vectors, labels)):
            if len(vector) != width:
                raise MatrixFormatError(
                    f"row {i}: width {len(vector)} != header width {width}"
                )
            for token, feature in zip(vector, catalog.features):
                if token not in feature.categories:
                    raise MatrixFormatError(
                        f"row {i}: token {token!r} not a category of "
                        f"{feature.name!r}"
                    )
            writer.writerow(list(vector) + [str(int(label))])


def catalog_from_header(names: Sequence[str]) -> FeatureCatalog:
    """Reconstruct a catalog from matrix column names.

    The nine fixed features carry their full category sets; any other
    column is a binary presence flag. This is the "catalog-lite" used when
    only the matrix file is available.
    """
    fixed = {f.name: f for f in FIXED_FEATURES}
    features = []
    for name in names:
        if name in fixed:
            features.append(fixed[name])
        else:
            features.append(Feature(name, "binary", FLAG_TOKENS))
    return FeatureCatalog(tuple(features))


def load_feature_matrix(
    path: str | Path,
) -> tuple[list[FeatureVector], FeatureCatalog, list[int]]:
    """Load a feature matrix: (vectors, catalog-lite, labels)."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise MatrixFormatError("empty matrix file") from None
        if not header or header[-1] != LABEL_COLUMN:
            raise MatrixFormatError(
                f"last header column must be {LABEL_COLUMN!r}"
            )
        catalog = catalog_from_header(header[:-1])
        width = len(header)
        vectors: list[FeatureVector] = []
        labels: list[int] = []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != width:
                raise MatrixFormatError(
                    f"line {row_no}: width {len(row)} != header width {width}"
                )
            tokens = tuple(row[:-1])
            for token, feature in zip(tokens, catalog.features):
                if token not in feature.categories:
                    raise MatrixFormatError(
                        f"line {row_no}: token {token!r} not a category of "
                        f"{feature.name!r}"
                    )
            if row[-1] not in ("0", "1"):
                raise MatrixFormatError(
                    f"line {row_no}: label {row[-1]!r} not 0 or 1"
                )
            vectors.append(tokens)
            labels.append(int(row[-1]))
    return vectors, catalog, labels


def save_catalog(catalog: FeatureCatalog, path: str | Path) -> None:
    """Write a catalog as a JSON document."""
    doc = {
        "support_threshold": catalog.support_threshold,
        "features": [
            {"name": f.name, "kind": f.kind, "categories": list(f.categories)}
            for f in catalog.features
        ],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(doc, handle, indent=2)
        handle.write("\n")


def load_catalog(path: str | Path) -> FeatureCatalog:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.lineno, f"invalid JSON: {exc.msg}") from exc
    try:
        features = tuple(
            Feature(f["name"], f["kind"], tuple(f["categories"]))
            for f in doc["features"]
        )
        return FeatureCatalog(features, float(doc["support_threshold"]))
    except (KeyError, TypeError) as exc:
        raise IngestError(f"malformed catalog document: {exc}") from exc
