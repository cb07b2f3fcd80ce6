"""Run configuration and venue-list loading."""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from gsr.model import CcfTier, Field, Quartile, VenueKind, VenueMeta, validate_venue
from gsr.scoring import ScoringConfig

VENUE_COLUMNS = (
    "venue_id", "display_name", "kind", "field", "openalex_source_id", "s2_venue_id", "ccf_tier", "jcr_quartile",
)
OUTPUT_FORMATS = ("csv", "json", "markdown")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CalibrationOptions:
    window: str = "two_year"
    restrict_to_if2_window: bool = True
    coefficient: Optional[float] = None
    fwci_conversion: Optional[float] = None


@dataclass(frozen=True)
class IngestOptions:
    openalex_base_url: Optional[str] = None
    s2_base_url: Optional[str] = None
    requests_per_second: float = 10.0
    max_attempts: int = 3
    backoff_base: float = 1.0
    workers: int = 4
    dedupe: bool = True


@dataclass(frozen=True)
class RunConfig:
    venue_list_path: Path = Path("venues.csv")
    snapshot_dir: Path = Path("snapshots")
    output_dir: Path = Path("output")
    # None: take the year from the snapshot headers
    retrieval_year: Optional[int] = None
    retrieval_date: Optional[str] = None
    output_formats: tuple[str, ...] = OUTPUT_FORMATS
    exclusion_mode: str = "and"
    allow_non_cs_conferences: bool = False
    scoring: ScoringConfig = field(default_factory=ScoringConfig)
    calibration: CalibrationOptions = field(default_factory=CalibrationOptions)
    ingest: IngestOptions = field(default_factory=IngestOptions)

    def __post_init__(self):
        bad = set(self.output_formats) - set(OUTPUT_FORMATS)
        if bad:
            raise ConfigError(f"unknown output formats {sorted(bad)}")
        if self.exclusion_mode not in ("and", "or"):
            raise ConfigError("quality_filter.exclusion_mode must be 'and' or 'or'")
        if self.calibration.window not in ("two_year", "retrieval_year"):
            raise ConfigError("calibration.window must be 'two_year' or 'retrieval_year'")
        c = self.calibration.coefficient
        if c is not None and not 0 < c <= 1:
            raise ConfigError(f"calibration.coefficient {c} outside (0, 1]")
        if self.retrieval_date is not None and self.retrieval_year is not None:
            if int(self.retrieval_date[:4]) != self.retrieval_year:
                raise ConfigError("retrieval_date and retrieval_year disagree")

    def method_parameters(self) -> dict[str, Any]:
        """Everything that affects computed values (paths and endpoints excluded)."""
        scoring = dataclasses.asdict(self.scoring)
        scoring["quota"] = [[q.value, lo, hi] for q, lo, hi in self.scoring.quota]
        return {
            "retrieval_year": self.retrieval_year,
            "retrieval_date": self.retrieval_date,
            "exclusion_mode": self.exclusion_mode,
            "output_formats": list(self.output_formats),
            "scoring": scoring,
            "calibration": dataclasses.asdict(self.calibration),
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.method_parameters(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _sub(cls, data: Optional[dict], section: str):
    data = dict(data or {})
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")
    if cls is ScoringConfig and "quota" in data:
        data["quota"] = tuple((q, lo, hi) for q, lo, hi in data["quota"])
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc


def load_config(path: Optional[os.PathLike] = None) -> RunConfig:
    """Read a JSON run configuration; relative paths resolve against its directory.

    With no path, every paper default applies and paths resolve against the
    working directory (``snapshot_dir`` honours ``GSR_CACHE_DIR``).
    """
    data: dict[str, Any] = {}
    base = Path.cwd()
    if path is not None:
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        base = path.resolve().parent

    known = {
        "venue_list_path", "snapshot_dir", "output_dir", "retrieval_year", "retrieval_date",
        "output_formats", "quality_filter", "allow_non_cs_conferences", "scoring", "calibration", "ingest",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    def resolve(key: str, default: str) -> Path:
        p = Path(data.get(key) or default)
        return p if p.is_absolute() else base / p

    snapshot_default = os.environ.get("GSR_CACHE_DIR", "snapshots")
    quality = data.get("quality_filter") or {}
    try:
        return RunConfig(
            venue_list_path=resolve("venue_list_path", "venues.csv"),
            snapshot_dir=resolve("snapshot_dir", snapshot_default),
            output_dir=resolve("output_dir", "output"),
            retrieval_year=data.get("retrieval_year"),
            retrieval_date=data.get("retrieval_date"),
            output_formats=tuple(data.get("output_formats", OUTPUT_FORMATS)),
            exclusion_mode=quality.get("exclusion_mode", "and"),
            allow_non_cs_conferences=bool(data.get("allow_non_cs_conferences", False)),
            scoring=_sub(ScoringConfig, data.get("scoring"), "scoring"),
            calibration=_sub(CalibrationOptions, data.get("calibration"), "calibration"),
            ingest=_sub(IngestOptions, data.get("ingest"), "ingest"),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _enum_or_none(cls, value: str):
    value = (value or "").strip()
    return cls(value) if value else None


def load_venue_list(path, allow_non_cs_conferences: bool = False) -> list[VenueMeta]:
    """Parse the venue list CSV (columns as in ``VENUE_COLUMNS``)."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read venue list {path}: {exc}") from exc
    venues = []
    with fh:
        reader = csv.DictReader(fh)
        missing = set(VENUE_COLUMNS[:4]) - set(reader.fieldnames or ())
        if missing:
            raise ConfigError(f"{path}: venue list lacks columns {sorted(missing)}")
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            try:
                meta = VenueMeta(
                    venue_id=row["venue_id"].strip(),
                    display_name=row["display_name"].strip(),
                    kind=VenueKind(row["kind"].strip().capitalize()),
                    field=Field(row["field"].strip()),
                    openalex_source_id=(row.get("openalex_source_id") or "").strip() or None,
                    s2_venue_id=(row.get("s2_venue_id") or "").strip() or None,
                    ccf_tier=_enum_or_none(CcfTier, row.get("ccf_tier")),
                    jcr_quartile=_enum_or_none(Quartile, row.get("jcr_quartile")),
                )
                validate_venue(meta, allow_non_cs_conferences)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
            if meta.venue_id in seen:
                raise ConfigError(f"{path}:{lineno}: duplicate venue_id {meta.venue_id!r}")
            seen.add(meta.venue_id)
            venues.append(meta)
    return venues


def write_venue_list(venues, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(VENUE_COLUMNS)
        for v in venues:
            writer.writerow([
                v.venue_id, v.display_name, v.kind.value, v.field.value,
                v.openalex_source_id or "", v.s2_venue_id or "",
                v.ccf_tier.value if v.ccf_tier else "", v.jcr_quartile.value if v.jcr_quartile else "",
            ])
    return path
