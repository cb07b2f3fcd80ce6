"""Retrieval, normalization, snapshot persistence and quality filtering."""
from __future__ import annotations

import datetime as dt
import logging
from typing import Optional

import requests

from gsr.ingest.client import (
    FetchError,
    MalformedResponse,
    NotFound,
    RateLimited,
    RateLimitPolicy,
    TransientFailure,
    VenueQuerySpec,
    fetch_source_papers,
)
from gsr.ingest.normalize import (
    MissingIdentifier,
    MissingYear,
    NormalizationError,
    Source,
    dedupe_raw,
    normalize,
)
from gsr.ingest.quality import (
    DEFAULT_RETRIEVAL_YEAR,
    FilterPurpose,
    analysis_window,
    apply_quality_filter,
    fwci_eligible,
)
from gsr.ingest.snapshot import (
    CorruptLine,
    IoFailure,
    SchemaVersionMismatch,
    Snapshot,
    SnapshotError,
    read_snapshot,
    snapshot_filename,
    write_snapshot,
)
from gsr.model import DEFAULT_YEAR_WINDOW, RecordRejected, VenueMeta, validate_record

log = logging.getLogger(__name__)

__all__ = [
    "CorruptLine", "FetchError", "FilterPurpose", "IoFailure", "MalformedResponse",
    "MissingIdentifier", "MissingYear", "NormalizationError", "NotFound", "RateLimitPolicy",
    "RateLimited", "SchemaVersionMismatch", "Snapshot", "SnapshotError", "Source",
    "TransientFailure", "VenueQuerySpec", "DEFAULT_RETRIEVAL_YEAR", "analysis_window",
    "apply_quality_filter", "dedupe_raw", "fetch_source_papers", "fetch_venue_snapshot",
    "fwci_eligible", "normalize", "read_snapshot", "snapshot_filename", "write_snapshot",
]


def fetch_venue_snapshot(
    venue: VenueMeta,
    retrieval_date: dt.date,
    year_range: tuple[int, int],
    limits: RateLimitPolicy = RateLimitPolicy(),
    *,
    openalex_base_url: Optional[str] = None,
    s2_base_url: Optional[str] = None,
    dedupe: bool = True,
    session: Optional[requests.Session] = None,
    year_window: tuple[int, int] = DEFAULT_YEAR_WINDOW,
) -> Snapshot:
    """Pull one venue from every source it has an id for and build its snapshot.

    OpenAlex is read first so that, when deduplicating, its richer record
    (FWCI, per-year counts) is the one kept.
    """
    session = session or requests.Session()
    raw: list = []
    if venue.openalex_source_id:
        spec = VenueQuerySpec(Source.OPENALEX, venue.openalex_source_id, year_range)
        raw += [(Source.OPENALEX, r) for r in
                fetch_source_papers(spec, limits, base_url=openalex_base_url, session=session)]
    if venue.s2_venue_id:
        spec = VenueQuerySpec(Source.S2, venue.s2_venue_id, year_range)
        raw += [(Source.S2, r) for r in
                fetch_source_papers(spec, limits, base_url=s2_base_url, session=session)]
    if dedupe:
        raw = list(dedupe_raw(raw))

    records = []
    seen_ids: set[str] = set()
    for source, item in raw:
        try:
            record = validate_record(normalize(item, source, venue.venue_id), year_window)
        except (NormalizationError, RecordRejected) as exc:
            log.warning("%s: dropping record: %s", venue.venue_id, exc)
            continue
        if record.paper_id in seen_ids:
            continue
        seen_ids.add(record.paper_id)
        records.append(record)
    return Snapshot(venue.venue_id, retrieval_date, tuple(records))
