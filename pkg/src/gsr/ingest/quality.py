"""Per-purpose record filters applied before indicator computation."""
from __future__ import annotations

import enum
from typing import Iterable, Optional

from gsr.model import DocType, PaperRecord

DEFAULT_RETRIEVAL_YEAR = 2025
RESEARCH_TYPES = frozenset({DocType.ARTICLE, DocType.REVIEW})


class FilterPurpose(str, enum.Enum):
    FWCI_MEAN = "FwciMean"
    IF2 = "IF2"
    H5 = "H5"


# (offset of first year, offset of last year) relative to the retrieval year
_WINDOW_OFFSETS = {
    FilterPurpose.FWCI_MEAN: (3, 1),
    FilterPurpose.IF2: (2, 1),
    FilterPurpose.H5: (5, 1),
}


def analysis_window(purpose: FilterPurpose, retrieval_year: int = DEFAULT_RETRIEVAL_YEAR) -> tuple[int, int]:
    """Inclusive publication-year window used for ``purpose``."""
    first, last = _WINDOW_OFFSETS[FilterPurpose(purpose)]
    return retrieval_year - first, retrieval_year - last


def _is_clean_research(record: PaperRecord) -> bool:
    return record.doc_type in RESEARCH_TYPES and not record.is_retracted and not record.is_paratext


def _is_short_item(record: PaperRecord, exclusion_mode: str) -> bool:
    no_abstract = not record.has_abstract
    uncited = record.cited_by_count == 0
    if exclusion_mode == "and":
        return no_abstract and uncited
    if exclusion_mode == "or":
        return no_abstract or uncited
    raise ValueError(f"unknown exclusion_mode {exclusion_mode!r}; expected 'and' or 'or'")


def fwci_eligible(
    records: Iterable[PaperRecord],
    retrieval_year: int = DEFAULT_RETRIEVAL_YEAR,
    window: Optional[tuple[int, int]] = None,
) -> list[PaperRecord]:
    """Type, window and flag conditions of the FWCI filter, without the FWCI-presence cut.

    This is the population that FWCI coverage is measured against.
    """
    lo, hi = window or analysis_window(FilterPurpose.FWCI_MEAN, retrieval_year)
    return [r for r in records if _is_clean_research(r) and lo <= r.publication_year <= hi]


def apply_quality_filter(
    records: Iterable[PaperRecord],
    purpose: FilterPurpose,
    retrieval_year: int = DEFAULT_RETRIEVAL_YEAR,
    exclusion_mode: str = "and",
    window: Optional[tuple[int, int]] = None,
) -> list[PaperRecord]:
    """Keep the records that count towards ``purpose``.

    The predicate is evaluated record by record, so the filter is monotone:
    adding input records never drops a record that was already kept.
    """
    purpose = FilterPurpose(purpose)
    lo, hi = window or analysis_window(purpose, retrieval_year)
    if purpose is FilterPurpose.FWCI_MEAN:
        return [
            r for r in fwci_eligible(records, window=(lo, hi))
            if r.fwci is not None and r.fwci > 0
        ]
    return [
        r for r in records
        if _is_clean_research(r)
        and lo <= r.publication_year <= hi
        and not _is_short_item(r, exclusion_mode)
    ]
