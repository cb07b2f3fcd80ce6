"""Per-venue citation indicators computed from filtered paper sets."""
from __future__ import annotations

import math
from collections import defaultdict
from typing import Collection, Iterable, Mapping, Sequence

from gsr.model import PaperRecord


class MissingTimeSeries(ValueError):
    """A cited paper has no per-year citation series; use the estimation path."""


def fwci_mean(papers: Sequence[PaperRecord]) -> tuple[float, float]:
    """Mean FWCI and FWCI coverage over FWCI-eligible papers.

    Papers with FWCI missing or equal to zero are left out of the mean and do
    not count as covered. Empty input gives ``(0.0, 0.0)``.
    """
    if not papers:
        return 0.0, 0.0
    values = [p.fwci for p in papers if p.fwci is not None and p.fwci > 0]
    if not values:
        return 0.0, 0.0
    return math.fsum(values) / len(values), len(values) / len(papers)


def if2(papers: Sequence[PaperRecord], retrieval_year: int) -> float:
    """Two-year impact factor: year-Y citations over the paper count.

    ``papers`` must already be restricted to the IF2 window and quality filter.
    An empty set yields 0.0 (callers flag the empty denominator).
    """
    if not papers:
        return 0.0
    total = 0
    for p in papers:
        # uncited papers legitimately carry an empty series
        if not p.counts_by_year and p.cited_by_count > 0:
            raise MissingTimeSeries(f"{p.paper_id} has citations but no counts_by_year")
        total += p.citations_in(retrieval_year)
    return total / len(papers)


def h_index(citations: Iterable[int]) -> int:
    ranked = sorted(citations, reverse=True)
    h = 0
    for i, c in enumerate(ranked, start=1):
        if c < i:
            break
        h = i
    return h


def h5(papers: Iterable[PaperRecord]) -> int:
    """Largest h such that h papers in the five-year set have at least h citations."""
    return h_index(p.cited_by_count for p in papers)


def yearly_citation_totals(papers: Iterable[PaperRecord]) -> dict[int, int]:
    totals: dict[int, int] = defaultdict(int)
    for p in papers:
        for year, n in p.counts_by_year:
            totals[year] += n
    return dict(totals)


def cite_cagr(totals: Mapping[int, int], retrieval_year: int) -> float:
    """Growth rate between the citation totals of years Y-3 and Y-1.

    Returns 0.0 unless both endpoint totals are non-zero. The result may be
    negative; clamping is left to scoring.
    """
    start = totals.get(retrieval_year - 3, 0)
    end = totals.get(retrieval_year - 1, 0)
    if start <= 0 or end <= 0:
        return 0.0
    return (end / start) ** 0.5 - 1.0


def self_citation_rate(papers: Iterable[PaperRecord], venue_paper_ids: Collection[str]) -> tuple[float, bool]:
    """Share of outgoing references that point back into the venue.

    Returns ``(rate, computable)``; ``(0.0, False)`` when no reference lists
    are available.
    """
    ids = venue_paper_ids if isinstance(venue_paper_ids, (set, frozenset)) else set(venue_paper_ids)
    total = internal = 0
    for p in papers:
        if p.referenced_works is None:
            continue
        total += len(p.referenced_works)
        internal += sum(1 for ref in p.referenced_works if ref in ids)
    if total == 0:
        return 0.0, False
    return internal / total, True
