"""Venue-level orchestration: snapshot in, indicators and rankings out.

Measurement is split from resolution so that the calibration coefficient can
be swept without re-reading snapshots: :func:`measure_venue` collects every
coefficient-independent quantity, :func:`resolve_indicators` applies the
coefficient and FWCI conversion.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from gsr import calibration, indicators
from gsr.ingest import FilterPurpose, Snapshot, apply_quality_filter, fwci_eligible
from gsr.model import Field, RankedVenue, VenueIndicators, VenueKind, VenueMeta
from gsr.scoring import ScoredVenue, ScoringConfig, assign_quartiles, composite_score

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class VenueMeasurement:
    meta: VenueMeta
    retrieval_year: int
    fwci_mean: float
    fwci_coverage: float
    # measured IF2; None when the venue must use the estimate
    if2_measured: Optional[float]
    if2_paper_count: int
    # mean lifetime citations of the IF2 papers, i.e. if2_approx at coefficient 1
    mean_citations_if2: float
    h5: int
    cite_cagr: float
    self_citation_rate: float
    self_citation_computable: bool
    n_valid_papers: int

    @property
    def is_estimated(self) -> bool:
        return self.if2_measured is None


def measure_venue(
    meta: VenueMeta,
    snapshot: Snapshot,
    retrieval_year: Optional[int] = None,
    exclusion_mode: str = "and",
) -> VenueMeasurement:
    year = snapshot.retrieval_year if retrieval_year is None else retrieval_year
    records = snapshot.records

    eligible = fwci_eligible(records, year)
    fwci_mean, coverage = indicators.fwci_mean(eligible)

    if2_set = apply_quality_filter(records, FilterPurpose.IF2, year, exclusion_mode)
    h5_set = apply_quality_filter(records, FilterPurpose.H5, year, exclusion_mode)
    # an all-uncited journal has nothing to estimate; its measured IF2 is 0
    has_series = any(r.counts_by_year for r in records) or not any(r.cited_by_count for r in records)

    if2_measured: Optional[float] = None
    if meta.kind is VenueKind.JOURNAL and has_series:
        try:
            if2_measured = indicators.if2(if2_set, year)
        except indicators.MissingTimeSeries as exc:
            log.warning("%s: falling back to estimated IF2 (%s)", meta.venue_id, exc)

    # valid papers of the three-year analysis window; also the self-citation scope
    window_set = apply_quality_filter(records, FilterPurpose.IF2, year, exclusion_mode, window=(year - 3, year - 1))
    rate, computable = indicators.self_citation_rate(window_set, {r.paper_id for r in window_set})

    return VenueMeasurement(
        meta=meta,
        retrieval_year=year,
        fwci_mean=fwci_mean,
        fwci_coverage=coverage,
        if2_measured=if2_measured,
        if2_paper_count=len(if2_set),
        mean_citations_if2=calibration.if2_approx(if2_set, 1.0),
        h5=indicators.h5(h5_set),
        cite_cagr=indicators.cite_cagr(indicators.yearly_citation_totals(records), year),
        self_citation_rate=rate,
        self_citation_computable=computable,
        n_valid_papers=len(window_set),
    )


def resolve_indicators(m: VenueMeasurement, coefficient: float, fwci_conversion: float) -> VenueIndicators:
    flags = set()
    if m.if2_paper_count == 0:
        flags.add("if2_empty_denominator")
    if not m.self_citation_computable:
        flags.add("self_citation_not_computable")
    fwci = m.fwci_mean
    if m.is_estimated:
        if2 = m.mean_citations_if2 * coefficient
        if m.fwci_coverage == 0:
            fwci = calibration.fwci_approx(if2, fwci_conversion)
            flags.add("fwci_estimated")
    else:
        if2 = m.if2_measured
    return VenueIndicators(
        fwci_mean=fwci,
        fwci_coverage=m.fwci_coverage,
        if2=if2,
        if2_is_estimated=m.is_estimated,
        h5=m.h5,
        cite_cagr=m.cite_cagr,
        self_citation_rate=m.self_citation_rate,
        n_valid_papers=m.n_valid_papers,
        flags=frozenset(flags),
    )


def conversion_by_field(measurements: Iterable[VenueMeasurement]) -> dict[Field, float]:
    """FWCI/IF2 conversion per field from journals with measured indicators.

    Fields without usable journals borrow the pooled value across fields.
    """
    measurements = list(measurements)
    pairs: dict[Field, list[tuple[float, float]]] = {}
    pooled = []
    for m in measurements:
        if m.is_estimated or m.fwci_coverage == 0:
            continue
        pair = (m.fwci_mean, m.if2_measured)
        pairs.setdefault(m.meta.field, []).append(pair)
        pooled.append(pair)
    out = {}
    for f in {m.meta.field for m in measurements}:
        try:
            out[f] = calibration.fwci_conversion_coefficient(pairs.get(f, []))
        except calibration.EmptyCorpus:
            out[f] = calibration.fwci_conversion_coefficient(pooled)
    return out


@dataclass(frozen=True)
class RankingRow:
    meta: VenueMeta
    indicators: VenueIndicators
    ranked: RankedVenue


def rank_field(
    measurements: Sequence[VenueMeasurement],
    coefficient: float,
    conversion: float,
    cfg: ScoringConfig = ScoringConfig(),
) -> list[RankingRow]:
    """Score and rank the venues of one field."""
    resolved = {m.meta.venue_id: (m.meta, resolve_indicators(m, coefficient, conversion)) for m in measurements}
    scored = [
        ScoredVenue(vid, composite_score(ind, cfg), ind.n_valid_papers, ind.fwci_mean)
        for vid, (_, ind) in resolved.items()
    ]
    rows = []
    for ranked in assign_quartiles(scored, cfg):
        meta, ind = resolved[ranked.venue_id]
        rows.append(RankingRow(meta, ind, ranked))
    return rows


def rank_all(
    measurements: Sequence[VenueMeasurement],
    coefficient: float,
    cfg: ScoringConfig = ScoringConfig(),
    conversions: Optional[Mapping[Field, float]] = None,
) -> dict[Field, list[RankingRow]]:
    """Rank every field separately; returns rows keyed by field."""
    if conversions is None:
        needs_conversion = any(m.is_estimated and m.fwci_coverage == 0 for m in measurements)
        conversions = conversion_by_field(measurements) if needs_conversion else {}
    out = {}
    for f in sorted({m.meta.field for m in measurements}, key=lambda f: f.value):
        group = [m for m in measurements if m.meta.field is f]
        out[f] = rank_field(group, coefficient, conversions.get(f, 0.0), cfg)
    return out
