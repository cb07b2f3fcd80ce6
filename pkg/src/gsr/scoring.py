"""Composite venue score and fixed-quota quartile assignment."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from gsr.model import Quartile, RankedVenue, VenueIndicators

DEFAULT_QUOTA: tuple[tuple[Quartile, int, Optional[int]], ...] = (
    (Quartile.Q1, 1, 50),
    (Quartile.Q2, 51, 100),
    (Quartile.Q3, 101, 200),
    (Quartile.Q4, 201, None),
)


@dataclass(frozen=True)
class ScoringConfig:
    w_fwci: float = 0.35
    w_if2: float = 0.35
    w_h5: float = 0.15
    w_cagr: float = 0.15
    self_cite_threshold: float = 0.30
    self_cite_penalty: float = 0.80
    min_valid_papers: int = 20
    # (quartile, first rank, last rank or None for open-ended)
    quota: tuple[tuple[Quartile, int, Optional[int]], ...] = field(default=DEFAULT_QUOTA)

    def __post_init__(self):
        if min(self.w_fwci, self.w_if2, self.w_h5, self.w_cagr) < 0:
            raise ValueError("weights must be non-negative")
        if not 0 < self.self_cite_penalty <= 1:
            raise ValueError("self_cite_penalty must lie in (0, 1]")
        quota = tuple((Quartile(q), int(lo), None if hi is None else int(hi)) for q, lo, hi in self.quota)
        object.__setattr__(self, "quota", quota)
        expected_start = 1
        for i, (q, lo, hi) in enumerate(quota):
            if q is Quartile.INSUFFICIENT_DATA:
                raise ValueError("InsufficientData cannot carry a quota")
            if lo != expected_start:
                raise ValueError(f"quota for {q.value} starts at {lo}, expected {expected_start}")
            if hi is None:
                if i != len(quota) - 1:
                    raise ValueError("only the last quota range may be open-ended")
            else:
                if hi < lo:
                    raise ValueError(f"quota for {q.value} is empty")
                expected_start = hi + 1

    def quartile_for_rank(self, rank: int) -> Quartile:
        for q, lo, hi in self.quota:
            if lo <= rank and (hi is None or rank <= hi):
                return q
        # bounded quota table exhausted: tail joins the last quartile
        return self.quota[-1][0]


def composite_score(ind: VenueIndicators, cfg: ScoringConfig = ScoringConfig()) -> float:
    """Weighted sum of the four indicators, with the self-citation penalty.

    ``ind.if2`` must already be the effective value: measured for journals,
    estimated for proceedings.
    """
    score = (
        cfg.w_fwci * ind.fwci_mean
        + cfg.w_if2 * ind.if2
        + cfg.w_h5 * math.log1p(ind.h5)
        + cfg.w_cagr * math.log1p(max(ind.cite_cagr, 0.0))
    )
    if ind.self_citation_rate > cfg.self_cite_threshold:
        score *= cfg.self_cite_penalty
    return score


@dataclass(frozen=True)
class ScoredVenue:
    venue_id: str
    score: float
    n_valid_papers: int
    fwci_mean: float = 0.0


def assign_quartiles(scored: Iterable[ScoredVenue], cfg: ScoringConfig = ScoringConfig()) -> list[RankedVenue]:
    """Rank venues by score and cut the ranking by the fixed quota table.

    Ties break on FWCI mean (higher first), then venue id. Venues under the
    minimum paper count come last, unranked, ordered by venue id.
    """
    scored = list(scored)
    for s in scored:
        if not math.isfinite(s.score) or s.score < 0:
            raise ValueError(f"{s.venue_id}: score {s.score} is not a finite non-negative number")
    eligible = [s for s in scored if s.n_valid_papers >= cfg.min_valid_papers]
    excluded = [s for s in scored if s.n_valid_papers < cfg.min_valid_papers]
    eligible.sort(key=lambda s: (-s.score, -s.fwci_mean, s.venue_id))

    out = [
        RankedVenue(s.venue_id, s.score, rank, cfg.quartile_for_rank(rank))
        for rank, s in enumerate(eligible, start=1)
    ]
    out += [
        RankedVenue(s.venue_id, s.score, None, Quartile.INSUFFICIENT_DATA)
        for s in sorted(excluded, key=lambda s: s.venue_id)
    ]
    return out


def quartile_counts(ranked: Sequence[RankedVenue]) -> dict[Quartile, int]:
    counts = {q: 0 for q in Quartile}
    for r in ranked:
        counts[r.quartile] += 1
    return counts
