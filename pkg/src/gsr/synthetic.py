"""Seeded synthetic corpora shaped like OpenAlex and Semantic Scholar responses.

Used by the demos and the test suite to exercise the full pipeline offline.
"""
from __future__ import annotations

import dataclasses
import datetime as dt
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from gsr.ingest.normalize import Source, normalize
from gsr.ingest.snapshot import Snapshot
from gsr.model import CcfTier, Field, Quartile, VenueKind, VenueMeta, validate_record

_OA = "https://openalex.org/"


def _series(rng: np.random.Generator, total: int, pub_year: int, retrieval_year: int) -> list[dict]:
    years = np.arange(pub_year, retrieval_year + 1)
    # later years weigh more: citations accumulate after publication
    weights = np.arange(1, len(years) + 1, dtype=float)
    counts = rng.multinomial(total, weights / weights.sum())
    return [{"year": int(y), "cited_by_count": int(n)} for y, n in zip(years, counts) if n > 0][::-1]


def openalex_works(
    source_id: str,
    n: int,
    rng: np.random.Generator,
    retrieval_year: int = 2025,
    impact: float = 5.0,
    with_series: bool = True,
    with_fwci: bool = True,
    self_cite_share: float = 0.1,
) -> list[dict]:
    """Raw OpenAlex work objects for one source."""
    ids = [f"{_OA}W{source_id}{i:06d}" for i in range(n)]
    works = []
    for i, wid in enumerate(ids):
        year = int(rng.integers(retrieval_year - 5, retrieval_year))
        age = retrieval_year - year
        cited = int(rng.poisson(impact * age))
        kind = rng.choice(["article", "review", "editorial"], p=[0.85, 0.1, 0.05])
        n_refs = int(rng.integers(5, 30))
        n_self = int(rng.binomial(n_refs, self_cite_share))
        refs = [ids[j] for j in rng.integers(0, n, size=n_self)]
        refs += [f"{_OA}W9{int(x):09d}" for x in rng.integers(0, 10**9, size=n_refs - n_self)]
        fwci = None
        if with_fwci and rng.random() < 0.9:
            fwci = round(float(cited / max(impact * age, 1e-9) * rng.gamma(4.0, 0.25)), 4)
        works.append({
            "id": wid,
            "doi": f"https://doi.org/10.5555/{source_id.lower()}.{i}",
            "title": f"Synthetic work {i} of {source_id}",
            "publication_year": year,
            "type": str(kind),
            "fwci": fwci,
            "cited_by_count": cited,
            "counts_by_year": _series(rng, cited, year, retrieval_year) if with_series else [],
            "is_retracted": bool(rng.random() < 0.005),
            "is_paratext": bool(kind == "editorial" and rng.random() < 0.5),
            "abstract_inverted_index": {"synthetic": [0]} if rng.random() < 0.93 else None,
            "referenced_works": refs,
        })
    return works


def s2_papers(
    venue_key: str,
    n: int,
    rng: np.random.Generator,
    retrieval_year: int = 2025,
    impact: float = 20.0,
) -> list[dict]:
    """Raw Semantic Scholar bulk-search objects for one proceedings series."""
    papers = []
    for i in range(n):
        year = int(rng.integers(retrieval_year - 5, retrieval_year))
        age = retrieval_year - year
        papers.append({
            "paperId": f"s2{venue_key.lower()}{i:06d}",
            "externalIds": {"DOI": f"10.7777/{venue_key.lower()}.{i}"},
            "title": f"Synthetic proceedings paper {i} of {venue_key}",
            "year": year,
            "publicationTypes": ["Conference"] if rng.random() < 0.5 else None,
            "citationCount": int(rng.poisson(impact * age)),
            "abstract": "synthetic" if rng.random() < 0.95 else None,
        })
    return papers


@dataclass
class SyntheticCorpus:
    venues: list[VenueMeta]
    openalex: dict[str, list[dict]] = field(default_factory=dict)
    s2: dict[str, list[dict]] = field(default_factory=dict)

    @property
    def n_papers(self) -> int:
        return sum(map(len, self.openalex.values())) + sum(map(len, self.s2.values()))


def make_corpus(
    n_journals: int = 20,
    n_conferences: int = 5,
    papers_per_venue: int = 200,
    seed: int = 0,
    retrieval_year: int = 2025,
    medicine_journals: int = 0,
    thin_venues: int = 0,
) -> SyntheticCorpus:
    """Mixed CS corpus (journals via OpenAlex, conferences via S2), optional medicine journals.

    ``thin_venues`` extra CS journals get only 10 papers, so they fall under
    the minimum-paper gate.
    """
    rng = np.random.default_rng(seed)
    corpus = SyntheticCorpus(venues=[])
    tiers = [CcfTier.A, CcfTier.B, CcfTier.C]

    def journal(i: int, fld: Field, n: int):
        sid = f"S{fld.value[:1]}{i:04d}"
        vid = f"{fld.value.lower()}-j{i:03d}"
        impact = float(rng.lognormal(1.2, 0.6))
        corpus.venues.append(VenueMeta(
            venue_id=vid, display_name=f"{fld.value} Journal {i}", kind=VenueKind.JOURNAL, field=fld,
            openalex_source_id=sid,
        ))
        corpus.openalex[sid] = openalex_works(sid, n, rng, retrieval_year, impact)

    for i in range(n_journals):
        journal(i, Field.CS, papers_per_venue)
    for i in range(n_conferences):
        key = f"CONF{i:03d}"
        corpus.venues.append(VenueMeta(
            venue_id=f"cs-c{i:03d}", display_name=f"Conference {i}", kind=VenueKind.CONFERENCE,
            field=Field.CS, s2_venue_id=key, ccf_tier=tiers[i % 3],
        ))
        corpus.s2[key] = s2_papers(key, papers_per_venue, rng, retrieval_year, float(rng.lognormal(2.0, 0.7)))
    for i in range(medicine_journals):
        journal(i, Field.MEDICINE, papers_per_venue)
    for i in range(thin_venues):
        journal(n_journals + i, Field.CS, 10)
    return corpus


def label_venues(corpus: SyntheticCorpus, jcr: Optional[dict[str, str]] = None) -> None:
    """Attach JCR quartile labels (venue_id -> "Q1".."Q4") in place."""
    jcr = jcr or {}
    corpus.venues = [
        dataclasses.replace(v, jcr_quartile=Quartile(jcr[v.venue_id])) if v.venue_id in jcr else v
        for v in corpus.venues
    ]


def snapshots(corpus: SyntheticCorpus, retrieval_date: dt.date = dt.date(2025, 3, 1)) -> list[tuple[VenueMeta, Snapshot]]:
    """Normalize the raw corpus offline, one snapshot per venue (no HTTP)."""
    out = []
    for meta in corpus.venues:
        if meta.openalex_source_id:
            raw, source = corpus.openalex.get(meta.openalex_source_id, []), Source.OPENALEX
        else:
            raw, source = corpus.s2.get(meta.s2_venue_id, []), Source.S2
        records = tuple(validate_record(normalize(item, source, meta.venue_id)) for item in raw)
        out.append((meta, Snapshot(meta.venue_id, retrieval_date, records)))
    return out
