from __future__ import annotations

import datetime as dt
from typing import Optional

from gsr.ingest import Snapshot
from gsr.model import DocType, Field, PaperRecord, VenueKind, VenueMeta
from gsr.pipeline import VenueMeasurement

Y = 2025


def paper(
    pid: str = "W1",
    venue: str = "v1",
    year: int = Y - 1,
    doc_type: DocType = DocType.ARTICLE,
    fwci: Optional[float] = 1.0,
    cited: int = 0,
    counts=(),
    retracted: bool = False,
    paratext: bool = False,
    abstract: bool = True,
    refs=None,
) -> PaperRecord:
    return PaperRecord(
        paper_id=pid, venue_id=venue, publication_year=year, doc_type=doc_type, fwci=fwci,
        cited_by_count=cited, counts_by_year=tuple(counts), is_retracted=retracted,
        is_paratext=paratext, has_abstract=abstract, referenced_works=None if refs is None else tuple(refs),
    )


def venue(
    vid: str,
    kind: VenueKind = VenueKind.JOURNAL,
    fld: Field = Field.CS,
    **kw,
) -> VenueMeta:
    ids = {"openalex_source_id": f"S-{vid}"} if kind is VenueKind.JOURNAL else {"s2_venue_id": f"K-{vid}"}
    ids.update(kw)
    return VenueMeta(venue_id=vid, display_name=vid.upper(), kind=kind, field=fld, **ids)


def measurement(
    vid: str,
    *,
    conference: bool = False,
    fwci: float = 0.0,
    if2: float = 0.0,
    mean_citations: float = 0.0,
    h5: int = 0,
    cagr: float = 0.0,
    n_valid: int = 100,
    fld: Field = Field.CS,
) -> VenueMeasurement:
    """Measurement built directly; conferences carry no FWCI so it gets estimated."""
    kind = VenueKind.CONFERENCE if conference else VenueKind.JOURNAL
    return VenueMeasurement(
        meta=venue(vid, kind, fld),
        retrieval_year=Y,
        fwci_mean=0.0 if conference else fwci,
        fwci_coverage=0.0 if conference else 1.0,
        if2_measured=None if conference else if2,
        if2_paper_count=n_valid,
        mean_citations_if2=mean_citations,
        h5=h5,
        cite_cagr=cagr,
        self_citation_rate=0.0,
        self_citation_computable=True,
        n_valid_papers=n_valid,
    )


def venue_snapshot(vid: str, n_papers: int, cites_per_paper: int, date=dt.date(2025, 3, 1)) -> Snapshot:
    """Journal snapshot whose IF2 papers each carry ``cites_per_paper`` year-Y citations."""
    records = []
    for i in range(n_papers):
        year = Y - 1 - (i % 2)
        counts = ((Y, cites_per_paper),) if cites_per_paper else ()
        records.append(paper(f"{vid}-W{i}", vid, year, fwci=1.0 + cites_per_paper / 10, cited=cites_per_paper,
                             counts=counts))
    return Snapshot(vid, date, tuple(records))


def boundary_swap_fixture() -> list[VenueMeasurement]:
    """Mixed field where two conferences straddle the Q1/Q2 boundary.

    49 strong journals fill ranks 1-49. Conferences "conf-a" (mean 100
    citations, h5 0) and "conf-b" (mean 99, h5 7) hold ranks 50 and 51 for
    every coefficient in [0.5, 1.0] and trade places as it moves. 60 weak
    journals and one weak conference sit below. Journals have FWCI = 0.2 IF2,
    so the derived conversion is 0.2.
    """
    ms = [measurement(f"top-{i:02d}", fwci=0.2 * (1000 + i), if2=1000.0 + i) for i in range(49)]
    ms.append(measurement("conf-a", conference=True, mean_citations=100.0, h5=0))
    ms.append(measurement("conf-b", conference=True, mean_citations=99.0, h5=7))
    ms += [measurement(f"low-{i:02d}", fwci=0.05 * (i + 1), if2=0.25 * (i + 1)) for i in range(60)]
    ms.append(measurement("conf-z", conference=True, mean_citations=0.2, h5=0))
    return ms


def single_straddler_fixture() -> list[VenueMeasurement]:
    """One conference crossing a journal at the Q1/Q2 boundary."""
    ms = [measurement(f"top-{i:02d}", fwci=0.2 * (1000 + i), if2=1000.0 + i) for i in range(49)]
    ms.append(measurement("conf-a", conference=True, mean_citations=100.0, h5=0))
    # journal scores 0.42 * 72.5 = 30.45 and conf-a scores 42c, so they cross at c = 0.725
    ms.append(measurement("jour-x", fwci=0.2 * 72.5, if2=72.5))
    ms += [measurement(f"low-{i:02d}", fwci=0.2 * (i + 1), if2=float(i + 1)) for i in range(20)]
    return ms
