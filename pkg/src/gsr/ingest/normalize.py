"""Map raw OpenAlex / Semantic Scholar records onto :class:`PaperRecord`."""
from __future__ import annotations

import enum
import re
from typing import Any, Iterable, Iterator, Mapping, Optional

from gsr.model import DocType, PaperRecord

OPENALEX_PREFIX = "https://openalex.org/"

# S2 publicationTypes that denote research content
_S2_RESEARCH_TYPES = {"journalarticle", "conference", "study", "clinicaltrial", "casereport", "metaanalysis"}


class Source(str, enum.Enum):
    OPENALEX = "OpenAlexSource"
    S2 = "S2Venue"


class NormalizationError(ValueError):
    pass


class MissingIdentifier(NormalizationError):
    pass


class MissingYear(NormalizationError):
    pass


def short_openalex_id(value: str) -> str:
    return value[len(OPENALEX_PREFIX):] if value.startswith(OPENALEX_PREFIX) else value


def _has_abstract(value: Any) -> bool:
    return bool(value)


def _s2_doc_type(types: Optional[list[str]]) -> DocType:
    # S2 leaves publicationTypes empty for most proceedings papers
    if not types:
        return DocType.ARTICLE
    lowered = {t.lower() for t in types}
    if "review" in lowered:
        return DocType.REVIEW
    if lowered & _S2_RESEARCH_TYPES:
        return DocType.ARTICLE
    return DocType.OTHER


def normalize(raw: Mapping[str, Any], source: Source, venue_id: str) -> PaperRecord:
    """Build a :class:`PaperRecord` from one raw API record.

    A missing ``counts_by_year`` becomes an empty series, which routes the
    venue onto the estimated-IF2 path downstream.
    """
    source = Source(source)
    if source is Source.OPENALEX:
        pid = raw.get("id")
        if not pid:
            raise MissingIdentifier("OpenAlex work without id")
        year = raw.get("publication_year")
        if year is None:
            raise MissingYear(f"{pid}: no publication_year")
        refs = raw.get("referenced_works")
        fwci = raw.get("fwci")
        counts = raw.get("counts_by_year") or []
        return PaperRecord(
            paper_id=short_openalex_id(pid),
            venue_id=venue_id,
            publication_year=int(year),
            doc_type=DocType.from_source(raw.get("type")),
            fwci=None if fwci is None else float(fwci),
            cited_by_count=int(raw.get("cited_by_count") or 0),
            counts_by_year=tuple(
                sorted((int(c["year"]), int(c["cited_by_count"])) for c in counts)
            ),
            is_retracted=bool(raw.get("is_retracted", False)),
            is_paratext=bool(raw.get("is_paratext", False)),
            has_abstract=_has_abstract(raw.get("abstract_inverted_index")),
            referenced_works=None if refs is None else tuple(short_openalex_id(r) for r in refs),
        )

    pid = raw.get("paperId")
    if not pid:
        raise MissingIdentifier("S2 paper without paperId")
    year = raw.get("year")
    if year is None:
        raise MissingYear(f"{pid}: no year")
    refs = raw.get("references")
    return PaperRecord(
        paper_id=str(pid),
        venue_id=venue_id,
        publication_year=int(year),
        doc_type=_s2_doc_type(raw.get("publicationTypes")),
        fwci=None,
        cited_by_count=int(raw.get("citationCount") or 0),
        counts_by_year=(),
        has_abstract=_has_abstract(raw.get("abstract")),
        referenced_works=None if refs is None else tuple(r["paperId"] for r in refs if r.get("paperId")),
    )


def _dedupe_key(raw: Mapping[str, Any], source: Source) -> Optional[str]:
    if source is Source.OPENALEX:
        doi = raw.get("doi")
        title = raw.get("title") or raw.get("display_name")
    else:
        doi = (raw.get("externalIds") or {}).get("DOI")
        title = raw.get("title")
    if doi:
        doi = doi.lower().strip()
        for prefix in ("https://doi.org/", "http://dx.doi.org/", "doi:"):
            if doi.startswith(prefix):
                doi = doi[len(prefix):]
        return "doi:" + doi
    if title:
        return "title:" + " ".join(re.sub(r"[^0-9a-z]+", " ", title.lower()).split())
    return None


def dedupe_raw(items: Iterable[tuple[Source, Mapping[str, Any]]]) -> Iterator[tuple[Source, Mapping[str, Any]]]:
    """Drop records whose DOI (or, failing that, normalized title) was already seen.

    The first occurrence wins, so list the richer source first.
    """
    seen: set[str] = set()
    for source, raw in items:
        key = _dedupe_key(raw, Source(source))
        if key is not None:
            if key in seen:
                continue
            seen.add(key)
        yield source, raw
