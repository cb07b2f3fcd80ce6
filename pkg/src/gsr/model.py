"""Core domain types: papers, venues, indicators and rankings."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

DEFAULT_YEAR_WINDOW = (1950, 2026)


class DocType(str, enum.Enum):
    ARTICLE = "Article"
    REVIEW = "Review"
    OTHER = "Other"

    @classmethod
    def from_source(cls, label: Optional[str]) -> "DocType":
        """Map a source type string onto the closed enum."""
        key = (label or "").strip().lower()
        if key == "article":
            return cls.ARTICLE
        if key == "review":
            return cls.REVIEW
        return cls.OTHER


class VenueKind(str, enum.Enum):
    JOURNAL = "Journal"
    CONFERENCE = "Conference"


class Field(str, enum.Enum):
    CS = "CS"
    MEDICINE = "Medicine"


class CcfTier(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"


class Quartile(str, enum.Enum):
    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"
    Q4 = "Q4"
    INSUFFICIENT_DATA = "InsufficientData"


class RecordRejected(ValueError):
    """A paper record violates one of its invariants."""

    invariant = "record"

    def __init__(self, paper_id: str, detail: str):
        super().__init__(f"{paper_id}: {self.invariant}: {detail}")
        self.paper_id = paper_id
        self.detail = detail


class InvalidYear(RecordRejected):
    invariant = "publication_year"


class NegativeCitation(RecordRejected):
    invariant = "non_negative_citations"


class DuplicateYearEntry(RecordRejected):
    invariant = "distinct_counts_by_year"


class InvalidFwci(RecordRejected):
    invariant = "non_negative_fwci"


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    venue_id: str
    publication_year: int
    doc_type: DocType
    fwci: Optional[float] = None
    cited_by_count: int = 0
    counts_by_year: tuple[tuple[int, int], ...] = ()
    is_retracted: bool = False
    is_paratext: bool = False
    has_abstract: bool = True
    referenced_works: Optional[tuple[str, ...]] = None

    def citations_in(self, year: int) -> int:
        for y, n in self.counts_by_year:
            if y == year:
                return n
        return 0

    def to_dict(self) -> dict[str, Any]:
        # key order is part of the snapshot format
        out: dict[str, Any] = {
            "paper_id": self.paper_id,
            "venue_id": self.venue_id,
            "publication_year": self.publication_year,
            "doc_type": self.doc_type.value,
        }
        if self.fwci is not None:
            out["fwci"] = self.fwci
        out["cited_by_count"] = self.cited_by_count
        out["counts_by_year"] = [[y, n] for y, n in self.counts_by_year]
        out["is_retracted"] = self.is_retracted
        out["is_paratext"] = self.is_paratext
        out["has_abstract"] = self.has_abstract
        if self.referenced_works is not None:
            out["referenced_works"] = list(self.referenced_works)
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PaperRecord":
        refs = data.get("referenced_works")
        fwci = data.get("fwci")
        return cls(
            paper_id=str(data["paper_id"]),
            venue_id=str(data["venue_id"]),
            publication_year=int(data["publication_year"]),
            doc_type=DocType(data["doc_type"]),
            fwci=None if fwci is None else float(fwci),
            cited_by_count=int(data["cited_by_count"]),
            counts_by_year=tuple((int(y), int(n)) for y, n in data.get("counts_by_year", [])),
            is_retracted=bool(data.get("is_retracted", False)),
            is_paratext=bool(data.get("is_paratext", False)),
            has_abstract=bool(data.get("has_abstract", False)),
            referenced_works=None if refs is None else tuple(str(r) for r in refs),
        )


def validate_record(record: PaperRecord, year_window: tuple[int, int] = DEFAULT_YEAR_WINDOW) -> PaperRecord:
    """Return ``record`` unchanged if it satisfies every record invariant.

    Raises a :class:`RecordRejected` subclass naming the violated invariant.
    """
    lo, hi = year_window
    pid = record.paper_id
    if not lo <= record.publication_year <= hi:
        raise InvalidYear(pid, f"{record.publication_year} outside {lo}-{hi}")
    if record.cited_by_count < 0:
        raise NegativeCitation(pid, f"cited_by_count={record.cited_by_count}")
    if record.fwci is not None and not record.fwci >= 0:
        raise InvalidFwci(pid, f"fwci={record.fwci}")
    seen: set[int] = set()
    for year, n in record.counts_by_year:
        if n < 0:
            raise NegativeCitation(pid, f"{n} citations in {year}")
        if year in seen:
            raise DuplicateYearEntry(pid, f"year {year} listed twice")
        seen.add(year)
    return record


@dataclass(frozen=True)
class VenueMeta:
    venue_id: str
    display_name: str
    kind: VenueKind
    field: Field
    openalex_source_id: Optional[str] = None
    s2_venue_id: Optional[str] = None
    ccf_tier: Optional[CcfTier] = None
    jcr_quartile: Optional[Quartile] = None

    def __post_init__(self):
        if not (self.openalex_source_id or self.s2_venue_id):
            raise ValueError(f"venue {self.venue_id!r} needs an OpenAlex source id or an S2 venue id")
        if self.jcr_quartile is Quartile.INSUFFICIENT_DATA:
            raise ValueError("jcr_quartile must be one of Q1..Q4")

    @property
    def is_conference(self) -> bool:
        return self.kind is VenueKind.CONFERENCE


def validate_venue(meta: VenueMeta, allow_non_cs_conferences: bool = False) -> VenueMeta:
    if meta.is_conference and meta.field is not Field.CS and not allow_non_cs_conferences:
        raise ValueError(f"venue {meta.venue_id!r}: conferences are only ranked in the CS field")
    return meta


@dataclass(frozen=True)
class VenueIndicators:
    fwci_mean: float
    fwci_coverage: float
    if2: float
    if2_is_estimated: bool
    h5: int
    cite_cagr: float
    self_citation_rate: float
    n_valid_papers: int
    # diagnostics such as "if2_empty_denominator" or "self_citation_not_computable"
    flags: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.fwci_mean < 0 or self.if2 < 0 or self.h5 < 0 or self.n_valid_papers < 0:
            raise ValueError("indicators must be non-negative")
        if not 0.0 <= self.fwci_coverage <= 1.0:
            raise ValueError(f"fwci_coverage={self.fwci_coverage} outside [0, 1]")
        if not 0.0 <= self.self_citation_rate <= 1.0:
            raise ValueError(f"self_citation_rate={self.self_citation_rate} outside [0, 1]")
        if self.cite_cagr < -1.0:
            raise ValueError(f"cite_cagr={self.cite_cagr} below -1")


@dataclass(frozen=True)
class RankedVenue:
    venue_id: str
    score: float
    rank: Optional[int]
    quartile: Quartile

    def __post_init__(self):
        if (self.quartile is Quartile.INSUFFICIENT_DATA) != (self.rank is None):
            raise ValueError("rank must be absent exactly when data are insufficient")
        if self.rank is not None and self.rank < 1:
            raise ValueError("rank must be positive")


QUANTILE_KEYS = ("p10", "p25", "p50", "p75", "p90")


@dataclass(frozen=True)
class CalibrationResult:
    coefficient: float
    n_papers: int
    quantiles: Mapping[str, float]

    def __post_init__(self):
        if not 0.0 < self.coefficient <= 1.0:
            raise ValueError(f"calibration coefficient {self.coefficient} outside (0, 1]")
        values = [self.quantiles[k] for k in QUANTILE_KEYS]
        if any(b < a for a, b in zip(values, values[1:])):
            raise ValueError("quantiles must be non-decreasing")
        if self.quantiles["p50"] != self.coefficient:
            raise ValueError("coefficient must equal the median (p50)")

    def to_dict(self) -> dict[str, Any]:
        return {
            "coefficient": self.coefficient,
            "n_papers": self.n_papers,
            "quantiles": {k: self.quantiles[k] for k in QUANTILE_KEYS},
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CalibrationResult":
        return cls(
            coefficient=float(data["coefficient"]),
            n_papers=int(data["n_papers"]),
            quantiles={k: float(data["quantiles"][k]) for k in QUANTILE_KEYS},
        )
