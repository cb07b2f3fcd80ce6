import pytest
from hypothesis import given
from hypothesis import strategies as st

from gsr.model import (
    CalibrationResult,
    DocType,
    DuplicateYearEntry,
    Field,
    InvalidFwci,
    InvalidYear,
    NegativeCitation,
    PaperRecord,
    Quartile,
    RankedVenue,
    VenueIndicators,
    VenueKind,
    VenueMeta,
    validate_record,
    validate_venue,
)

from helpers import paper


def test_well_formed_record_accepted():
    rec = paper(counts=[(2023, 5), (2024, 7)], cited=12)
    assert validate_record(rec) is rec


def test_duplicate_year_rejected():
    with pytest.raises(DuplicateYearEntry) as info:
        validate_record(paper(counts=[(2023, 5), (2023, 2)]))
    assert info.value.invariant == "distinct_counts_by_year"


def test_negative_fwci_rejected():
    with pytest.raises(InvalidFwci):
        validate_record(paper(fwci=-0.5))


@pytest.mark.parametrize("rec,exc", [
    (paper(year=1949), InvalidYear),
    (paper(year=2027), InvalidYear),
    (paper(cited=-1), NegativeCitation),
    (paper(counts=[(2024, -3)]), NegativeCitation),
])
def test_invariant_violations(rec, exc):
    with pytest.raises(exc):
        validate_record(rec)


def test_year_window_is_configurable():
    assert validate_record(paper(year=2030), year_window=(1950, 2035)).publication_year == 2030


def test_doc_type_mapping_is_closed():
    assert DocType.from_source("article") is DocType.ARTICLE
    assert DocType.from_source("Review") is DocType.REVIEW
    for label in ("editorial", "letter", "book-chapter", "", None):
        assert DocType.from_source(label) is DocType.OTHER


records = st.builds(
    PaperRecord,
    paper_id=st.text(min_size=1, max_size=8),
    venue_id=st.text(min_size=1, max_size=5),
    publication_year=st.integers(1950, 2026),
    doc_type=st.sampled_from(DocType),
    fwci=st.none() | st.floats(0, 1e6, allow_nan=False),
    cited_by_count=st.integers(0, 10**6),
    counts_by_year=st.dictionaries(st.integers(1950, 2030), st.integers(0, 10**5), max_size=6).map(
        lambda d: tuple(sorted(d.items()))
    ),
    is_retracted=st.booleans(),
    is_paratext=st.booleans(),
    has_abstract=st.booleans(),
    referenced_works=st.none() | st.lists(st.text(max_size=6), max_size=5).map(tuple),
)


@given(records)
def test_validation_idempotent(rec):
    once = validate_record(rec)
    assert validate_record(once) == once


@given(records)
def test_serialization_round_trip(rec):
    assert PaperRecord.from_dict(rec.to_dict()) == rec


def test_absent_optionals_are_omitted():
    d = paper(fwci=None, refs=None).to_dict()
    assert "fwci" not in d and "referenced_works" not in d
    assert list(d) == ["paper_id", "venue_id", "publication_year", "doc_type", "cited_by_count",
                       "counts_by_year", "is_retracted", "is_paratext", "has_abstract"]


def test_venue_needs_an_external_id():
    with pytest.raises(ValueError):
        VenueMeta("v", "V", VenueKind.JOURNAL, Field.CS)


def test_medicine_conference_needs_override():
    meta = VenueMeta("v", "V", VenueKind.CONFERENCE, Field.MEDICINE, s2_venue_id="x")
    with pytest.raises(ValueError):
        validate_venue(meta)
    assert validate_venue(meta, allow_non_cs_conferences=True) is meta


def test_ranked_venue_rank_iff_sufficient():
    RankedVenue("v", 1.0, 1, Quartile.Q1)
    RankedVenue("v", 1.0, None, Quartile.INSUFFICIENT_DATA)
    with pytest.raises(ValueError):
        RankedVenue("v", 1.0, None, Quartile.Q2)
    with pytest.raises(ValueError):
        RankedVenue("v", 1.0, 3, Quartile.INSUFFICIENT_DATA)


def test_indicator_bounds():
    ok = dict(fwci_mean=1, fwci_coverage=0.5, if2=1, if2_is_estimated=False, h5=1,
              cite_cagr=-0.5, self_citation_rate=0.2, n_valid_papers=5)
    VenueIndicators(**ok)
    for key, bad in [("cite_cagr", -1.5), ("fwci_coverage", 1.2), ("self_citation_rate", -0.1)]:
        with pytest.raises(ValueError):
            VenueIndicators(**{**ok, key: bad})


def test_calibration_result_invariants():
    q = {"p10": 0.4, "p25": 0.6, "p50": 0.75, "p75": 0.9, "p90": 1.0}
    res = CalibrationResult(0.75, 10, q)
    assert CalibrationResult.from_dict(res.to_dict()) == res
    with pytest.raises(ValueError):
        CalibrationResult(0.8, 10, q)
    with pytest.raises(ValueError):
        CalibrationResult(0.75, 10, {**q, "p25": 0.8})
    with pytest.raises(ValueError):
        CalibrationResult(0.0, 10, {k: 0.0 for k in q})
