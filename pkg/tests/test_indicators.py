import datetime as dt
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gsr.indicators import (
    MissingTimeSeries,
    cite_cagr,
    fwci_mean,
    h5,
    h_index,
    if2,
    self_citation_rate,
    yearly_citation_totals,
)
from gsr.ingest import FilterPurpose, Snapshot, apply_quality_filter, read_snapshot, write_snapshot

from helpers import Y, paper
from oracles import brute_force_h, recount_if2


# --- FWCI mean ---------------------------------------------------------------

def test_fwci_two_point_mean():
    assert fwci_mean([paper("a", fwci=2.0), paper("b", fwci=4.0)]) == (3.0, 1.0)


def test_fwci_missing_and_zero():
    mean, coverage = fwci_mean([paper("a", fwci=1.0), paper("b", fwci=None), paper("c", fwci=0.0)])
    assert mean == 1.0
    assert coverage == pytest.approx(1 / 3)


def test_fwci_empty():
    assert fwci_mean([]) == (0.0, 0.0)
    assert fwci_mean([paper(fwci=None)]) == (0.0, 0.0)


@given(st.lists(st.floats(0.01, 100), min_size=1, max_size=30), st.randoms())
def test_fwci_permutation_invariant_and_bounded(values, rnd):
    papers = [paper(str(i), fwci=v) for i, v in enumerate(values)]
    mean, _ = fwci_mean(papers)
    shuffled = papers[:]
    rnd.shuffle(shuffled)
    assert fwci_mean(shuffled)[0] == pytest.approx(mean, rel=1e-12)
    assert min(values) - 1e-9 <= mean <= max(values) + 1e-9


# --- IF2 ---------------------------------------------------------------------

def test_if2_direct_count():
    papers = [paper("a", cited=3, counts=[(Y, 3)]), paper("b", cited=9, counts=[(Y - 1, 2), (Y, 7)])]
    assert if2(papers, Y) == 5.0


def test_if2_empty():
    assert if2([], Y) == 0.0


def test_if2_missing_series():
    with pytest.raises(MissingTimeSeries):
        if2([paper("a", cited=4, counts=())], Y)
    # uncited papers have an empty series legitimately
    assert if2([paper("a", cited=0, counts=()), paper("b", cited=2, counts=[(Y, 2)])], Y) == 1.0


def test_if2_against_snapshot_recount(tmp_path):
    # ten IF2-window papers with year-Y counts 0..9 plus out-of-window noise
    records = [paper(f"W{i}", year=Y - 1 - i % 2, cited=i + 5, counts=[(Y - 1, 5), (Y, i)] if i else [(Y - 1, 5)])
               for i in range(10)]
    records += [paper("old", year=Y - 4, cited=50, counts=[(Y, 50)])]
    path = write_snapshot(Snapshot("v1", dt.date(Y, 3, 1), tuple(records)), tmp_path / "v1.jsonl")

    numerator, denominator = recount_if2(path, Y)
    assert (numerator, denominator) == (45, 10)

    snap = read_snapshot(path)
    value = if2(apply_quality_filter(snap.records, FilterPurpose.IF2, Y), Y)
    assert value == numerator / denominator == 4.5


@given(st.lists(st.integers(0, 50), min_size=1, max_size=20))
def test_if2_scale_consistent(year_y):
    papers = [paper(str(i), cited=c, counts=[(Y, c)] if c else []) for i, c in enumerate(year_y)]
    doubled = papers + [paper(f"d{i}", cited=p.cited_by_count, counts=p.counts_by_year) for i, p in enumerate(papers)]
    assert if2(doubled, Y) == pytest.approx(if2(papers, Y), rel=1e-12)


# --- h5 ----------------------------------------------------------------------

def test_h5_examples():
    assert h_index([10, 8, 5, 4, 3, 1]) == brute_force_h([10, 8, 5, 4, 3, 1]) == 4
    assert h5([]) == 0
    assert h5([paper(str(i), cited=0) for i in range(5)]) == 0
    assert h5([paper(str(i), cited=c) for i, c in enumerate([10, 8, 5, 4, 3, 1])]) == 4


@given(st.lists(st.integers(0, 100), max_size=50))
def test_h_index_matches_brute_force(cites):
    assert h_index(cites) == brute_force_h(cites)


@given(st.lists(st.integers(0, 100), max_size=40), st.integers(0, 100), st.data())
def test_h_index_monotone(cites, extra, data):
    assert h_index(cites + [extra]) >= h_index(cites)
    if cites:
        i = data.draw(st.integers(0, len(cites) - 1))
        bumped = cites[:]
        bumped[i] += 1
        assert h_index(bumped) >= h_index(cites)


# --- CAGR --------------------------------------------------------------------

def test_cagr_examples():
    assert cite_cagr({2022: 100, 2024: 225}, 2025) == pytest.approx(0.5, abs=1e-12)
    assert cite_cagr({2022: 0, 2024: 500}, 2025) == 0.0
    assert cite_cagr({2024: 500}, 2025) == 0.0
    assert cite_cagr({2022: 400, 2024: 100}, 2025) == pytest.approx(-0.5, abs=1e-12)
    assert cite_cagr({2025: 400, 2027: 900}, 2028) == pytest.approx(0.5)


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_cagr_zero_start_and_bounds(c22, c23, c24):
    value = cite_cagr({2022: c22, 2023: c23, 2024: c24}, 2025)
    if c22 == 0:
        assert value == 0.0
    assert value >= -1.0


def test_yearly_totals():
    totals = yearly_citation_totals([paper("a", counts=[(2022, 3), (2023, 1)]), paper("b", counts=[(2022, 2)])])
    assert totals == {2022: 5, 2023: 1}


# --- self-citation -----------------------------------------------------------

def test_self_citation_hand_count():
    papers = [
        paper("A", refs=["B", "C", "X1"]),
        paper("B", refs=["A", "X2", "X3"]),
        paper("C", refs=["A", "X4", "X5", "X6"]),
    ]
    rate, ok = self_citation_rate(papers, {"A", "B", "C"})
    assert ok and rate == pytest.approx(0.4)


def test_self_citation_degenerate_and_full():
    assert self_citation_rate([paper("A"), paper("B")], {"A", "B"}) == (0.0, False)
    assert self_citation_rate([paper("A", refs=[])], {"A"}) == (0.0, False)
    assert self_citation_rate([paper("A", refs=["B"]), paper("B", refs=["A"])], {"A", "B"}) == (1.0, True)


@given(st.lists(st.lists(st.sampled_from(["A", "B", "C", "X", "Y"]), max_size=6), max_size=6))
def test_self_citation_in_unit_interval(ref_lists):
    papers = [paper(str(i), refs=refs) for i, refs in enumerate(ref_lists)]
    rate, _ = self_citation_rate(papers, {"A", "B", "C"})
    assert 0.0 <= rate <= 1.0 and not math.isnan(rate)
