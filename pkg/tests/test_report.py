import csv
import io
import json

import pytest

from gsr.model import Field, Quartile, RankedVenue, VenueIndicators, VenueKind
from gsr.pipeline import RankingRow, rank_all
from gsr.report import (
    RANKING_COLUMNS,
    Figure,
    IoFailure,
    MissingAnalysis,
    emit_figure_data,
    emit_ranking,
    emit_sensitivity,
    emit_validation_report,
    ranking_csv,
    ranking_markdown,
    ratio_histogram,
)
from gsr.validation import BinaryConfusion, SensitivityReport, SweepPoint, ccf_cross_tab

from helpers import measurement, venue


def row(vid, rank, score, quartile=Quartile.Q1, kind=VenueKind.JOURNAL, name=None, fwci=1.0, if2=1.0, h5=1, n=50):
    meta = venue(vid, kind)
    if name:
        meta = type(meta)(**{**meta.__dict__, "display_name": name})
    ind = VenueIndicators(fwci_mean=fwci, fwci_coverage=1.0, if2=if2, if2_is_estimated=kind is VenueKind.CONFERENCE,
                          h5=h5, cite_cagr=0.0, self_citation_rate=0.0, n_valid_papers=n)
    return RankingRow(meta, ind, RankedVenue(vid, score, rank, quartile))


def test_empty_ranking_is_header_only(tmp_path):
    path = emit_ranking([], tmp_path / "r.csv", "csv")
    assert path.read_text() == ",".join(RANKING_COLUMNS) + "\n"


def test_csv_rows_in_rank_order():
    rows = rank_all([measurement(f"j{i}", fwci=float(i), if2=float(i)) for i in range(5)], 0.75)[Field.CS]
    parsed = list(csv.DictReader(io.StringIO(ranking_csv(rows))))
    assert [r["rank"] for r in parsed] == ["1", "2", "3", "4", "5"]
    assert [r["venue_id"] for r in parsed] == ["j4", "j3", "j2", "j1", "j0"]
    assert parsed[0]["if2_is_estimated"] == "false"


def test_markdown_table_row():
    rows = [row("neurips", 1, 54.88, kind=VenueKind.CONFERENCE, name="NeurIPS", fwci=34.77, if2=165.58, h5=193),
            row("thin", None, 3.0, Quartile.INSUFFICIENT_DATA, n=19)]
    text = ranking_markdown(rows)
    assert "| 1 | NeurIPS | Conf | 54.88 | 34.77 | 193 | 165.58 | Q1 |" in text
    assert "## Insufficient data" in text and "(`thin`): 19 valid papers" in text


def test_json_carries_provenance(tmp_path):
    path = emit_ranking([row("a", 1, 2.5)], tmp_path / "r.json", "json", {"config_hash": "abc"})
    payload = json.loads(path.read_text())
    assert payload["provenance"] == {"config_hash": "abc"}
    assert payload["venues"][0]["score"] == 2.5


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        emit_ranking([], tmp_path / "r.txt", "xlsx")


def test_ratio_histogram_single_bin(tmp_path):
    bins = ratio_histogram([0.75] * 12)
    assert sum(n for _, _, n in bins) == 12
    assert [(lo, hi) for lo, hi, n in bins if n] == [(0.75, 0.80)]
    text = emit_figure_data(Figure.RATIO_HIST, [0.75] * 12, tmp_path / "h.csv").read_text()
    assert "0.75,0.80,12\n" in text and text.endswith("\n")


def test_histogram_counts_everything():
    ratios = [i / 97 for i in range(98)]
    assert sum(n for _, _, n in ratio_histogram(ratios)) == 98


def test_quartile_composition(tmp_path):
    rows = [row(f"c{i}", i + 1, 100.0 - i, kind=VenueKind.CONFERENCE) for i in range(25)]
    rows += [row(f"j{i}", i + 26, 50.0 - i) for i in range(25)]
    text = emit_figure_data(Figure.QUARTILE_COMPOSITION, {Field.CS: rows}, tmp_path / "q.csv").read_text()
    lines = text.splitlines()
    assert lines[0] == "field,quartile,conferences,journals"
    assert lines[1] == "CS,Q1,25,25"


def test_score_distribution(tmp_path):
    rows = [row("a", 1, 3.0), row("b", None, 1.0, Quartile.INSUFFICIENT_DATA)]
    text = emit_figure_data(Figure.SCORE_DIST, {Field.CS: rows}, tmp_path / "s.csv").read_text()
    assert text == "field,rank,venue_id,score\nCS,1,a,3.0000\n"


def test_sensitivity_outputs(tmp_path):
    report = SensitivityReport(0.75, (SweepPoint(0.70, 2, 10, ("x", "y")), SweepPoint(0.75, 0, 10, ())))
    curve = emit_figure_data(Figure.SENSITIVITY_CURVE, report, tmp_path / "c.csv").read_text()
    assert curve.splitlines()[-1] == "0.75,0,0.00"
    table = emit_sensitivity(report, tmp_path / "s.csv").read_text()
    assert "0.70,2,20.00,x;y" in table


def test_missing_analysis(tmp_path):
    with pytest.raises(MissingAnalysis):
        emit_figure_data(Figure.SCORE_DIST, None, tmp_path / "x.csv")
    with pytest.raises(MissingAnalysis):
        emit_figure_data(Figure.SENSITIVITY_CURVE, [1, 2], tmp_path / "x.csv")


def test_io_failure(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(IoFailure):
        emit_ranking([], blocker / "r.csv", "csv")


def test_validation_report(tmp_path):
    tab = ccf_cross_tab([("A", Quartile.Q1), ("A", Quartile.Q2)])
    text = emit_validation_report(tmp_path / "v.md", (BinaryConfusion(40, 10, 10, 40), 0.8, 0.6), tab,
                                  "note text", "h123").read_text()
    assert "agreement rate: 0.8000" in text and "Cohen's kappa: 0.6000" in text
    assert "| A | 1 (50.0%) | 1 (50.0%) |" in text
    assert text.rstrip().endswith("note text")
    text = emit_validation_report(tmp_path / "v.md", (BinaryConfusion(5, 0, 0, 0), 1.0, None), None, "n").read_text()
    assert "undefined" in text and "No CCF labels" in text
