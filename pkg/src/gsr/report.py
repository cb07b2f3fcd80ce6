"""Render rankings, validation results and figure data to files."""
from __future__ import annotations

import csv
import enum
import io
import json
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from gsr.model import Quartile, VenueKind
from gsr.pipeline import RankingRow
from gsr.validation import CROSS_TAB_COLUMNS, BinaryConfusion, CrossTab, SensitivityReport

RANKING_COLUMNS = (
    "rank", "venue_id", "display_name", "kind", "field", "score", "fwci_mean", "if2",
    "if2_is_estimated", "h5", "cite_cagr", "self_citation_rate", "n_valid_papers", "quartile",
)
SENSITIVITY_COLUMNS = ("coefficient", "n_changed", "pct_changed", "changed_venue_ids")


class ReportError(Exception):
    pass


class IoFailure(ReportError):
    pass


class MissingAnalysis(ReportError):
    pass


class Figure(str, enum.Enum):
    RATIO_HIST = "RatioHist"
    QUARTILE_COMPOSITION = "QuartileComposition"
    SCORE_DIST = "ScoreDist"
    SENSITIVITY_CURVE = "SensitivityCurve"


def _write_text(path: Path, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(x: float, digits: int) -> str:
    # fixed-point keeps output locale-free and stable across runs
    return f"{x:.{digits}f}"


def ranking_record(row: RankingRow) -> dict[str, str]:
    ind, r, m = row.indicators, row.ranked, row.meta
    return {
        "rank": "" if r.rank is None else str(r.rank),
        "venue_id": m.venue_id,
        "display_name": m.display_name,
        "kind": m.kind.value,
        "field": m.field.value,
        "score": _fmt(r.score, 2),
        "fwci_mean": _fmt(ind.fwci_mean, 4),
        "if2": _fmt(ind.if2, 4),
        "if2_is_estimated": "true" if ind.if2_is_estimated else "false",
        "h5": str(ind.h5),
        "cite_cagr": _fmt(ind.cite_cagr, 4),
        "self_citation_rate": _fmt(ind.self_citation_rate, 4),
        "n_valid_papers": str(ind.n_valid_papers),
        "quartile": r.quartile.value,
    }


def ranking_csv(rows: Sequence[RankingRow]) -> str:
    return _csv_text(RANKING_COLUMNS, ([rec[c] for c in RANKING_COLUMNS] for rec in map(ranking_record, rows)))


def ranking_json(rows: Sequence[RankingRow], provenance: Optional[Mapping] = None) -> str:
    venues = []
    for row in rows:
        rec = ranking_record(row)
        venues.append({
            "rank": row.ranked.rank,
            "venue_id": rec["venue_id"],
            "display_name": rec["display_name"],
            "kind": rec["kind"],
            "field": rec["field"],
            "score": round(row.ranked.score, 2),
            "fwci_mean": round(row.indicators.fwci_mean, 4),
            "if2": round(row.indicators.if2, 4),
            "if2_is_estimated": row.indicators.if2_is_estimated,
            "h5": row.indicators.h5,
            "cite_cagr": round(row.indicators.cite_cagr, 4),
            "self_citation_rate": round(row.indicators.self_citation_rate, 4),
            "n_valid_papers": row.indicators.n_valid_papers,
            "quartile": rec["quartile"],
        })
    payload = {"provenance": dict(provenance or {}), "venues": venues}
    return json.dumps(payload, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def ranking_markdown(rows: Sequence[RankingRow], title: str = "GSR ranking", provenance: Optional[Mapping] = None) -> str:
    lines = [f"# {title}", ""]
    if provenance:
        lines += [f"config_hash: `{provenance.get('config_hash', '')}`", ""]
    lines += [
        "| Rank | Venue | Type | Score | FWCI | h5 | IF2/apx | Q |",
        "|---:|---|---|---:|---:|---:|---:|---|",
    ]
    unranked = []
    for row in rows:
        if row.ranked.rank is None:
            unranked.append(row)
            continue
        kind = "Conf" if row.meta.kind is VenueKind.CONFERENCE else "Journal"
        lines.append(
            f"| {row.ranked.rank} | {row.meta.display_name} | {kind} | {row.ranked.score:.2f} | "
            f"{row.indicators.fwci_mean:.2f} | {row.indicators.h5} | {row.indicators.if2:.2f} | "
            f"{row.ranked.quartile.value} |"
        )
    if unranked:
        lines += ["", "## Insufficient data", ""]
        lines += [
            f"- {row.meta.display_name} (`{row.meta.venue_id}`): {row.indicators.n_valid_papers} valid papers"
            for row in unranked
        ]
    return "\n".join(lines) + "\n"


def emit_ranking(rows: Sequence[RankingRow], path, fmt: str, provenance: Optional[Mapping] = None) -> Path:
    if fmt == "csv":
        text = ranking_csv(rows)
    elif fmt == "json":
        text = ranking_json(rows, provenance)
    elif fmt == "markdown":
        field = rows[0].meta.field.value if rows else ""
        text = ranking_markdown(rows, f"GSR ranking {field}".strip(), provenance)
    else:
        raise ValueError(f"unknown ranking format {fmt!r}")
    return _write_text(path, text)


def ratio_histogram(ratios: Sequence[float], n_bins: int = 20) -> list[tuple[float, float, int]]:
    edges = np.arange(n_bins + 1) / n_bins
    counts, _ = np.histogram(np.asarray(ratios, dtype=float), bins=edges)
    return [(float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(n_bins)]


def quartile_composition(rankings: Mapping[object, Sequence[RankingRow]]) -> list[tuple[str, str, int, int]]:
    out = []
    for field, rows in rankings.items():
        for q in (Quartile.Q1, Quartile.Q2, Quartile.Q3, Quartile.Q4):
            in_q = [r for r in rows if r.ranked.quartile is q]
            confs = sum(1 for r in in_q if r.meta.kind is VenueKind.CONFERENCE)
            out.append((getattr(field, "value", field), q.value, confs, len(in_q) - confs))
    return out


def score_distribution(rankings: Mapping[object, Sequence[RankingRow]]) -> list[tuple[str, int, str, float]]:
    out = []
    for field, rows in rankings.items():
        for r in rows:
            if r.ranked.rank is not None:
                out.append((getattr(field, "value", field), r.ranked.rank, r.meta.venue_id, r.ranked.score))
    return out


def emit_figure_data(analysis: Figure, data, path) -> Path:
    """Write the columnar series behind one figure.

    ``data`` is analysis specific: ratio samples for RatioHist, rankings per
    field for QuartileComposition and ScoreDist, a SensitivityReport for
    SensitivityCurve.
    """
    analysis = Figure(analysis)
    if data is None:
        raise MissingAnalysis(f"no data for {analysis.value}")
    if analysis is Figure.RATIO_HIST:
        text = _csv_text(
            ("bin_left", "bin_right", "count"),
            ((_fmt(lo, 2), _fmt(hi, 2), n) for lo, hi, n in ratio_histogram(data)),
        )
    elif analysis is Figure.QUARTILE_COMPOSITION:
        text = _csv_text(("field", "quartile", "conferences", "journals"), quartile_composition(data))
    elif analysis is Figure.SCORE_DIST:
        text = _csv_text(
            ("field", "rank", "venue_id", "score"),
            ((f, rank, vid, _fmt(s, 4)) for f, rank, vid, s in score_distribution(data)),
        )
    else:
        if not isinstance(data, SensitivityReport):
            raise MissingAnalysis("SensitivityCurve needs a SensitivityReport")
        text = _csv_text(
            ("coefficient", "n_changed", "pct_changed"),
            ((_fmt(p.coefficient, 2), p.n_changed, _fmt(p.pct_changed, 2)) for p in data.sweep),
        )
    return _write_text(path, text)


def sensitivity_csv(report: SensitivityReport) -> str:
    return _csv_text(
        SENSITIVITY_COLUMNS,
        (
            (_fmt(p.coefficient, 2), p.n_changed, _fmt(p.pct_changed, 2), ";".join(p.changed_venue_ids))
            for p in report.sweep
        ),
    )


def emit_sensitivity(report: SensitivityReport, path) -> Path:
    return _write_text(path, sensitivity_csv(report))


def validation_markdown(
    jcr: Optional[tuple[BinaryConfusion, float, Optional[float]]],
    cross_tab: Optional[CrossTab],
    note: str,
    config_hash: str = "",
) -> str:
    lines = ["# Validation report", ""]
    if config_hash:
        lines += [f"config_hash: `{config_hash}`", ""]
    lines += ["## Q1 agreement with JCR", ""]
    if jcr is None:
        lines.append("No JCR labels overlap the ranking.")
    else:
        conf, rate, kappa = jcr
        lines += [
            f"- venues compared: {conf.total}",
            f"- confusion (both Q1, ranking-only Q1, reference-only Q1, neither): "
            f"{conf.a}, {conf.b}, {conf.c}, {conf.d}",
            f"- agreement rate: {rate:.4f}",
            f"- Cohen's kappa: {'undefined (degenerate marginals)' if kappa is None else f'{kappa:.4f}'}",
        ]
    lines += ["", "## CCF tier by quartile", ""]
    if cross_tab is None:
        lines.append("No CCF labels available.")
    else:
        pct = cross_tab.row_percentages()
        cols = [c.value for c in CROSS_TAB_COLUMNS]
        lines += ["| Tier | " + " | ".join(cols) + " | Total |", "|---|" + "---:|" * (len(cols) + 1)]
        for t in cross_tab.tiers:
            cells = [f"{cross_tab.counts[t][c]} ({pct[t][c]:.1f}%)" for c in CROSS_TAB_COLUMNS]
            lines.append(f"| {t.value} | " + " | ".join(cells) + f" | {cross_tab.row_total(t)} |")
    lines += ["", "## Methodology", "", note]
    return "\n".join(lines) + "\n"


def emit_validation_report(path, jcr, cross_tab, note: str, config_hash: str = "") -> Path:
    return _write_text(path, validation_markdown(jcr, cross_tab, note, config_hash))
