"""``gsr`` command line: fetch, calibrate, score, validate, sensitivity.

Exit codes: 0 success, 1 some venues failed, 2 configuration or input error.
"""
from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

import requests

from gsr import __version__, calibration, report
from gsr.config import ConfigError, RunConfig, load_config, load_venue_list
from gsr.ingest import (
    FetchError,
    RateLimitPolicy,
    SnapshotError,
    fetch_venue_snapshot,
    read_snapshot,
    snapshot_filename,
    write_snapshot,
)
from gsr.model import Field, Quartile, VenueKind
from gsr.pipeline import conversion_by_field, measure_venue, rank_all
from gsr.validation import (
    BinaryConfusion,
    DegenerateMarginals,
    NoOverlap,
    agreement_rate,
    ccf_cross_tab,
    cohens_kappa,
    default_coefficients,
    load_reference_labels,
    methodology_note,
    sensitivity_sweep,
)

log = logging.getLogger("gsr")

EXIT_OK, EXIT_PARTIAL, EXIT_CONFIG = 0, 1, 2
CALIBRATION_FILE = "calibration.json"


class UsageError(Exception):
    """Fatal input problem; maps to exit code 2."""


class MissingCalibration(UsageError):
    pass


class MissingSnapshots(UsageError):
    pass


def _venues(cfg: RunConfig, subset: Optional[str] = None):
    venues = load_venue_list(cfg.venue_list_path, cfg.allow_non_cs_conferences)
    if subset:
        wanted = {v.strip() for v in subset.split(",") if v.strip()}
        venues = [v for v in venues if v.venue_id in wanted]
    return venues


def _load_corpus(cfg: RunConfig):
    """Venue metadata paired with snapshots, plus the retrieval year in force."""
    pairs = []
    for meta in _venues(cfg):
        path = cfg.snapshot_dir / snapshot_filename(meta.venue_id)
        if not path.exists():
            log.warning("%s: no snapshot at %s, skipping", meta.venue_id, path)
            continue
        pairs.append((meta, read_snapshot(path)))
    if not pairs:
        raise MissingSnapshots(f"no snapshots found in {cfg.snapshot_dir}")
    if cfg.retrieval_year is not None:
        return pairs, cfg.retrieval_year
    years = {snap.retrieval_year for _, snap in pairs}
    if len(years) > 1:
        raise ConfigError(f"snapshots disagree on retrieval year {sorted(years)}; set retrieval_year")
    return pairs, years.pop()


def _coefficient(cfg: RunConfig, override: Optional[float]) -> tuple[Optional[float], str]:
    if override is not None:
        if not 0 < override <= 1:
            raise ConfigError(f"--coefficient {override} outside (0, 1]")
        return override, "override"
    if cfg.calibration.coefficient is not None:
        return cfg.calibration.coefficient, "override"
    path = cfg.output_dir / CALIBRATION_FILE
    if path.exists():
        return calibration.load_calibration(path).coefficient, "calibration"
    return None, "none"


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def cmd_fetch(cfg: RunConfig, args) -> int:
    venues = _venues(cfg, args.venues)
    retrieval_date = dt.date.fromisoformat(cfg.retrieval_date) if cfg.retrieval_date else dt.date.today()
    year = cfg.retrieval_year or retrieval_date.year
    limits = RateLimitPolicy(
        requests_per_second=cfg.ingest.requests_per_second,
        max_attempts=cfg.ingest.max_attempts,
        backoff_base=cfg.ingest.backoff_base,
    )
    todo = []
    for meta in venues:
        path = cfg.snapshot_dir / snapshot_filename(meta.venue_id)
        if path.exists() and not args.force:
            log.info("%s: snapshot present, skipping", meta.venue_id)
            continue
        todo.append((meta, path))

    def work(item):
        meta, path = item
        # one session per venue: cursor chains stay sequential within a venue
        with requests.Session() as session:
            snap = fetch_venue_snapshot(
                meta, retrieval_date, (year - 5, year - 1), limits,
                openalex_base_url=cfg.ingest.openalex_base_url,
                s2_base_url=cfg.ingest.s2_base_url,
                dedupe=cfg.ingest.dedupe,
                session=session,
            )
        write_snapshot(snap, path)
        return len(snap.records)

    failures = 0
    with ThreadPoolExecutor(max_workers=max(1, cfg.ingest.workers)) as pool:
        futures = [(meta, pool.submit(work, (meta, path))) for meta, path in todo]
        for meta, fut in futures:
            try:
                n = fut.result()
            except (FetchError, SnapshotError, requests.RequestException) as exc:
                failures += 1
                log.error("%s: fetch failed: %s", meta.venue_id, exc)
            else:
                print(f"{meta.venue_id}: {n} records")
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_calibrate(cfg: RunConfig, args) -> int:
    coef, source = _coefficient(cfg, args.coefficient)
    if source == "override":
        print(f"calibration skipped: coefficient override {coef}")
        return EXIT_OK
    pairs, year = _load_corpus(cfg)
    journal_papers = [r for meta, snap in pairs if meta.kind is VenueKind.JOURNAL for r in snap.records]
    window = calibration.calibration_window(cfg.calibration.window, year)
    samples = calibration.ratio_samples(journal_papers, window, year, cfg.calibration.restrict_to_if2_window)
    result = calibration.calibration_from_ratios([s.ratio for s in samples])
    calibration.save_calibration(
        result,
        cfg.output_dir / CALIBRATION_FILE,
        config_hash=cfg.config_hash(),
        retrieval_year=year,
        window=cfg.calibration.window,
        restrict_to_if2_window=cfg.calibration.restrict_to_if2_window,
    )
    report.emit_figure_data(report.Figure.RATIO_HIST, [s.ratio for s in samples],
                            cfg.output_dir / "figure_RatioHist.csv")
    print(f"coefficient {result.coefficient:.4f} from {result.n_papers} journal papers")
    print("quantiles " + " ".join(f"{k}={v:.4f}" for k, v in result.quantiles.items()))
    return EXIT_OK


def _measure(cfg: RunConfig):
    pairs, year = _load_corpus(cfg)
    measurements = [measure_venue(meta, snap, year, cfg.exclusion_mode) for meta, snap in pairs]
    return measurements, year


def _conversions(cfg: RunConfig, measurements):
    if cfg.calibration.fwci_conversion is not None:
        return {f: cfg.calibration.fwci_conversion for f in Field}
    if any(m.is_estimated and m.fwci_coverage == 0 for m in measurements):
        return conversion_by_field(measurements)
    return {}


def cmd_score(cfg: RunConfig, args) -> int:
    measurements, year = _measure(cfg)
    coef, source = _coefficient(cfg, args.coefficient)
    if any(m.is_estimated for m in measurements) and coef is None:
        raise MissingCalibration(f"no {CALIBRATION_FILE} in {cfg.output_dir}; run `gsr calibrate` or pass --coefficient")
    conversions = _conversions(cfg, measurements)
    rankings = rank_all(measurements, coef or 0.0, cfg.scoring, conversions)
    provenance = {
        "config_hash": cfg.config_hash(),
        "engine_version": __version__,
        "retrieval_year": year,
        "calibration_coefficient": coef,
        "coefficient_source": source,
        "fwci_conversion": {f.value: round(v, 6) for f, v in sorted(conversions.items(), key=lambda kv: kv[0].value)},
    }
    suffix = {"csv": "csv", "json": "json", "markdown": "md"}
    for field, rows in rankings.items():
        for fmt in cfg.output_formats:
            report.emit_ranking(rows, cfg.output_dir / f"ranking_{field.value}.{suffix[fmt]}", fmt, provenance)
        ranked = sum(1 for r in rows if r.ranked.rank is not None)
        print(f"{field.value}: {ranked} ranked, {len(rows) - ranked} insufficient data")
    report.emit_figure_data(report.Figure.QUARTILE_COMPOSITION, rankings, cfg.output_dir / "figure_QuartileComposition.csv")
    report.emit_figure_data(report.Figure.SCORE_DIST, rankings, cfg.output_dir / "figure_ScoreDist.csv")
    _write_json(cfg.output_dir / "provenance.json", provenance)
    return EXIT_OK


def _read_ranking_quartiles(cfg: RunConfig) -> dict[str, Quartile]:
    out = {}
    files = sorted(cfg.output_dir.glob("ranking_*.csv"))
    if not files:
        raise UsageError(f"no ranking_*.csv in {cfg.output_dir}; run `gsr score` first")
    for path in files:
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                out[row["venue_id"]] = Quartile(row["quartile"])
    return out


def cmd_validate(cfg: RunConfig, args) -> int:
    quartiles = _read_ranking_quartiles(cfg)
    venues = {v.venue_id: v for v in _venues(cfg)}
    jcr_labels = {vid: v.jcr_quartile.value for vid, v in venues.items() if v.jcr_quartile}
    ccf_labels = {vid: v.ccf_tier.value for vid, v in venues.items() if v.ccf_tier}
    if args.labels:
        labels = load_reference_labels(args.labels)
        jcr_labels.update(labels["JCR"])
        ccf_labels.update(labels["CCF"])

    jcr = None
    try:
        conf = BinaryConfusion.from_labels(quartiles, jcr_labels)
    except NoOverlap:
        conf = None
    if conf is not None:
        try:
            kappa = cohens_kappa(conf)
        except DegenerateMarginals:
            kappa = None
        jcr = (conf, agreement_rate(conf), kappa)

    pairs = [(tier, quartiles[vid]) for vid, tier in ccf_labels.items() if vid in quartiles]
    cross = ccf_cross_tab(pairs) if pairs else None
    if jcr is None and cross is None:
        raise NoOverlap("no ranked venue appears in the reference labels")

    report.emit_validation_report(
        cfg.output_dir / "validation_report.md", jcr, cross, methodology_note(cfg.scoring), cfg.config_hash()
    )
    if jcr is not None:
        conf, rate, kappa = jcr
        kappa_text = "undefined" if kappa is None else f"{kappa:.4f}"
        print(f"JCR Q1 agreement {rate:.4f}, kappa {kappa_text}, n={conf.total}")
    if cross is not None:
        for tier, pct in cross.row_percentages().items():
            print(f"CCF-{tier.value}: Q1 {cross.counts[tier][Quartile.Q1]} ({pct[Quartile.Q1]:.1f}%) of {cross.row_total(tier)}")
    return EXIT_OK


def _parse_range(spec: str) -> list[float]:
    try:
        lo, hi, step = (float(x) for x in spec.split(":"))
    except ValueError as exc:
        raise ConfigError(f"--range must be lo:hi:step, got {spec!r}") from exc
    if step <= 0 or hi < lo:
        raise ConfigError(f"bad --range {spec!r}")
    return default_coefficients(lo, hi, step)


def cmd_sensitivity(cfg: RunConfig, args) -> int:
    measurements, _ = _measure(cfg)
    coef, _ = _coefficient(cfg, args.coefficient)
    baseline = coef if coef is not None else calibration.DEFAULT_COEFFICIENT
    if not any(m.is_estimated for m in measurements):
        log.warning("no venue uses the estimated IF2; every sweep point is trivially unchanged")
    coefficients = _parse_range(args.range)
    result = sensitivity_sweep(measurements, coefficients, baseline, cfg.scoring, _conversions(cfg, measurements))
    report.emit_sensitivity(result, cfg.output_dir / "sensitivity.csv")
    report.emit_figure_data(report.Figure.SENSITIVITY_CURVE, result, cfg.output_dir / "figure_SensitivityCurve.csv")
    for p in result.sweep:
        print(f"c={p.coefficient:.2f}: {p.n_changed} changed ({p.pct_changed:.1f}%)")
    return EXIT_OK


COMMANDS = {
    "fetch": cmd_fetch,
    "calibrate": cmd_calibrate,
    "score": cmd_score,
    "validate": cmd_validate,
    "sensitivity": cmd_sensitivity,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gsr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gsr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="JSON run configuration")
        p.add_argument("--coefficient", type=float, help="override the IF2 calibration coefficient")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "fetch":
            p.add_argument("--force", action="store_true", help="re-fetch venues that already have snapshots")
            p.add_argument("--venues", help="comma-separated subset of venue ids")
        if name == "validate":
            p.add_argument("--labels", type=Path, help="reference labels CSV (venue_id,system,class)")
        if name == "sensitivity":
            p.add_argument("--range", default="0.50:1.00:0.05", help="lo:hi:step (default %(default)s)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, UsageError, NoOverlap, calibration.EmptyCorpus, SnapshotError, ValueError) as exc:
        print(f"gsr {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def run() -> None:
    sys.exit(main())
