"""Calibration of the coefficient used to estimate IF2 for proceedings.

Journal papers carry per-year citation series, so the share of their lifetime
citations that falls in a recent window can be measured directly. The median
of that share is the coefficient applied to conference papers, whose sources
only report a lifetime citation total.
"""
from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Collection, Iterable, Optional, Sequence

import numpy as np

from gsr.model import QUANTILE_KEYS, CalibrationResult, PaperRecord

DEFAULT_COEFFICIENT = 0.75
_QUANTILE_LEVELS = dict(zip(QUANTILE_KEYS, (0.10, 0.25, 0.50, 0.75, 0.90)))


class EmptyCorpus(ValueError):
    pass


@dataclass(frozen=True)
class RatioSample:
    paper_id: str
    ratio: float


def calibration_window(mode: str, retrieval_year: int) -> frozenset[int]:
    if mode == "two_year":
        return frozenset({retrieval_year - 1, retrieval_year})
    if mode == "retrieval_year":
        return frozenset({retrieval_year})
    raise ValueError(f"unknown calibration window mode {mode!r}")


def ratio_samples(
    journal_papers: Iterable[PaperRecord],
    window: Collection[int],
    retrieval_year: int,
    restrict_to_if2_window: bool = True,
) -> list[RatioSample]:
    """Windowed-citation share for every usable journal paper.

    Usable means cited at least once with a non-empty ``counts_by_year``.
    Ratios are capped at 1 because per-year series and lifetime totals are
    not always consistent in the source data.
    """
    window = frozenset(window)
    if2_years = {retrieval_year - 1, retrieval_year - 2}
    out = []
    for p in journal_papers:
        if p.cited_by_count <= 0 or not p.counts_by_year:
            continue
        if restrict_to_if2_window and p.publication_year not in if2_years:
            continue
        in_window = sum(n for y, n in p.counts_by_year if y in window)
        out.append(RatioSample(p.paper_id, min(in_window / p.cited_by_count, 1.0)))
    return out


def _quantile(ordered: np.ndarray, q: float) -> float:
    # linear interpolation between order statistics; even-count median is the midpoint
    h = (len(ordered) - 1) * q
    lo = math.floor(h)
    frac = h - lo
    if frac == 0:
        return float(ordered[lo])
    a, b = float(ordered[lo]), float(ordered[lo + 1])
    if frac == 0.5:
        return (a + b) / 2
    # clamp guards monotonicity against rounding at segment ends
    return min(max(a + (b - a) * frac, a), b)


def calibration_from_ratios(ratios: Sequence[float]) -> CalibrationResult:
    if len(ratios) == 0:
        raise EmptyCorpus("no journal papers with citations and a per-year series")
    ordered = np.sort(np.asarray(ratios, dtype=float))
    quantiles = {k: _quantile(ordered, q) for k, q in _QUANTILE_LEVELS.items()}
    return CalibrationResult(coefficient=quantiles["p50"], n_papers=len(ordered), quantiles=quantiles)


def compute_calibration(
    journal_papers: Iterable[PaperRecord],
    retrieval_year: int,
    window: Optional[Collection[int]] = None,
    restrict_to_if2_window: bool = True,
) -> CalibrationResult:
    """Median windowed-citation share over journal papers, with its spread.

    ``window`` defaults to the two-year window {Y-1, Y}.
    """
    if window is None:
        window = calibration_window("two_year", retrieval_year)
    samples = ratio_samples(journal_papers, window, retrieval_year, restrict_to_if2_window)
    return calibration_from_ratios([s.ratio for s in samples])


def if2_approx(conference_papers: Sequence[PaperRecord], coefficient: float) -> float:
    """Estimated IF2: mean lifetime citations scaled by ``coefficient``."""
    if not conference_papers:
        return 0.0
    # scaling the mean (not each term) keeps the result exactly linear in the coefficient
    return coefficient * (math.fsum(p.cited_by_count for p in conference_papers) / len(conference_papers))


def fwci_conversion_coefficient(journal_indicators: Iterable[tuple[float, float]]) -> float:
    """Median FWCI/IF2 ratio over journals with both indicators positive."""
    ratios = [f / i for f, i in journal_indicators if f > 0 and i > 0]
    if not ratios:
        raise EmptyCorpus("no journals with positive FWCI and IF2")
    return statistics.median(ratios)


def fwci_approx(if2_approx_value: float, conversion: float) -> float:
    if if2_approx_value < 0 or conversion < 0:
        raise ValueError("fwci_approx arguments must be non-negative")
    return if2_approx_value * conversion


def save_calibration(result: CalibrationResult, path, **provenance) -> Path:
    path = Path(path)
    payload = result.to_dict()
    if provenance:
        payload["provenance"] = provenance
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_calibration(path) -> CalibrationResult:
    return CalibrationResult.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
