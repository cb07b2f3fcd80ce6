"""Independent reference computations used to check the engine."""
import json
import math

from gsr.model import Quartile


def brute_force_h(citations):
    """Check every candidate h directly."""
    best = 0
    for h in range(len(citations) + 1):
        if sum(1 for c in citations if c >= h) >= h:
            best = h
    return best


def recount_if2(snapshot_path, retrieval_year):
    """IF2 as (numerator, denominator) read straight from the JSON lines.

    Assumes every record in the file is a clean article, so no quality
    filter applies.
    """
    numerator = denominator = 0
    with open(snapshot_path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            rec = json.loads(line)
            if rec["publication_year"] in (retrieval_year - 1, retrieval_year - 2):
                denominator += 1
                numerator += sum(n for y, n in rec["counts_by_year"] if y == retrieval_year)
    return numerator, denominator


def oracle_quartiles(measurements, c, conversion):
    """Re-rank from scratch: score formula written out, sort, fixed cut points."""
    scores = {}
    for m in measurements:
        if m.is_estimated:
            if2 = c * m.mean_citations_if2
            fwci = if2 * conversion
        else:
            if2, fwci = m.if2_measured, m.fwci_mean
        s = 0.35 * fwci + 0.35 * if2 + 0.15 * math.log(1 + m.h5) + 0.15 * math.log(1 + max(m.cite_cagr, 0))
        scores[m.meta.venue_id] = (s, fwci)
    order = sorted(scores, key=lambda v: (-scores[v][0], -scores[v][1], v))
    cuts = [(50, Quartile.Q1), (100, Quartile.Q2), (200, Quartile.Q3)]
    return {v: next((q for hi, q in cuts if r <= hi), Quartile.Q4) for r, v in enumerate(order, 1)}
