"""Compute the four venue indicators for one synthetic journal, by hand and by the engine.

Run: python demos/01_indicators.py
"""
import datetime as dt

import numpy as np

from gsr import indicators
from gsr.ingest import FilterPurpose, Snapshot, apply_quality_filter, fwci_eligible, normalize, Source
from gsr.synthetic import openalex_works

Y = 2025

rng = np.random.default_rng(42)
raw = openalex_works("SDEMO", 300, rng, retrieval_year=Y, impact=6.0)
records = tuple(normalize(w, Source.OPENALEX, "demo-journal") for w in raw)
snap = Snapshot("demo-journal", dt.date(Y, 3, 1), records)
print(f"{len(snap.records)} records, retrieval year {snap.retrieval_year}")

# each indicator looks at its own publication window after quality filtering
fwci_set = fwci_eligible(records, Y)
if2_set = apply_quality_filter(records, FilterPurpose.IF2, Y)
h5_set = apply_quality_filter(records, FilterPurpose.H5, Y)
print(f"papers kept: FWCI {len(fwci_set)}, IF2 {len(if2_set)}, h5 {len(h5_set)}")

mean, coverage = indicators.fwci_mean(fwci_set)
print(f"FWCI mean {mean:.3f} over {coverage:.0%} of eligible papers")

# IF2 by hand: year-Y citations to papers from Y-1 and Y-2, per paper
by_hand = sum(p.citations_in(Y) for p in if2_set) / len(if2_set)
print(f"IF2 {indicators.if2(if2_set, Y):.3f} (recount {by_hand:.3f})")

cites = sorted((p.cited_by_count for p in h5_set), reverse=True)
print(f"h5 {indicators.h5(h5_set)}; top citation counts {cites[:8]}")

totals = indicators.yearly_citation_totals(records)
print(f"citations by year {dict(sorted(totals.items()))}")
print(f"CAGR over Y-3..Y-1: {indicators.cite_cagr(totals, Y):+.3f}")

ids = {p.paper_id for p in if2_set}
rate, ok = indicators.self_citation_rate(if2_set, ids)
print(f"self-citation rate {rate:.3f}" + ("" if ok else " (no reference lists)"))
