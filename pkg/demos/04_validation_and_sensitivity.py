"""Compare a ranking with reference labels, then sweep the IF2 coefficient.

Run: python demos/04_validation_and_sensitivity.py
"""
from gsr.model import Field
from gsr.pipeline import measure_venue, rank_all
from gsr.report import validation_markdown
from gsr.synthetic import make_corpus, snapshots
from gsr.validation import (
    BinaryConfusion,
    agreement_rate,
    ccf_cross_tab,
    cohens_kappa,
    default_coefficients,
    methodology_note,
    sensitivity_sweep,
)

corpus = make_corpus(n_journals=90, n_conferences=30, papers_per_venue=100, seed=21)
pairs = snapshots(corpus)
measurements = [measure_venue(meta, snap) for meta, snap in pairs]
rows = rank_all(measurements, 0.75)[Field.CS]
quartiles = {r.meta.venue_id: r.ranked.quartile for r in rows}

# reference labels: journals ordered by mean lifetime citations, top third labelled Q1
impact = {meta.venue_id: sum(p.cited_by_count for p in snap.records) / len(snap.records)
          for meta, snap in pairs if meta.openalex_source_id}
ordered = sorted(impact, key=impact.get, reverse=True)
reference = {vid: "Q1" if i < len(ordered) // 3 else "Q2" for i, vid in enumerate(ordered)}

conf = BinaryConfusion.from_labels(quartiles, reference)
kappa = cohens_kappa(conf)
cross = ccf_cross_tab((r.meta.ccf_tier, r.ranked.quartile) for r in rows)
print(validation_markdown((conf, agreement_rate(conf), kappa), cross, methodology_note()))

report = sensitivity_sweep(measurements, default_coefficients(), baseline=0.75)
print("coefficient  changed  venues")
for p in report.sweep:
    print(f"   {p.coefficient:.2f}      {p.n_changed:3d}    {', '.join(p.changed_venue_ids[:6])}")
