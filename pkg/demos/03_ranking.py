"""Rank a mixed field of journals and conference proceedings on one scale.

Run: python demos/03_ranking.py
"""
from gsr.model import Field, Quartile
from gsr.pipeline import conversion_by_field, measure_venue, rank_all
from gsr.report import ranking_markdown
from gsr.scoring import quartile_counts
from gsr.synthetic import make_corpus, snapshots

corpus = make_corpus(n_journals=60, n_conferences=20, papers_per_venue=120, seed=8, thin_venues=2)
measurements = [measure_venue(meta, snap) for meta, snap in snapshots(corpus)]

conversions = conversion_by_field(measurements)
print(f"FWCI/IF2 conversion from journals: {conversions[Field.CS]:.4f}")

rows = rank_all(measurements, coefficient=0.75, conversions=conversions)[Field.CS]
print(ranking_markdown(rows[:15] + [r for r in rows if r.ranked.rank is None], "Top 15, synthetic CS"))

counts = quartile_counts([r.ranked for r in rows])
print("quartile sizes:", {q.value: n for q, n in counts.items() if n})

q1 = [r for r in rows if r.ranked.quartile is Quartile.Q1]
confs = sum(r.indicators.if2_is_estimated for r in q1)
print(f"Q1 holds {confs} conferences and {len(q1) - confs} journals")
