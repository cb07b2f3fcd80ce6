"""Derive the IF2 coefficient for proceedings from journal citation series.

Journals report citations per year; proceedings only a lifetime total. The
median share of a journal paper's citations landing in {Y-1, Y} becomes the
factor that turns a conference paper's total into an IF2 estimate.

Run: python demos/02_calibration.py
"""
from gsr import calibration
from gsr.model import VenueKind
from gsr.report import ratio_histogram
from gsr.synthetic import make_corpus, snapshots

Y = 2025

corpus = make_corpus(n_journals=15, n_conferences=0, papers_per_venue=300, seed=3)
papers = [r for meta, snap in snapshots(corpus) if meta.kind is VenueKind.JOURNAL for r in snap.records]

for restrict in (True, False):
    result = calibration.compute_calibration(papers, Y, restrict_to_if2_window=restrict)
    label = "IF2-window papers only" if restrict else "all publication years"
    spread = ", ".join(f"{k} {v:.3f}" for k, v in result.quantiles.items())
    print(f"{label}: c = {result.coefficient:.3f} from {result.n_papers} papers ({spread})")

window = calibration.calibration_window("two_year", Y)
ratios = [s.ratio for s in calibration.ratio_samples(papers, window, Y, restrict_to_if2_window=False)]
print("\nratio histogram (all years):")
for lo, hi, n in ratio_histogram(ratios, n_bins=10):
    print(f"  [{lo:.1f}, {hi:.1f})  {'#' * (n // 20)} {n}")

# the estimate for a proceedings series is then just a scaled mean
conf = make_corpus(n_journals=0, n_conferences=1, papers_per_venue=200, seed=3)
_, snap = snapshots(conf)[0]
recent = [p for p in snap.records if p.publication_year in (Y - 1, Y - 2)]
for c in (0.5, 0.75, 1.0):
    print(f"c = {c:.2f}: IF2 estimate {calibration.if2_approx(recent, c):.2f}")
