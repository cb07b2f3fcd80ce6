"""Drive the ``gsr`` command line end to end against a local fixture server.

Writes into a temporary directory and lists what each step produced.

Run: python demos/05_cli_pipeline.py
"""
import json
import tempfile
from pathlib import Path

from gsr.cli import main
from gsr.config import write_venue_list
from gsr.synthetic import label_venues, make_corpus
from gsr.testing import FixtureServer

corpus = make_corpus(n_journals=30, n_conferences=8, papers_per_venue=80, seed=5)
label_venues(corpus, {f"cs-j{i:03d}": "Q1" if i < 10 else "Q3" for i in range(30)})

with tempfile.TemporaryDirectory() as tmp, FixtureServer(corpus.openalex, corpus.s2) as server:
    root = Path(tmp)
    write_venue_list(corpus.venues, root / "venues.csv")
    (root / "gsr.json").write_text(json.dumps({
        "venue_list_path": "venues.csv",
        "retrieval_date": "2025-03-01",
        "ingest": {"openalex_base_url": server.url, "s2_base_url": server.url, "requests_per_second": 200},
    }, indent=2))
    for step in ("fetch", "calibrate", "score", "validate", "sensitivity"):
        print(f"\n$ gsr {step} --config gsr.json")
        code = main([step, "--config", str(root / "gsr.json")])
        print(f"(exit {code})")
    print("\noutput files:")
    for path in sorted((root / "output").iterdir()):
        print(f"  {path.name:32s} {path.stat().st_size:7d} bytes")
    print("\n" + (root / "output" / "ranking_CS.md").read_text().split("\n\n", 2)[-1][:900])
