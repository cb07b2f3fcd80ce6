"""General Science Ranking engine: open-data venue indicators, scores and quartiles."""

__version__ = "0.1.0"
