"""viva: interactive attribute analytics over tabular usage data.

A local server holds an immutable base copy of the uploaded datasets plus a
derived copy produced by replaying a persistent operation log. Analytics
queries (rollup, histogram, temporal partition, cross-tab, flow) run over
the derived data inside a global time range, and every customization and
curation action is logged so it replays in later sessions.
"""

__version__ = "0.1.0"
