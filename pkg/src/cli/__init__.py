"""Command-line interface: run, sweep, thresholds, ingest, generate, summarize."""
