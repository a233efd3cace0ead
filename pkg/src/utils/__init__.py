"""Utilities (logging, config discovery, environment)."""
