"""Unit tests for metrics tracking module."""
