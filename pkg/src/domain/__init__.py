"""Domain-wide error types and result wrappers."""
