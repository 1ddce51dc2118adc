"""Exact k-free recurrence engine for q-hypergeometric multi-sums."""

__version__ = "0.1.0"
