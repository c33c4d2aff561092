"""Simulate algorithms that only see the neighborhood of the nodes they have queried."""

__version__ = "0.1.0"
