"""Compliance-aware batched inference for tabular attention models."""

__version__ = "0.1.0"
