"""Deterministic household-task simulator, benchmark harness, and agent framework."""

__version__ = "0.1.0"
