"""Explicit cycle-level computations for elliptic motives."""
