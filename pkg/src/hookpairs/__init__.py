"""Witness-producing algorithms for homogeneous pairs in graphs that forbid
hooks, line graphs, claw-free Berge graphs, and the random constructions
that have no linear homogeneous pair."""

__version__ = "0.1.0"
