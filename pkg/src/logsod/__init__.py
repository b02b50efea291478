"""Exact combinatorics of log pairs and their root stacks.

The library computes the index data behind semi-orthogonal decompositions of
root stacks of logarithmic pairs: toric monoid geometry (extremal rays,
minimal Kummer extensions), character alphabets with their standard and
factorial orders, strata complexes with strictification, psod descriptors,
and splitting formulas for additive invariants.
"""

from logsod import errors

__all__ = ["errors"]
__version__ = "0.1.0"
