"""Lattice homology and knot lattice homology of negative definite plumbing forests."""

__version__ = "0.1.0"
