"""Exact-arithmetic laboratory for polyhedral volume.

Sparse integer polynomials, truncated Laurent valuations, simplicial chains
and integer homology, Cayley-Menger volume algebra, monic volume relations,
valuation-driven collapse schedules, numeric flex tracing, and face-poset
volume for non-simplicial polyhedra with a CLI on top.
"""

__version__ = "0.1.0"
