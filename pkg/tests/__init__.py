"""
Test package for the path-query CQA toolkit.

Covers word combinatorics, instances and repairs, the per-tier solvers,
queries with constants, the hardness constructions and the command line.
"""

__version__ = "1.0.0"
