"""Exact modular-data toolkit.

Constructs the S/T data of the SU(2) level families, decomposes spin data
through the fermion grading, closes the finite matrix groups generated by the
hat matrices, and decides congruence levels of the theta-subgroup
representation kernel.
"""

__version__ = "0.1.0"
