"""Exact Poisson trace and Hochschild trace counts for symplectic quotient singularities."""

__version__ = "0.1.0"
