"""Exact kernel for simplicial commutative algebra: resolutions, cotangent complexes,
André-Quillen (co)homology, Dold-Kan, Witt lifts and derived Hecke algebras."""

__version__ = "0.1.0"
