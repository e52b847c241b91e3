"""Exact computations with rigid ACM bundles on Veronese embeddings of P^2 and P^3."""

__version__ = "0.1.0"
