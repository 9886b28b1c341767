"""Bratteli diagrams, Vershik dynamics, path-space quotients by double
embeddings, contraction-fibred extensions, and their K-theory bookkeeping."""

__version__ = "0.1.0"
