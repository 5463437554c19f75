"""Bayesian reconstruction of latent hyperedges from pairwise graphs."""

__version__ = "0.1.0"
