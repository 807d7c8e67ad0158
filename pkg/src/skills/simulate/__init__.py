"""Sampling from the generative model and built-in simulation settings."""
__all__ = ["examples", "sampler", "surrogate"]
