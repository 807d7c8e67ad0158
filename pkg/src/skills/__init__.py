"""Skill layer: the estimation algorithms.

- `skills.*` holds model fitting, initialization, selection and simulation.
- Command-line wrappers live in `tools.*`.
"""
__all__ = ["aecm", "initialization", "selection", "simulate"]
