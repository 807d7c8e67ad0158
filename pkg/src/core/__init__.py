"""Core layer: model containers, densities, parameter counts, errors and the CLI entry."""
