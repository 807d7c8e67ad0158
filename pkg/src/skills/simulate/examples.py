"""
Built-in simulation settings with two (Example 1) and three (Example 2) groups.

Tables hold the printed values; printed standard deviations are squared into
noise variances and the printed covariance matrices, which carry rounding
asymmetries, are symmetrized as (Σ + Σ')/2 before use.
"""
from __future__ import annotations

from typing import Callable, Dict

import numpy as np

from skills.simulate.sampler import GroupGenerator, SimSpec

EXAMPLE1 = {
    "sizes": (75, 100),
    "means": (
        (14.0, 18.0, 25.0, 14.0, 22.0),
        (-12.0, -10.0, -22.0, -20.0, -22.0),
    ),
    "intercepts": (4.50, -4.20),
    "slopes": (
        (0.47, 0.02, 0.42, 0.03, 0.87),
        (-0.02, -0.63, -0.05, -0.85, -0.03),
    ),
    "sigmas": (2.0, 4.0),
    "covariances": (
        (
            (103.36, 103.07, 101.37, 79.41, 105.66),
            (103.08, 119.39, 110.23, 85.97, 115.47),
            (101.37, 110.23, 129.77, 106.08, 118.50),
            (79.41, 85.97, 106.08, 101.46, 95.21),
            (105.66, 115.47, 118.50, 95.21, 121.63),
        ),
        (
            (34.25, 15.16, 17.81, 22.39, 14.62),
            (15.16, 17.01, 11.42, 13.98, 8.95),
            (17.81, 11.42, 17.62, 16.12, 10.45),
            (22.39, 13.98, 16.12, 28.11, 13.11),
            (14.62, 8.95, 10.45, 13.11, 10.19),
        ),
    ),
}

EXAMPLE2 = {
    "sizes": (75, 100, 60),
    "means": (
        (0.0, 0.0, -5.0, 0.0, -4.0),
        (14.0, 18.0, 25.0, 14.0, 22.0),
        (-12.0, -10.0, -22.0, -20.0, -22.0),
    ),
    "intercepts": (30.0, 4.5, -4.2),
    "slopes": (
        (-0.41, -0.87, -0.22, -0.62, -0.06),
        (0.47, 0.02, 0.42, 0.03, 0.87),
        (-0.02, -0.63, -0.05, -0.85, -0.03),
    ),
    "sigmas": (2.0, 2.0, 2.0),
    "covariances": (
        (
            (10.41, 3.61, 4.07, 4.48, 5.71),
            (3.61, 7.83, 2.88, 3.18, 4.03),
            (4.07, 2.88, 8.67, 3.81, 4.64),
            (4.48, 3.18, 3.81, 9.61, 5.17),
            (5.71, 4.04, 4.64, 5.17, 11.73),
        ),
        (
            (103.36, 103.07, 101.37, 79.41, 105.66),
            (103.08, 122.10, 110.23, 85.97, 115.47),
            (101.37, 110.23, 134.33, 106.08, 118.50),
            (79.41, 85.97, 106.08, 102.73, 95.21),
            (105.66, 115.47, 118.50, 95.21, 129.21),
        ),
        (
            (25.19, 15.16, 17.81, 22.39, 14.62),
            (15.16, 10.67, 11.42, 13.98, 8.95),
            (17.81, 11.42, 13.12, 16.12, 10.45),
            (22.39, 13.98, 16.12, 20.31, 13.11),
            (14.62, 8.95, 10.45, 13.11, 8.70),
        ),
    ),
}


def symmetrized(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=float)
    return (m + m.T) / 2.0


def _sigma_form_spec(table: Dict, seed: int, name: str) -> SimSpec:
    groups = tuple(
        GroupGenerator(
            mean=table["means"][g],
            intercept=table["intercepts"][g],
            slope=table["slopes"][g],
            noise_var=table["sigmas"][g] ** 2,
            covariance=symmetrized(table["covariances"][g]),
        )
        for g in range(len(table["sizes"]))
    )
    return SimSpec(groups=groups, group_sizes=table["sizes"], seed=seed, name=name)


def example1_spec(seed: int = 0) -> SimSpec:
    """G=2, p=5, n=175 (75 + 100)."""
    return _sigma_form_spec(EXAMPLE1, seed, "example1")


def example2_spec(seed: int = 0) -> SimSpec:
    """G=3, p=5, n=235 (75 + 100 + 60)."""
    return _sigma_form_spec(EXAMPLE2, seed, "example2")


def builtin_specs() -> Dict[str, Callable[[int], SimSpec]]:
    from skills.simulate.surrogate import voles_surrogate_spec

    return {
        "example1": example1_spec,
        "example2": example2_spec,
        "voles-surrogate": voles_surrogate_spec,
    }


__all__ = ["EXAMPLE1", "EXAMPLE2", "symmetrized", "example1_spec", "example2_spec", "builtin_specs"]
