"""
Synthetic two-species stand-in for the vole skull data.

Six skull-like measurements (L2, L9, L7, B3, B4, H1, in mm/10 units) driven by
a single size factor per species, age in days as the response. Species sizes
match the real sample (45 and 41). The second species sits shifted on L7, B3
and B4, so the species separate well on covariates alone.
"""
from __future__ import annotations

from skills.simulate.sampler import GroupGenerator, SimSpec

VOLES_COLUMNS = ("L2", "L9", "L7", "B3", "B4", "H1")
VOLES_SIZES = (45, 41)

_SPECIES = (
    {
        "mean": (24.0, 4.0, 3.2, 3.5, 4.1, 10.2),
        "loadings": ((1.20,), (0.20,), (0.15,), (0.18,), (0.20,), (0.50,)),
        "uniquenesses": (0.30, 0.02, 0.02, 0.02, 0.02, 0.08),
        "intercept": -200.0,
        "slope": (12.0, 20.0, 0.0, 0.0, 0.0, 5.0),
        "noise_var": 900.0,
    },
    {
        "mean": (25.5, 3.6, 4.0, 3.0, 4.6, 10.8),
        "loadings": ((1.10,), (0.18,), (0.16,), (0.15,), (0.22,), (0.45,)),
        "uniquenesses": (0.25, 0.02, 0.02, 0.02, 0.02, 0.07),
        "intercept": -150.0,
        "slope": (9.0, 15.0, 0.0, 0.0, 0.0, 4.0),
        "noise_var": 625.0,
    },
)


def voles_surrogate_spec(seed: int = 0) -> SimSpec:
    groups = tuple(GroupGenerator(**species) for species in _SPECIES)
    return SimSpec(groups=groups, group_sizes=VOLES_SIZES, seed=seed, name="voles-surrogate")


__all__ = ["VOLES_COLUMNS", "VOLES_SIZES", "voles_surrogate_spec"]
