"""
Sampling from the generative model.

Per group: x = μ + Λu + e with u ~ N(0, I_q), e ~ N(0, Ψ) (or x ~ N(μ, Σ) when
only Σ is given), then y = β0 + β1'x + ε with ε ~ N(0, σ²).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from core.density import sigma_from_factors
from core.errors import InvalidInputError
from core.model import CWFAParams, Dataset
from utils.smart_logger import get_logger

logger = get_logger("simulate")

SYMMETRY_TOL = 1e-8


def _vector(values: Any, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GroupGenerator:
    """One group's generating parameters, in Σ-form or Λ-form."""
    mean: np.ndarray
    intercept: float
    slope: np.ndarray
    noise_var: float
    covariance: Optional[np.ndarray] = None
    loadings: Optional[np.ndarray] = None
    uniquenesses: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean", _vector(self.mean, "mean"))
        object.__setattr__(self, "slope", _vector(self.slope, "slope"))
        object.__setattr__(self, "intercept", float(self.intercept))
        object.__setattr__(self, "noise_var", float(self.noise_var))
        p = self.mean.shape[0]
        if self.slope.shape[0] != p:
            raise InvalidInputError(f"slope has {self.slope.shape[0]} entries, mean has {p}")
        if not self.noise_var > 0:
            raise InvalidInputError(f"noise_var must be positive, got {self.noise_var}")
        if self.covariance is not None:
            cov = np.array(self.covariance, dtype=float)
            if cov.shape != (p, p) or not np.all(np.isfinite(cov)):
                raise InvalidInputError(f"covariance must be a finite {p}x{p} matrix")
            scale = max(1.0, float(np.max(np.abs(cov))))
            if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
                raise InvalidInputError("covariance must be symmetric")
            try:
                linalg.cholesky(cov, lower=True)
            except linalg.LinAlgError:
                raise InvalidInputError("covariance is not positive definite") from None
            cov.setflags(write=False)
            object.__setattr__(self, "covariance", cov)
        elif self.loadings is not None and self.uniquenesses is not None:
            L = np.array(self.loadings, dtype=float)
            psi = _vector(self.uniquenesses, "uniquenesses")
            if L.ndim != 2 or L.shape[0] != p or psi.shape[0] != p:
                raise InvalidInputError("loadings/uniquenesses do not match the mean dimension")
            if np.any(psi <= 0):
                raise InvalidInputError("uniquenesses must be positive")
            L.setflags(write=False)
            object.__setattr__(self, "loadings", L)
            object.__setattr__(self, "uniquenesses", psi)
        else:
            raise InvalidInputError("a group needs either a covariance or loadings and uniquenesses")

    @property
    def p(self) -> int:
        return self.mean.shape[0]

    @property
    def sigma_form(self) -> bool:
        return self.covariance is not None

    def covariance_matrix(self) -> np.ndarray:
        if self.covariance is not None:
            return self.covariance
        return sigma_from_factors(self.loadings, self.uniquenesses)

    def draw(self, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
        if self.sigma_form:
            chol = linalg.cholesky(self.covariance, lower=True)
            x = self.mean + rng.standard_normal((size, self.p)) @ chol.T
        else:
            u = rng.standard_normal((size, self.loadings.shape[1]))
            e = rng.standard_normal((size, self.p)) * np.sqrt(self.uniquenesses)
            x = self.mean + u @ self.loadings.T + e
        eps = rng.standard_normal(size) * np.sqrt(self.noise_var)
        y = self.intercept + x @ self.slope + eps
        return x, y

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "mean": self.mean.tolist(),
            "intercept": self.intercept,
            "slope": self.slope.tolist(),
            "noise_var": self.noise_var,
        }
        if self.sigma_form:
            out["covariance"] = self.covariance.tolist()
        else:
            out["loadings"] = self.loadings.tolist()
            out["uniquenesses"] = self.uniquenesses.tolist()
        return out


@dataclass(frozen=True)
class SimSpec:
    groups: Tuple[GroupGenerator, ...]
    group_sizes: Tuple[int, ...]
    seed: int = 0
    name: str = "custom"

    def __post_init__(self) -> None:
        groups = tuple(self.groups)
        sizes = tuple(int(s) for s in self.group_sizes)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "group_sizes", sizes)
        if not groups or len(groups) != len(sizes):
            raise InvalidInputError(f"{len(groups)} groups but {len(sizes)} group sizes")
        if min(sizes) < 1:
            raise InvalidInputError("every group size must be >= 1")
        if len({g.p for g in groups}) != 1:
            raise InvalidInputError("all groups must share the covariate dimension")

    @property
    def G(self) -> int:
        return len(self.groups)

    @property
    def p(self) -> int:
        return self.groups[0].p

    @property
    def n(self) -> int:
        return sum(self.group_sizes)

    def with_seed(self, seed: int) -> "SimSpec":
        return replace(self, seed=int(seed))

    def with_sizes(self, group_sizes: Sequence[int]) -> "SimSpec":
        return replace(self, group_sizes=tuple(group_sizes))

    @classmethod
    def from_params(cls, params: CWFAParams, group_sizes: Sequence[int], seed: int = 0) -> "SimSpec":
        groups = tuple(
            GroupGenerator(
                mean=c.mean, intercept=c.intercept, slope=c.slope, noise_var=c.noise_var,
                loadings=c.loadings, uniquenesses=c.uniquenesses,
            )
            for c in params.components
        )
        return cls(groups=groups, group_sizes=tuple(group_sizes), seed=seed, name=f"model-{params.code}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "cwfa-simspec",
            "format_version": 1,
            "name": self.name,
            "seed": self.seed,
            "group_sizes": list(self.group_sizes),
            "groups": [g.to_dict() for g in self.groups],
        }


def simspec_from_dict(data: Dict[str, Any]) -> SimSpec:
    if data.get("format_version", 1) != 1:
        raise InvalidInputError(f"unsupported simspec format_version: {data.get('format_version')!r}")
    try:
        groups = tuple(
            GroupGenerator(
                mean=g["mean"], intercept=g["intercept"], slope=g["slope"], noise_var=g["noise_var"],
                covariance=g.get("covariance"), loadings=g.get("loadings"), uniquenesses=g.get("uniquenesses"),
            )
            for g in data["groups"]
        )
        return SimSpec(
            groups=groups,
            group_sizes=tuple(data["group_sizes"]),
            seed=int(data.get("seed", 0)),
            name=str(data.get("name", "custom")),
        )
    except (KeyError, TypeError) as e:
        raise InvalidInputError(f"malformed simulation spec: {e}") from None


def sample_dataset(spec: SimSpec) -> Tuple[Dataset, np.ndarray]:
    """Draw group_sizes[g] rows from every group, in group order. Deterministic in spec.seed."""
    rng = np.random.default_rng(spec.seed)
    xs, ys, labels = [], [], []
    for g, (group, size) in enumerate(zip(spec.groups, spec.group_sizes), start=1):
        x, y = group.draw(rng, size)
        xs.append(x)
        ys.append(y)
        labels.append(np.full(size, g, dtype=np.int64))
    logger.info(f"sampled {spec.n} rows from spec {spec.name!r} (seed={spec.seed})")
    return Dataset(x=np.vstack(xs), y=np.concatenate(ys)), np.concatenate(labels)


__all__ = ["GroupGenerator", "SimSpec", "simspec_from_dict", "sample_dataset"]
