"""Fit configuration, overridable through CWFA_* environment variables."""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Any, Dict

from core.errors import InvalidParameterError
from utils.env_helpers import env_float, env_int


@dataclass(frozen=True)
class FitConfig:
    """
    Args:
        epsilon: Aitken tolerance on the asymptotic log-likelihood gap
        max_outer_iters: cap on AECM iterations
        inner_tol: max-abs change of (Λ, Ψ) ending the inner loop
        max_inner_iters: cap on inner Λ/Ψ sweeps per outer iteration
        min_sigma2: floor on regression noise variances
        min_psi: floor on uniquenesses
        seed: seed for k-means and random starts
    """
    epsilon: float = 0.05
    max_outer_iters: int = 1000
    inner_tol: float = 1e-6
    max_inner_iters: int = 50
    min_sigma2: float = 1e-8
    min_psi: float = 1e-8
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise InvalidParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not self.inner_tol > 0:
            raise InvalidParameterError(f"inner_tol must be positive, got {self.inner_tol}")
        if not (self.min_sigma2 > 0 and self.min_psi > 0):
            raise InvalidParameterError("variance floors must be positive")
        if self.max_outer_iters < 1 or self.max_inner_iters < 1:
            raise InvalidParameterError("iteration caps must be >= 1")

    @classmethod
    def from_env(cls, **overrides: Any) -> "FitConfig":
        """Defaults <- environment <- explicit overrides (None values ignored)."""
        base = cls()
        values = {
            "epsilon": env_float("CWFA_EPSILON", base.epsilon),
            "max_outer_iters": env_int("CWFA_MAX_OUTER_ITERS", base.max_outer_iters),
            "inner_tol": env_float("CWFA_INNER_TOL", base.inner_tol),
            "max_inner_iters": env_int("CWFA_MAX_INNER_ITERS", base.max_inner_iters),
            "min_sigma2": env_float("CWFA_MIN_SIGMA2", base.min_sigma2),
            "min_psi": env_float("CWFA_MIN_PSI", base.min_psi),
            "seed": env_int("CWFA_SEED", base.seed),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_options(self, **changes: Any) -> "FitConfig":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


__all__ = ["FitConfig"]
