"""Cycle-2 expectations: weighted scatter matrices and latent-factor moments."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from core.density import woodbury_inverse_logdet
from core.errors import DegenerateComponentError, InvalidInputError
from core.model import Dataset, Responsibilities


@dataclass(frozen=True)
class LatentMoments:
    """γ_g (q×p), Θ_g (q×q), S_g (p×p) and n_g per component."""
    gamma: Tuple[np.ndarray, ...]
    theta: Tuple[np.ndarray, ...]
    scatter: Tuple[np.ndarray, ...]
    counts: np.ndarray

    @property
    def G(self) -> int:
        return len(self.scatter)

    @property
    def proportions(self) -> np.ndarray:
        return self.counts / self.counts.sum()


def compute_scatter(
    data: Dataset, resp: Responsibilities, means: Sequence[np.ndarray]
) -> Tuple[List[np.ndarray], np.ndarray]:
    """S_g = (1/n_g) Σ_i z_ig (x_i − μ_g)(x_i − μ_g)'."""
    if resp.n != data.n or len(means) != resp.G:
        raise InvalidInputError("responsibilities, means and data disagree in size")
    counts = resp.counts
    scatter = []
    for g in range(resp.G):
        if counts[g] <= 0.0:
            raise DegenerateComponentError(f"component {g + 1} is empty", component=g + 1)
        d = data.x - np.asarray(means[g], dtype=float)
        s = (d * resp.z[:, g, None]).T @ d / counts[g]
        scatter.append((s + s.T) / 2.0)
    return scatter, counts


def compute_gamma_theta(
    loadings: np.ndarray, uniquenesses: np.ndarray, S: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """γ = Λ'(ΛΛ' + Ψ)⁻¹ and Θ = I_q − γΛ + γSγ'."""
    inv, _ = woodbury_inverse_logdet(loadings, uniquenesses)
    L = np.asarray(loadings, dtype=float)
    gamma = L.T @ inv
    theta = np.eye(L.shape[1]) - gamma @ L + gamma @ S @ gamma.T
    return gamma, (theta + theta.T) / 2.0


def latent_moments(
    scatter: Sequence[np.ndarray],
    counts: np.ndarray,
    loadings: Sequence[np.ndarray],
    uniquenesses: Sequence[np.ndarray],
) -> LatentMoments:
    pairs = [compute_gamma_theta(L, psi, S) for L, psi, S in zip(loadings, uniquenesses, scatter)]
    return LatentMoments(
        gamma=tuple(g for g, _ in pairs),
        theta=tuple(t for _, t in pairs),
        scatter=tuple(scatter),
        counts=np.asarray(counts, dtype=float),
    )


def covariate_objective(
    scatter: Sequence[np.ndarray],
    counts: np.ndarray,
    loadings: Sequence[np.ndarray],
    uniquenesses: Sequence[np.ndarray],
) -> float:
    """Σ_g −½ n_g (log|Σ_g| + tr(Σ_g⁻¹ S_g)), the part of the expected log-likelihood that cycle 2 moves."""
    total = 0.0
    for S, n_g, L, psi in zip(scatter, counts, loadings, uniquenesses):
        inv, logdet = woodbury_inverse_logdet(L, psi)
        total -= 0.5 * float(n_g) * (logdet + float(np.sum(inv * S)))
    return total


__all__ = ["LatentMoments", "compute_scatter", "compute_gamma_theta", "covariate_objective", "latent_moments"]
