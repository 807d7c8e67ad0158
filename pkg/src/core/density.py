"""
Densities of the cluster-weighted factor model.

Σ_g = Λ_g Λ_g' + Ψ_g is never inverted densely: the inverse comes from the
Woodbury identity and log|Σ_g| from the matrix-determinant lemma, both through
one q×q Cholesky factorization.
"""
from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy import linalg
from scipy.special import logsumexp

from core.errors import DegenerateCovarianceError, InvalidInputError, InvalidParameterError
from core.model import ComponentParams, CWFAParams, Dataset, Responsibilities

LOG_2PI = float(np.log(2.0 * np.pi))


def sigma_from_factors(loadings: np.ndarray, uniquenesses: np.ndarray) -> np.ndarray:
    L = np.atleast_2d(np.asarray(loadings, dtype=float))
    psi = np.asarray(uniquenesses, dtype=float).reshape(-1)
    if np.any(psi <= 0.0):
        raise InvalidParameterError("uniquenesses must be positive", context={"min": float(psi.min())})
    if L.shape[0] != psi.shape[0]:
        raise InvalidParameterError(f"loadings have {L.shape[0]} rows, uniquenesses {psi.shape[0]}")
    sigma = L @ L.T + np.diag(psi)
    return (sigma + sigma.T) / 2.0


def woodbury_inverse_logdet(loadings: np.ndarray, uniquenesses: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Return (Σ⁻¹, log|Σ|) for Σ = ΛΛ' + diag(ψ).

    Σ⁻¹ = Ψ⁻¹ − Ψ⁻¹Λ (I_q + Λ'Ψ⁻¹Λ)⁻¹ Λ'Ψ⁻¹
    log|Σ| = Σ log ψ_i + log|I_q + Λ'Ψ⁻¹Λ|
    """
    L = np.atleast_2d(np.asarray(loadings, dtype=float))
    psi = np.asarray(uniquenesses, dtype=float).reshape(-1)
    if np.any(psi <= 0.0):
        raise InvalidParameterError("uniquenesses must be positive", context={"min": float(psi.min())})
    if L.shape[0] != psi.shape[0]:
        raise InvalidParameterError(f"loadings have {L.shape[0]} rows, uniquenesses {psi.shape[0]}")
    psi_inv = 1.0 / psi
    scaled = L * psi_inv[:, None]
    inner = np.eye(L.shape[1]) + L.T @ scaled
    try:
        factor = linalg.cho_factor(inner, lower=True, check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise DegenerateCovarianceError(
            f"inner q x q matrix is not positive definite: {e}", context={"q": L.shape[1]}
        ) from None
    correction = scaled @ linalg.cho_solve(factor, scaled.T)
    inv = np.diag(psi_inv) - correction
    inv = (inv + inv.T) / 2.0
    logdet = float(np.sum(np.log(psi)) + 2.0 * np.sum(np.log(np.diag(factor[0]))))
    return inv, logdet


def _regression_logpdf(x: np.ndarray, y: np.ndarray, comp: ComponentParams) -> np.ndarray:
    resid = y - comp.intercept - x @ comp.slope
    return -0.5 * (LOG_2PI + np.log(comp.noise_var) + resid * resid / comp.noise_var)


def _covariate_logpdf(x: np.ndarray, comp: ComponentParams) -> np.ndarray:
    inv, logdet = woodbury_inverse_logdet(comp.loadings, comp.uniquenesses)
    d = x - comp.mean
    maha = np.einsum("ij,jk,ik->i", d, inv, d)
    return -0.5 * (comp.p * LOG_2PI + logdet + maha)


def component_log_density(x: np.ndarray, y: float, comp: ComponentParams) -> float:
    """log φ(y | x; β0 + β1'x, σ²) + log φ(x; μ, ΛΛ' + Ψ) for one observation."""
    xv = np.asarray(x, dtype=float).reshape(1, -1)
    if xv.shape[1] != comp.p:
        raise InvalidInputError(f"x has {xv.shape[1]} entries, component expects {comp.p}")
    yv = np.array([float(y)])
    return float(_regression_logpdf(xv, yv, comp)[0] + _covariate_logpdf(xv, comp)[0])


def component_log_densities(data: Dataset, params: CWFAParams) -> np.ndarray:
    """n x G matrix of component log-densities (without the weights)."""
    if data.p != params.p:
        raise InvalidInputError(f"data has p={data.p}, model expects p={params.p}")
    out = np.empty((data.n, params.G))
    for g, comp in enumerate(params.components):
        out[:, g] = _regression_logpdf(data.x, data.y, comp) + _covariate_logpdf(data.x, comp)
    return out


def log_joint(data: Dataset, params: CWFAParams) -> np.ndarray:
    """n x G matrix of log π_g + component log-density."""
    with np.errstate(divide="ignore"):
        log_w = np.log(params.weights)
    return component_log_densities(data, params) + log_w[None, :]


def _labeled_rows(data: Dataset, G: int) -> Tuple[np.ndarray, np.ndarray]:
    data.check_labels(G)
    mask = data.labeled_mask
    idx = np.flatnonzero(mask)
    cols = data.labels[idx] - 1 if idx.size else np.empty(0, dtype=np.int64)
    return idx, cols


def log_likelihood(data: Dataset, params: CWFAParams, respect_labels: bool = False) -> float:
    """
    Observed-data log-likelihood Σ_i log Σ_g π_g f_g(x_i, y_i).

    With `respect_labels`, labeled rows contribute log π_l f_l(x_i, y_i) for their
    known component l, the objective maximized in classification mode.
    """
    if data.n < 1:
        raise InvalidInputError("log-likelihood of an empty dataset")
    return loglik_from_log_joint(log_joint(data, params), data, respect_labels)


def loglik_from_log_joint(lj: np.ndarray, data: Dataset, respect_labels: bool = True) -> float:
    per_row = logsumexp(lj, axis=1)
    if respect_labels and data.has_labels:
        idx, cols = _labeled_rows(data, lj.shape[1])
        per_row[idx] = lj[idx, cols]
    return float(np.sum(per_row))


def posterior_from_log_joint(lj: np.ndarray, data: Dataset) -> Responsibilities:
    z = np.exp(lj - logsumexp(lj, axis=1, keepdims=True))
    z /= z.sum(axis=1, keepdims=True)
    if data.has_labels:
        idx, cols = _labeled_rows(data, lj.shape[1])
        z[idx] = 0.0
        z[idx, cols] = 1.0
    return Responsibilities(z)


def posterior_responsibilities(data: Dataset, params: CWFAParams) -> Responsibilities:
    """z_ig ∝ π_g f_g, computed in log space; labeled rows become exact indicators."""
    return posterior_from_log_joint(log_joint(data, params), data)


def map_labels(resp: Responsibilities) -> np.ndarray:
    """1-based MAP component per row; ties go to the lowest index."""
    return np.argmax(resp.z, axis=1).astype(np.int64) + 1


__all__ = [
    "sigma_from_factors",
    "woodbury_inverse_logdet",
    "component_log_density",
    "component_log_densities",
    "log_joint",
    "log_likelihood",
    "loglik_from_log_joint",
    "posterior_from_log_joint",
    "posterior_responsibilities",
    "map_labels",
]
