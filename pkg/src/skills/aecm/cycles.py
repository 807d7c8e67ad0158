"""
Conditional-maximization steps of the two AECM cycles.

Cycle 1 updates (π, μ, β0, β1, σ²) from the responsibilities. Cycle 2 iterates
the loading/uniqueness updates for the covariance constraints, one update rule
per combination of the last three code letters.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg

from core.errors import DegenerateComponentError, DegenerateCovarianceError, SingularRegressionError
from core.model import ConstraintCode, Dataset, Responsibilities
from skills.aecm.config import FitConfig
from skills.aecm.moments import LatentMoments, compute_gamma_theta, covariate_objective
from utils.smart_logger import get_logger

logger = get_logger("fit")

MIN_COMPONENT_SIZE = 2.0
THETA_EIG_FLOOR = 1e-12
THETA_RIDGE = 1e-10


@dataclass(frozen=True)
class Cycle1Estimates:
    weights: np.ndarray
    means: np.ndarray
    intercepts: np.ndarray
    slopes: np.ndarray
    noise_vars: np.ndarray
    counts: np.ndarray


def cycle1_update(
    data: Dataset, resp: Responsibilities, code: ConstraintCode, min_sigma2: float = 1e-8
) -> Cycle1Estimates:
    """Weighted means, weighted least squares per component, pooled σ² for C-codes."""
    z = resp.z
    counts = resp.counts
    G = resp.G
    for g in range(G):
        if counts[g] < MIN_COMPONENT_SIZE:
            raise DegenerateComponentError(
                f"component {g + 1} has expected size {counts[g]:.3g} < {MIN_COMPONENT_SIZE:g}",
                component=g + 1,
            )
    weights = counts / counts.sum()
    means = np.empty((G, data.p))
    intercepts = np.empty(G)
    slopes = np.empty((G, data.p))
    raw_sigma2 = np.empty(G)
    for g in range(G):
        w = z[:, g]
        n_g = counts[g]
        mu = w @ data.x / n_g
        y_bar = float(w @ data.y / n_g)
        d = data.x - mu
        sxx = (d * w[:, None]).T @ d / n_g
        sxy = (d * w[:, None]).T @ (data.y - y_bar) / n_g
        try:
            slope = linalg.solve((sxx + sxx.T) / 2.0, sxy, assume_a="pos")
        except (linalg.LinAlgError, ValueError) as e:
            raise SingularRegressionError(
                f"weighted second-moment matrix of component {g + 1} is singular: {e}",
                context={"component": g + 1},
            ) from None
        if not np.all(np.isfinite(slope)):
            raise SingularRegressionError(f"regression of component {g + 1} is not finite")
        intercept = y_bar - float(slope @ mu)
        resid = data.y - intercept - data.x @ slope
        means[g] = mu
        slopes[g] = slope
        intercepts[g] = intercept
        raw_sigma2[g] = float(w @ (resid * resid) / n_g)
    if code.sigma_equal:
        pooled = float(np.sum(counts * raw_sigma2) / data.n)
        noise_vars = np.full(G, max(pooled, min_sigma2))
    else:
        noise_vars = np.maximum(raw_sigma2, min_sigma2)
    return Cycle1Estimates(
        weights=weights, means=means, intercepts=intercepts, slopes=slopes, noise_vars=noise_vars, counts=counts
    )


@dataclass(frozen=True)
class Cycle2Result:
    loadings: Tuple[np.ndarray, ...]
    uniquenesses: Tuple[np.ndarray, ...]
    sweeps: int
    converged: bool
    objective: float = float("nan")
    rejected: bool = False


def _regularized(theta: np.ndarray) -> np.ndarray:
    if np.linalg.eigvalsh(theta)[0] < THETA_EIG_FLOOR:
        return theta + THETA_RIDGE * np.eye(theta.shape[0])
    return theta


def _right_solve(a: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """a Θ⁻¹ for symmetric Θ."""
    return linalg.solve(theta, a.T, assume_a="sym").T


def _psi_from_residuals(resid: np.ndarray, isotropic: bool, floor: float) -> np.ndarray:
    if isotropic:
        return np.full(resid.shape[0], max(float(np.mean(resid)), floor))
    return np.maximum(resid, floor)


def _free_loadings_step(code, S, props, gamma, theta, loadings, psi, floor):
    """UUU, UUC, UCU, UCC: Λ_g = S_g γ_g' Θ_g⁻¹, then Ψ per group or pooled."""
    G = len(S)
    new_l = [_right_solve(S[g] @ gamma[g].T, _regularized(theta[g])) for g in range(G)]
    resid = [np.diag(S[g] - new_l[g] @ gamma[g] @ S[g]) for g in range(G)]
    if code.psi_equal:
        shared = _psi_from_residuals(sum(props[g] * resid[g] for g in range(G)), code.psi_isotropic, floor)
        return new_l, [shared] * G
    return new_l, [_psi_from_residuals(resid[g], code.psi_isotropic, floor) for g in range(G)]


def _shared_loadings_step(code, S, counts, gamma, theta, loadings, psi, floor):
    """CUU, CUC: row-wise weighted solve for the common Λ, then Ψ_g given Λ."""
    G = len(S)
    weights = np.array([counts[g] / psi[g] for g in range(G)])  # G x p
    thetas = np.array([_regularized(theta[g]) for g in range(G)])
    rhs = np.array([S[g] @ gamma[g].T for g in range(G)])  # G x p x q
    lhs = np.einsum("gi,gjk->ijk", weights, thetas)
    rows = np.einsum("gi,gij->ij", weights, rhs)
    shared = np.linalg.solve(lhs, rows[:, :, None])[:, :, 0]
    new_psi = []
    for g in range(G):
        resid = np.diag(S[g] - 2.0 * shared @ gamma[g] @ S[g] + shared @ theta[g] @ shared.T)
        new_psi.append(_psi_from_residuals(resid, code.psi_isotropic, floor))
    return [shared] * G, new_psi


def _pooled_step(code, S, props, gamma, theta, loadings, psi, floor):
    """CCU, CCC: pooled scatter and pooled Θ with the common γ."""
    G = len(S)
    pooled_s = sum(props[g] * S[g] for g in range(G))
    gam = gamma[0]
    lam = loadings[0]
    pooled_theta = np.eye(lam.shape[1]) - gam @ lam + gam @ pooled_s @ gam.T
    pooled_theta = _regularized((pooled_theta + pooled_theta.T) / 2.0)
    shared = _right_solve(pooled_s @ gam.T, pooled_theta)
    resid = np.diag(pooled_s - shared @ gam @ pooled_s)
    shared_psi = _psi_from_residuals(resid, code.psi_isotropic, floor)
    return [shared] * G, [shared_psi] * G


def _variant_step(code: ConstraintCode, moments: LatentMoments, loadings, psi, floor):
    S = moments.scatter
    if not code.lambda_equal:
        return _free_loadings_step(code, S, moments.proportions, moments.gamma, moments.theta, loadings, psi, floor)
    if not code.psi_equal:
        return _shared_loadings_step(code, S, moments.counts, moments.gamma, moments.theta, loadings, psi, floor)
    return _pooled_step(code, S, moments.proportions, moments.gamma, moments.theta, loadings, psi, floor)


def _refresh(current: LatentMoments, loadings, psi) -> LatentMoments:
    pairs = [compute_gamma_theta(loadings[g], psi[g], current.scatter[g]) for g in range(current.G)]
    return LatentMoments(
        gamma=tuple(p[0] for p in pairs),
        theta=tuple(p[1] for p in pairs),
        scatter=current.scatter,
        counts=current.counts,
    )


def cycle2_update(
    code: ConstraintCode,
    moments: LatentMoments,
    loadings: Sequence[np.ndarray],
    uniquenesses: Sequence[np.ndarray],
    config: FitConfig,
) -> Cycle2Result:
    """
    Inner loop: (Λ⁺, Ψ⁺) from the current (γ, Θ), then refresh (γ, Θ), until the
    max-abs change of (Λ, Ψ) drops below `inner_tol` or `max_inner_iters` sweeps.

    A sweep is kept only if it does not lower `covariate_objective` (evaluated
    on the floored Ψ); otherwise the loop stops at the last kept iterate, so the
    returned (Λ, Ψ) never score below the ones passed in.
    Shared quantities are returned as the same array for every component.
    """
    cur_l = [np.asarray(L, dtype=float) for L in loadings]
    cur_psi = [np.asarray(p, dtype=float) for p in uniquenesses]
    current = moments
    best = covariate_objective(current.scatter, current.counts, cur_l, cur_psi)
    converged = False
    rejected = False
    sweeps = 0
    for sweeps in range(1, config.max_inner_iters + 1):
        try:
            new_l, new_psi = _variant_step(code, current, cur_l, cur_psi, config.min_psi)
        except (linalg.LinAlgError, ValueError) as e:
            raise DegenerateCovarianceError(
                f"loading update for {code} failed: {e}", context={"code": str(code), "sweep": sweeps}
            ) from None
        score = covariate_objective(current.scatter, current.counts, new_l, new_psi)
        if not score >= best:
            rejected = True
            converged = True
            logger.debug(f"{code} sweep {sweeps} would lower the covariate objective by {best - score:.3g}")
            break
        change = max(
            max(float(np.max(np.abs(a - b))) for a, b in zip(new_l, cur_l)),
            max(float(np.max(np.abs(a - b))) for a, b in zip(new_psi, cur_psi)),
        )
        cur_l, cur_psi, best = new_l, new_psi, score
        current = _refresh(current, cur_l, cur_psi)
        if change < config.inner_tol:
            converged = True
            break
    if not converged:
        logger.warning(f"inner Λ/Ψ loop for {code} stopped after {sweeps} sweeps without converging")
    return Cycle2Result(
        loadings=tuple(cur_l),
        uniquenesses=tuple(cur_psi),
        sweeps=sweeps,
        converged=converged,
        objective=best,
        rejected=rejected,
    )


__all__ = [
    "Cycle1Estimates",
    "Cycle2Result",
    "cycle1_update",
    "cycle2_update",
]
