"""
AECM fit loop for a single (code, G, q).

Each outer iteration:
  1. E-step at θ^(k): responsibilities (labeled rows pinned to indicators).
  2. Cycle 1 CM: π, μ, β, σ².
  3. E-step at θ^(k+1/2): responsibilities, scatter S_g, then γ_g, Θ_g from the
     current Λ_g, Ψ_g.
  4. Cycle 2 CM: inner Λ/Ψ iteration.
Stopping uses the Aitken rule on the log-likelihood trace.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from core.density import log_joint, loglik_from_log_joint, map_labels, posterior_from_log_joint
from core.errors import DegenerateComponentError, InvalidInputError
from core.model import ComponentParams, ConstraintCode, CWFAParams, Dataset, Responsibilities
from core.parameters import count_free_parameters
from skills.aecm.config import FitConfig
from skills.aecm.convergence import aitken_stop
from skills.aecm.cycles import MIN_COMPONENT_SIZE, Cycle1Estimates, cycle1_update, cycle2_update
from skills.aecm.moments import compute_scatter, latent_moments
from skills.initialization.eigen import eigen_init
from skills.selection.criteria import bic
from utils.smart_logger import get_logger, log_performance

logger = get_logger("fit")


@dataclass(frozen=True)
class FitResult:
    params: CWFAParams
    responsibilities: Responsibilities
    map_labels: np.ndarray
    loglik_trace: np.ndarray
    final_loglik: float
    eta: int
    bic: float
    iterations: int
    converged: bool
    n: int
    inner_warnings: int = 0
    start: str = "partition"

    @property
    def code(self) -> ConstraintCode:
        return self.params.code

    @property
    def G(self) -> int:
        return self.params.G

    @property
    def q(self) -> int:
        return self.params.q

    def to_dict(self, include_responsibilities: bool = True) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "kind": "cwfa-fit",
            "format_version": 1,
            "code": str(self.code),
            "G": self.G,
            "q": self.q,
            "n": self.n,
            "final_loglik": self.final_loglik,
            "eta": self.eta,
            "bic": self.bic,
            "iterations": self.iterations,
            "converged": self.converged,
            "inner_warnings": self.inner_warnings,
            "start": self.start,
            "loglik_trace": self.loglik_trace.tolist(),
            "map_labels": self.map_labels.tolist(),
            "model": self.params.to_dict(),
        }
        if include_responsibilities:
            out["responsibilities"] = self.responsibilities.z.tolist()
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FitResult":
        if data.get("kind") != "cwfa-fit" or data.get("format_version") != 1:
            raise InvalidInputError("not a version-1 cwfa-fit document")
        params = CWFAParams.from_dict(data["model"])
        labels = np.asarray(data["map_labels"], dtype=np.int64)
        if "responsibilities" in data:
            resp = Responsibilities(np.asarray(data["responsibilities"], dtype=float))
        else:
            resp = Responsibilities.from_partition(labels, params.G)
        return cls(
            params=params,
            responsibilities=resp,
            map_labels=labels,
            loglik_trace=np.asarray(data["loglik_trace"], dtype=float),
            final_loglik=float(data["final_loglik"]),
            eta=int(data["eta"]),
            bic=float(data["bic"]),
            iterations=int(data["iterations"]),
            converged=bool(data["converged"]),
            n=int(data["n"]),
            inner_warnings=int(data.get("inner_warnings", 0)),
            start=str(data.get("start", "partition")),
        )


def assemble_params(
    code: ConstraintCode,
    c1: Cycle1Estimates,
    loadings: Sequence[np.ndarray],
    uniquenesses: Sequence[np.ndarray],
    q: int,
) -> CWFAParams:
    components = tuple(
        ComponentParams(
            weight=c1.weights[g],
            intercept=c1.intercepts[g],
            slope=c1.slopes[g],
            noise_var=c1.noise_vars[g],
            mean=c1.means[g],
            loadings=loadings[g],
            uniquenesses=uniquenesses[g],
        )
        for g in range(len(c1.weights))
    )
    return CWFAParams(code=code, components=components, p=c1.means.shape[1], q=q)


def initial_params(
    data: Dataset, code: ConstraintCode, G: int, q: int, partition: np.ndarray, config: FitConfig
) -> CWFAParams:
    """Cycle-1 estimates on the hard partition plus eigen-based Λ/Ψ."""
    z0 = Responsibilities.from_partition(partition, G)
    c1 = cycle1_update(data, z0, code, config.min_sigma2)
    scatter, counts = compute_scatter(data, z0, c1.means)
    pooled = sum((counts[g] / data.n) * scatter[g] for g in range(G))
    shared_l, shared_psi = eigen_init(pooled, q, config.min_psi) if (code.lambda_equal or code.psi_equal) else (None, None)
    loadings: List[np.ndarray] = []
    psis: List[np.ndarray] = []
    for g in range(G):
        own_l, own_psi = eigen_init(scatter[g], q, config.min_psi)
        if code.lambda_equal:
            own_l = shared_l
            own_psi = np.maximum(np.diag(scatter[g]) - np.sum(shared_l * shared_l, axis=1), config.min_psi)
        loadings.append(own_l)
        psis.append(shared_psi if code.psi_equal else own_psi)
    if code.psi_isotropic:
        psis = [np.full(data.p, float(np.mean(psi))) for psi in psis]
    if code.psi_equal:
        psis = [psis[0]] * G
    return assemble_params(code, c1, loadings, psis, q)


def _check_partition(data: Dataset, partition: Sequence[int], G: int) -> np.ndarray:
    part = np.asarray(partition, dtype=np.int64).reshape(-1)
    if part.shape[0] != data.n:
        raise InvalidInputError(f"initial partition has {part.shape[0]} entries, expected {data.n}")
    if np.any(part < 1) or np.any(part > G):
        raise InvalidInputError(f"initial partition entries must lie in 1..{G}")
    if data.has_labels:
        mask = data.labeled_mask
        if np.any(part[mask] != data.labels[mask]):
            raise InvalidInputError("initial partition disagrees with the known labels")
    return part


def _check_members(resp: Responsibilities, iteration: int) -> None:
    counts = resp.counts
    for g in range(resp.G):
        if counts[g] < MIN_COMPONENT_SIZE:
            raise DegenerateComponentError(
                f"component {g + 1} has expected size {counts[g]:.3g} at iteration {iteration}",
                component=g + 1,
                iteration=iteration,
            )


@log_performance
def fit(
    data: Dataset,
    code: ConstraintCode,
    G: int,
    q: int,
    init_z: Optional[Sequence[int]] = None,
    config: Optional[FitConfig] = None,
    warm_start: Optional[CWFAParams] = None,
) -> FitResult:
    """
    Fit one model by AECM.

    Args:
        data: observations; labeled rows are treated as known memberships
        code: constraint code
        G: number of components
        q: number of latent factors
        init_z: hard partition in 1..G used for the first cycle-1 update
        config: fit configuration
        warm_start: parameters to start from instead of `init_z`; must satisfy
            every constraint of `code`

    Raises:
        InvalidInputError: bad sizes, labels or partition
        DegenerateComponentError: a component fell below two expected members
    """
    config = config or FitConfig()
    if G < 1:
        raise InvalidInputError(f"G must be >= 1, got {G}")
    if not 1 <= q <= data.p:
        raise InvalidInputError(f"need 1 <= q <= p={data.p}, got q={q}")
    data.check_labels(G)
    if warm_start is not None:
        if (warm_start.G, warm_start.p, warm_start.q) != (G, data.p, q):
            raise InvalidInputError("warm start does not match (G, p, q)")
        params = warm_start.relaxed(code)
        start = "warm-start"
    else:
        if init_z is None:
            raise InvalidInputError("either init_z or warm_start is required")
        part = _check_partition(data, init_z, G)
        try:
            params = initial_params(data, code, G, q, part, config)
        except DegenerateComponentError as e:
            raise e.with_iteration(0) from None
        start = "partition"

    loadings = [c.loadings for c in params.components]
    psis = [c.uniquenesses for c in params.components]
    lj = log_joint(data, params)
    trace = [loglik_from_log_joint(lj, data)]
    converged = False
    inner_warnings = 0
    iteration = 0
    for iteration in range(1, config.max_outer_iters + 1):
        resp = posterior_from_log_joint(lj, data)
        _check_members(resp, iteration)
        c1 = cycle1_update(data, resp, code, config.min_sigma2)
        half = assemble_params(code, c1, loadings, psis, q)
        resp_half = posterior_from_log_joint(log_joint(data, half), data)
        _check_members(resp_half, iteration)
        scatter, counts = compute_scatter(data, resp_half, c1.means)
        moments = latent_moments(scatter, counts, loadings, psis)
        c2 = cycle2_update(code, moments, loadings, psis, config)
        if not c2.converged:
            inner_warnings += 1
        loadings, psis = list(c2.loadings), list(c2.uniquenesses)
        params = assemble_params(code, c1, loadings, psis, q)
        lj = log_joint(data, params)
        trace.append(loglik_from_log_joint(lj, data))
        logger.debug(f"{code} G={G} q={q} iteration {iteration}: loglik={trace[-1]:.6f} sweeps={c2.sweeps}")
        if len(trace) >= 3 and aitken_stop(trace[-3], trace[-2], trace[-1], config.epsilon):
            converged = True
            break

    if not converged:
        logger.warning(f"{code} G={G} q={q} reached {config.max_outer_iters} iterations without converging")
    if inner_warnings:
        logger.info(f"{code} G={G} q={q}: inner loop hit its cap in {inner_warnings} of {iteration} iterations")
    resp = posterior_from_log_joint(lj, data)
    final = trace[-1]
    eta = count_free_parameters(code, G, data.p, q)
    return FitResult(
        params=params,
        responsibilities=resp,
        map_labels=map_labels(resp),
        loglik_trace=np.asarray(trace),
        final_loglik=final,
        eta=eta,
        bic=bic(final, eta, data.n),
        iterations=iteration,
        converged=converged,
        n=data.n,
        inner_warnings=inner_warnings,
        start=start,
    )


def is_monotone(trace: Sequence[float], slack: float = 1e-6) -> bool:
    diffs = np.diff(np.asarray(trace, dtype=float))
    return bool(np.all(diffs >= -slack)) if diffs.size else True


__all__ = ["FitResult", "fit", "initial_params", "assemble_params", "is_monotone"]
