"""Eigen-decomposition start for loadings and uniquenesses."""
from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy import linalg

from core.errors import InvalidInputError


def eigen_init(S: np.ndarray, q: int, min_psi: float = 1e-8) -> Tuple[np.ndarray, np.ndarray]:
    """
    Λ from the top-q eigenpairs of S, Ψ = diag(S − ΛΛ').

    Column j of Λ is √d_j times the j-th leading eigenvector, signed so that its
    largest-magnitude entry is positive. Negative eigenvalues are clipped to 0 and
    Ψ is floored at `min_psi`.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InvalidInputError(f"scatter must be square, got shape {S.shape}")
    p = S.shape[0]
    if not 1 <= q <= p:
        raise InvalidInputError(f"need 1 <= q <= p, got q={q}, p={p}")
    values, vectors = linalg.eigh((S + S.T) / 2.0)
    order = np.argsort(values, kind="stable")[::-1][:q]
    d = np.clip(values[order], 0.0, None)
    v = vectors[:, order]
    pivots = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[pivots, np.arange(q)] < 0.0, -1.0, 1.0)
    loadings = v * signs[None, :] * np.sqrt(d)[None, :]
    psi = np.maximum(np.diag(S) - np.sum(loadings * loadings, axis=1), min_psi)
    return loadings, psi


__all__ = ["eigen_init"]
