"""Free-parameter counts of the sixteen models."""
from __future__ import annotations

from core.errors import InvalidInputError
from core.model import ConstraintCode


def loading_parameter_count(p: int, q: int) -> int:
    """pq − q(q−1)/2: loadings modulo rotation."""
    return p * q - q * (q - 1) // 2


def covariance_parameter_count(code: ConstraintCode, G: int, p: int, q: int) -> int:
    sigma = 1 if code.sigma_equal else G
    loadings = (1 if code.lambda_equal else G) * loading_parameter_count(p, q)
    groups = 1 if code.psi_equal else G
    per_group = 1 if code.psi_isotropic else p
    return sigma + loadings + groups * per_group


def count_free_parameters(code: ConstraintCode, G: int, p: int, q: int) -> int:
    """
    η = (G−1) weights + Gp means + G(p+1) regression coefficients + covariance count.

    Examples:
        UUUU, G=2, p=5, q=2 -> 53
        CCCU, G=3, p=6, q=1 -> 54
    """
    if G < 1:
        raise InvalidInputError(f"G must be >= 1, got {G}")
    if p < 1 or q < 1:
        raise InvalidInputError(f"p and q must be >= 1, got p={p}, q={q}")
    if q > p:
        raise InvalidInputError(f"q={q} exceeds p={p}")
    return (G - 1) + G * p + G * (p + 1) + covariance_parameter_count(code, G, p, q)


__all__ = ["loading_parameter_count", "covariance_parameter_count", "count_free_parameters"]
