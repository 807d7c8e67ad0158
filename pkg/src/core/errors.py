"""Typed errors raised by the library. Exit codes: 2 input/usage, 3 computational."""
from __future__ import annotations

from typing import Any, Dict, Optional

from utils.smart_logger import CWFAError


class InvalidParameterError(CWFAError):
    """A parameter value violates its domain (e.g. non-positive variance)."""
    exit_code = 2
    default_module = 'fit'


class InvalidInputError(CWFAError):
    """Data, labels or options are unusable."""
    exit_code = 2
    default_module = 'system'


class DegenerateCovarianceError(CWFAError):
    exit_code = 3
    default_module = 'fit'


class SingularRegressionError(CWFAError):
    exit_code = 3
    default_module = 'fit'


class DegenerateComponentError(CWFAError):
    """A component lost its members. `component` is 1-based."""
    exit_code = 3
    default_module = 'fit'

    def __init__(
        self,
        message: str,
        component: int,
        iteration: Optional[int] = None,
        context: Optional[Dict[str, Any]] = None,
    ):
        self.component = int(component)
        self.iteration = iteration
        ctx = dict(context or {})
        ctx.update({'component': self.component, 'iteration': iteration})
        super().__init__(message, context=ctx)

    def with_iteration(self, iteration: int) -> "DegenerateComponentError":
        return DegenerateComponentError(
            f"{self.message} (iteration {iteration})", self.component, iteration, self.context
        )


class FamilyInitError(CWFAError):
    exit_code = 3
    default_module = 'selection'


class SearchFailedError(CWFAError):
    exit_code = 3
    default_module = 'selection'


__all__ = [
    "CWFAError",
    "InvalidParameterError",
    "InvalidInputError",
    "DegenerateCovarianceError",
    "SingularRegressionError",
    "DegenerateComponentError",
    "FamilyInitError",
    "SearchFailedError",
]
