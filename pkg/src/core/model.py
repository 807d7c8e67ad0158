"""
Parameter and data containers.

All containers are frozen dataclasses whose arrays are private read-only
copies, so values can be shared between threads without copying.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import InvalidInputError, InvalidParameterError
from utils.validators import validate_labels

FORMAT_VERSION = 1
ROW_SUM_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-12


def _frozen(values: Any, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise InvalidParameterError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, order=True)
class ConstraintCode:
    """
    Four-letter model identifier: Y-variance, loading, error-variance, isotropy.
    `C` means constrained (equal across groups, or isotropic for the last letter).
    """
    sigma_equal: bool
    lambda_equal: bool
    psi_equal: bool
    psi_isotropic: bool

    @classmethod
    def parse(cls, text: str) -> "ConstraintCode":
        token = (text or "").strip().upper()
        if len(token) != 4 or any(ch not in "CU" for ch in token):
            raise InvalidInputError(f"Invalid constraint code: {text!r}", context={"code": text})
        return cls(*(ch == "C" for ch in token))

    @classmethod
    def all_codes(cls) -> List["ConstraintCode"]:
        """All sixteen codes, UUUU first and CCCC last."""
        return [cls.parse(f"{i:04b}".replace("0", "U").replace("1", "C")) for i in range(16)]

    @property
    def letters(self) -> str:
        flags = (self.sigma_equal, self.lambda_equal, self.psi_equal, self.psi_isotropic)
        return "".join("C" if f else "U" for f in flags)

    @property
    def constrained_count(self) -> int:
        return sum((self.sigma_equal, self.lambda_equal, self.psi_equal, self.psi_isotropic))

    def __str__(self) -> str:
        return self.letters


@dataclass(frozen=True)
class ComponentParams:
    weight: float
    intercept: float
    slope: np.ndarray
    noise_var: float
    mean: np.ndarray
    loadings: np.ndarray
    uniquenesses: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight", float(self.weight))
        object.__setattr__(self, "intercept", float(self.intercept))
        object.__setattr__(self, "noise_var", float(self.noise_var))
        object.__setattr__(self, "slope", _frozen(self.slope, 1, "slope"))
        object.__setattr__(self, "mean", _frozen(self.mean, 1, "mean"))
        object.__setattr__(self, "loadings", _frozen(self.loadings, 2, "loadings"))
        object.__setattr__(self, "uniquenesses", _frozen(self.uniquenesses, 1, "uniquenesses"))
        p = self.mean.shape[0]
        if self.slope.shape != (p,) or self.uniquenesses.shape != (p,) or self.loadings.shape[0] != p:
            raise InvalidParameterError(
                "component dimensions disagree",
                context={"mean": self.mean.shape, "slope": self.slope.shape,
                         "loadings": self.loadings.shape, "uniquenesses": self.uniquenesses.shape},
            )
        if not np.isfinite(self.weight) or not 0.0 < self.weight <= 1.0:
            raise InvalidParameterError(f"weight must be in (0, 1], got {self.weight}")
        if not np.isfinite(self.intercept):
            raise InvalidParameterError("intercept must be finite")
        if not np.isfinite(self.noise_var) or self.noise_var <= 0.0:
            raise InvalidParameterError(f"noise_var must be positive, got {self.noise_var}")
        if np.any(self.uniquenesses <= 0.0):
            raise InvalidParameterError("uniquenesses must be positive")

    @property
    def p(self) -> int:
        return self.mean.shape[0]

    @property
    def q(self) -> int:
        return self.loadings.shape[1]

    def covariance(self) -> np.ndarray:
        """Λ Λ' + Ψ."""
        return self.loadings @ self.loadings.T + np.diag(self.uniquenesses)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "weight": self.weight,
            "intercept": self.intercept,
            "slope": self.slope.tolist(),
            "noise_var": self.noise_var,
            "mean": self.mean.tolist(),
            "loadings": self.loadings.tolist(),
            "uniquenesses": self.uniquenesses.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ComponentParams":
        try:
            return cls(
                weight=data["weight"],
                intercept=data["intercept"],
                slope=data["slope"],
                noise_var=data["noise_var"],
                mean=data["mean"],
                loadings=data["loadings"],
                uniquenesses=data["uniquenesses"],
            )
        except KeyError as e:
            raise InvalidInputError(f"component is missing field {e.args[0]!r}") from None


@dataclass(frozen=True)
class CWFAParams:
    code: ConstraintCode
    components: Tuple[ComponentParams, ...]
    p: int
    q: int

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise InvalidParameterError("at least one component is required")
        if not 1 <= self.q <= self.p:
            raise InvalidParameterError(f"need 1 <= q <= p, got q={self.q}, p={self.p}")
        for g, comp in enumerate(comps, start=1):
            if comp.p != self.p or comp.q != self.q:
                raise InvalidParameterError(
                    f"component {g} has shape (p={comp.p}, q={comp.q}), expected ({self.p}, {self.q})"
                )
            if self.code.psi_isotropic and np.any(comp.uniquenesses != comp.uniquenesses[0]):
                raise InvalidParameterError(f"component {g} uniquenesses must be isotropic for {self.code}")
        total = sum(c.weight for c in comps)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidParameterError(f"weights must sum to 1, got {total!r}")
        first = comps[0]
        for g, comp in enumerate(comps[1:], start=2):
            if self.code.sigma_equal and comp.noise_var != first.noise_var:
                raise InvalidParameterError(f"component {g} noise_var differs under {self.code}")
            if self.code.lambda_equal and not np.array_equal(comp.loadings, first.loadings):
                raise InvalidParameterError(f"component {g} loadings differ under {self.code}")
            if self.code.psi_equal and not np.array_equal(comp.uniquenesses, first.uniquenesses):
                raise InvalidParameterError(f"component {g} uniquenesses differ under {self.code}")

    @property
    def G(self) -> int:
        return len(self.components)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components])

    def covariance(self, g: int) -> np.ndarray:
        """Σ_g for the 0-based component index g."""
        return self.components[g].covariance()

    def regression(self, g: int) -> Tuple[float, np.ndarray]:
        comp = self.components[g]
        return comp.intercept, comp.slope

    def relaxed(self, code: ConstraintCode) -> "CWFAParams":
        """The same parameter values under another code (must be implied by it)."""
        return CWFAParams(code=code, components=self.components, p=self.p, q=self.q)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "cwfa-model",
            "format_version": FORMAT_VERSION,
            "code": str(self.code),
            "p": self.p,
            "q": self.q,
            "G": self.G,
            "components": [c.to_dict() for c in self.components],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CWFAParams":
        version = data.get("format_version")
        if version != FORMAT_VERSION:
            raise InvalidInputError(f"unsupported model format_version: {version!r}")
        try:
            return cls(
                code=ConstraintCode.parse(data["code"]),
                components=tuple(ComponentParams.from_dict(c) for c in data["components"]),
                p=int(data["p"]),
                q=int(data["q"]),
            )
        except KeyError as e:
            raise InvalidInputError(f"model is missing field {e.args[0]!r}") from None


@dataclass(frozen=True)
class Dataset:
    """
    n observations of (x, y). `labels[i] == 0` marks an unlabeled row,
    otherwise the row's known component in 1..G.
    """
    x: np.ndarray
    y: np.ndarray
    labels: Optional[np.ndarray] = None
    x_names: Tuple[str, ...] = field(default=())
    y_name: str = "y"

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=float)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        y = np.array(self.y, dtype=float).reshape(-1)
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
            raise InvalidInputError(f"x must be a non-empty n x p matrix, got shape {x.shape}")
        if y.shape[0] != x.shape[0]:
            raise InvalidInputError(f"x has {x.shape[0]} rows but y has {y.shape[0]}")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
            raise InvalidInputError("dataset contains non-finite entries")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if self.labels is not None:
            labels = np.array(self.labels, dtype=np.int64).reshape(-1)
            if labels.shape[0] != x.shape[0]:
                raise InvalidInputError(f"labels have {labels.shape[0]} entries, expected {x.shape[0]}")
            if np.any(labels < 0):
                raise InvalidInputError("labels must be 0 (unlabeled) or positive component indices")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)
        names = tuple(self.x_names) or tuple(f"x{j + 1}" for j in range(x.shape[1]))
        if len(names) != x.shape[1]:
            raise InvalidInputError(f"{len(names)} covariate names for {x.shape[1]} columns")
        object.__setattr__(self, "x_names", names)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    @property
    def labeled_mask(self) -> np.ndarray:
        if self.labels is None:
            return np.zeros(self.n, dtype=bool)
        return self.labels > 0

    @property
    def has_labels(self) -> bool:
        return bool(self.labeled_mask.any())

    def check_labels(self, G: int) -> None:
        if self.labels is None:
            return
        try:
            validate_labels(self.labels, G)
        except ValueError as e:
            raise InvalidInputError(str(e), context={"G": G, "max_label": self.max_label}) from None

    @property
    def max_label(self) -> int:
        """Largest given label, 0 when no row is labeled."""
        return 0 if self.labels is None or not self.labels.size else int(self.labels.max())

    def with_labels(self, labels: Optional[Sequence[int]]) -> "Dataset":
        return Dataset(x=self.x, y=self.y, labels=labels, x_names=self.x_names, y_name=self.y_name)

    def take(self, rows: Iterable[int]) -> "Dataset":
        idx = np.asarray(list(rows), dtype=np.int64)
        labels = None if self.labels is None else self.labels[idx]
        return Dataset(x=self.x[idx], y=self.y[idx], labels=labels, x_names=self.x_names, y_name=self.y_name)


@dataclass(frozen=True)
class Responsibilities:
    z: np.ndarray

    def __post_init__(self) -> None:
        z = np.array(self.z, dtype=float)
        if z.ndim != 2 or z.shape[0] < 1 or z.shape[1] < 1:
            raise InvalidInputError(f"responsibilities must be an n x G matrix, got shape {z.shape}")
        if np.any(z < 0.0) or np.any(z > 1.0) or not np.all(np.isfinite(z)):
            raise InvalidInputError("responsibilities must lie in [0, 1]")
        if np.max(np.abs(z.sum(axis=1) - 1.0)) > ROW_SUM_TOL:
            raise InvalidInputError("responsibility rows must sum to 1")
        z.setflags(write=False)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @property
    def G(self) -> int:
        return self.z.shape[1]

    @property
    def counts(self) -> np.ndarray:
        return self.z.sum(axis=0)

    @classmethod
    def from_partition(cls, partition: Sequence[int], G: int) -> "Responsibilities":
        """0/1 indicators of a hard partition with labels in 1..G."""
        part = np.asarray(partition, dtype=np.int64).reshape(-1)
        if part.size == 0 or np.any(part < 1) or np.any(part > G):
            raise InvalidInputError(f"partition entries must lie in 1..{G}")
        z = np.zeros((part.size, G))
        z[np.arange(part.size), part - 1] = 1.0
        return cls(z)


__all__ = [
    "FORMAT_VERSION",
    "ConstraintCode",
    "ComponentParams",
    "CWFAParams",
    "Dataset",
    "Responsibilities",
]
