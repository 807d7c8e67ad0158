"""
Hierarchical initialization over the 16-model lattice.

CCCC is fitted from the base partition. Every other model starts from its best
fitted parent, tried two ways: from the parent's MAP partition and from the
parent's parameters. The run with the larger final log-likelihood is kept, so a
child never ends below the parent it started from.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Union

import numpy as np

from core.errors import FamilyInitError
from core.model import ConstraintCode, Dataset
from skills.aecm.config import FitConfig
from skills.aecm.fitter import FitResult, fit
from skills.initialization.lattice import build_lattice
from utils.smart_logger import CWFAError, get_logger

logger = get_logger("selection")

ROOT = ConstraintCode.parse("CCCC")


@dataclass(frozen=True)
class FitFailure:
    """A model of the family whose fit raised."""
    code: ConstraintCode
    G: int
    q: int
    reason: str
    error_type: str
    error_code: str

    converged = False

    def to_dict(self) -> Dict[str, object]:
        return {
            "code": str(self.code),
            "G": self.G,
            "q": self.q,
            "reason": self.reason,
            "error_type": self.error_type,
            "error_code": self.error_code,
        }


FamilyEntry = Union[FitResult, FitFailure]


def _failure(code: ConstraintCode, G: int, q: int, err: CWFAError) -> FitFailure:
    logger.warning(f"{code} G={G} q={q} failed [{err.error_code}]: {err.message}")
    return FitFailure(code, G, q, err.message, type(err).__name__, err.error_code)


def _fit_child(
    data: Dataset,
    code: ConstraintCode,
    G: int,
    q: int,
    parent: Optional[FitResult],
    fallback: np.ndarray,
    config: FitConfig,
) -> FitResult:
    candidates: List[FitResult] = []
    errors: List[CWFAError] = []
    partition = parent.map_labels if parent is not None else fallback
    try:
        candidates.append(fit(data, code, G, q, init_z=partition, config=config))
    except CWFAError as e:
        errors.append(e)
    if parent is not None:
        try:
            candidates.append(fit(data, code, G, q, config=config, warm_start=parent.params))
        except CWFAError as e:
            errors.append(e)
    if not candidates:
        raise errors[0]
    return max(candidates, key=lambda r: r.final_loglik)


def best_parent(parents: Iterable[FamilyEntry]) -> Optional[FitResult]:
    """Largest final log-likelihood; ties go to the lexicographically smaller code."""
    fitted = sorted((p for p in parents if isinstance(p, FitResult)), key=lambda r: str(r.code))
    if not fitted:
        return None
    return max(fitted, key=lambda r: r.final_loglik)


def hierarchical_fit_family(
    data: Dataset,
    G: int,
    q: int,
    base_partition: np.ndarray,
    config: Optional[FitConfig] = None,
    codes: Optional[Iterable[ConstraintCode]] = None,
) -> Dict[ConstraintCode, FamilyEntry]:
    """
    Fit the lattice top-down.

    Args:
        codes: restrict to these codes and their ancestors (default: all 16)

    Returns:
        code -> FitResult or FitFailure, in lattice order

    Raises:
        FamilyInitError: CCCC itself could not be fitted
    """
    config = config or FitConfig()
    lattice = build_lattice()
    if codes is None:
        targets = {c for level in lattice.levels for c in level}
    else:
        targets = {a for c in codes for a in lattice.ancestors(c)}
    base = np.asarray(base_partition, dtype=np.int64)
    results: Dict[ConstraintCode, FamilyEntry] = {}
    try:
        results[ROOT] = fit(data, ROOT, G, q, init_z=base, config=config)
    except CWFAError as e:
        raise FamilyInitError(
            f"CCCC failed for G={G}, q={q}: {e.message}",
            context={"G": G, "q": q, "cause": type(e).__name__, "cause_code": e.error_code},
        ) from e
    for level in lattice.levels[1:]:
        for code in level:
            if code not in targets:
                continue
            parent = best_parent(results[p] for p in lattice.parents(code) if p in results)
            try:
                results[code] = _fit_child(data, code, G, q, parent, base, config)
            except CWFAError as e:
                results[code] = _failure(code, G, q, e)
    logger.info(
        f"family G={G} q={q}: {sum(isinstance(r, FitResult) for r in results.values())}/{len(results)} fitted"
    )
    return results


__all__ = ["FitFailure", "FamilyEntry", "best_parent", "hierarchical_fit_family"]
