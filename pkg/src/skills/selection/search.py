"""Grid search over (code × G × q) with hierarchical initialization per cell."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from core.errors import InvalidInputError, SearchFailedError
from core.model import ConstraintCode, Dataset
from skills.aecm.config import FitConfig
from skills.aecm.fitter import FitResult
from skills.initialization.hierarchy import FamilyEntry, FitFailure, hierarchical_fit_family
from skills.initialization.partitions import kmeans_partition, random_partition
from utils.async_helper import BatchProcessor
from utils.smart_logger import CWFAError, get_logger, log_performance

logger = get_logger("selection")

ONE_PERCENT = 0.01
START_STRATEGIES = ("kmeans", "random")


@dataclass(frozen=True)
class SearchEntry:
    code: ConstraintCode
    G: int
    q: int
    bic: float
    final_loglik: float
    converged: bool
    failure_reason: Optional[str] = None
    eta: Optional[int] = None
    iterations: int = 0

    @property
    def failed(self) -> bool:
        return self.failure_reason is not None

    @property
    def key(self) -> Tuple[str, int, int]:
        return str(self.code), self.G, self.q

    def to_dict(self) -> Dict[str, Any]:
        return {
            "code": str(self.code),
            "G": self.G,
            "q": self.q,
            "bic": None if self.failed else self.bic,
            "final_loglik": None if self.failed else self.final_loglik,
            "eta": self.eta,
            "iterations": self.iterations,
            "converged": self.converged,
            "failure_reason": self.failure_reason,
        }


def within_one_percent(bic_value: float, best_bic: float) -> bool:
    """|best − bic| <= 1% of |best|."""
    if not math.isfinite(bic_value):
        return False
    return abs(best_bic - bic_value) <= ONE_PERCENT * abs(best_bic)


@dataclass(frozen=True)
class SearchResult:
    """
    Entries sorted by BIC descending (failures last). `best` indexes the
    max-BIC converged entry.
    """
    entries: Tuple[SearchEntry, ...]
    best: int
    one_percent_line: float
    n: int
    fits: Dict[Tuple[str, int, int], FitResult] = field(default_factory=dict, repr=False, compare=False)

    @property
    def best_entry(self) -> SearchEntry:
        return self.entries[self.best]

    @property
    def best_result(self) -> FitResult:
        return self.fits[self.best_entry.key]

    def above_line(self, entry: SearchEntry) -> bool:
        return not entry.failed and within_one_percent(entry.bic, self.best_entry.bic)

    def leaderboard_frame(self) -> pd.DataFrame:
        rows = []
        for rank, entry in enumerate(self.entries, start=1):
            row = entry.to_dict()
            row["rank"] = rank
            row["above_one_percent_line"] = self.above_line(entry)
            rows.append(row)
        columns = ["rank", "code", "G", "q", "bic", "final_loglik", "eta", "iterations",
                   "converged", "above_one_percent_line", "failure_reason"]
        return pd.DataFrame(rows, columns=columns)

    def to_dict(self) -> Dict[str, Any]:
        best = self.best_entry
        return {
            "kind": "cwfa-search",
            "format_version": 1,
            "n": self.n,
            "best": {"index": self.best, "code": str(best.code), "G": best.G, "q": best.q, "bic": best.bic},
            "one_percent_line": self.one_percent_line,
            "entries": [dict(e.to_dict(), above_one_percent_line=self.above_line(e)) for e in self.entries],
        }


def _entry(code: ConstraintCode, G: int, q: int, outcome: Optional[FamilyEntry]) -> SearchEntry:
    if isinstance(outcome, FitResult):
        return SearchEntry(code, G, q, outcome.bic, outcome.final_loglik, outcome.converged,
                           eta=outcome.eta, iterations=outcome.iterations)
    reason = outcome.reason if isinstance(outcome, FitFailure) else "not fitted"
    return SearchEntry(code, G, q, float("nan"), float("nan"), False, failure_reason=reason)


def _sort_key(entry: SearchEntry) -> Tuple[int, float, str, int, int]:
    return (1 if entry.failed else 0, -entry.bic if not entry.failed else 0.0, str(entry.code), entry.G, entry.q)


@log_performance
def grid_search(
    data: Dataset,
    G_set: Sequence[int],
    q_set: Sequence[int],
    codes: Optional[Sequence[ConstraintCode]] = None,
    config: Optional[FitConfig] = None,
    restarts: int = 10,
    jobs: int = 1,
    start: str = "kmeans",
) -> SearchResult:
    """
    Fit every requested code for every (G, q) and rank by BIC.

    Each cell draws its own starting partition (k-means by default) and runs the
    hierarchical family; cells are independent and run on `jobs` threads.

    Raises:
        InvalidInputError: a q exceeds p, or empty sets
        SearchFailedError: no model could be fitted
    """
    config = config or FitConfig()
    codes = list(dict.fromkeys(codes)) if codes else ConstraintCode.all_codes()
    G_values = sorted(set(int(g) for g in G_set))
    q_values = sorted(set(int(q) for q in q_set))
    if not G_values or not q_values:
        raise InvalidInputError("G_set and q_set must be non-empty")
    if max(q_values) > data.p or min(q_values) < 1:
        raise InvalidInputError(f"every q must lie in 1..p={data.p}", context={"q_set": q_values})
    if min(G_values) < 1:
        raise InvalidInputError("every G must be >= 1")
    if start not in START_STRATEGIES:
        raise InvalidInputError(f"unknown start strategy {start!r}")
    cells = [(G, q) for G in G_values for q in q_values]

    def run_cell(cell: Tuple[int, int]) -> Dict[ConstraintCode, FamilyEntry]:
        G, q = cell
        if start == "kmeans":
            partition = kmeans_partition(data, G, restarts=restarts, seed=config.seed)
        else:
            partition = random_partition(data.n, G, seed=config.seed)
            if data.has_labels:
                data.check_labels(G)
                partition[data.labeled_mask] = data.labels[data.labeled_mask]
        return hierarchical_fit_family(data, G, q, partition, config, codes=codes)

    outcomes = BatchProcessor(max_workers=max(1, int(jobs))).process_batch(cells, run_cell)
    entries: List[SearchEntry] = []
    fits: Dict[Tuple[str, int, int], FitResult] = {}
    for (G, q), outcome in zip(cells, outcomes):
        if not outcome.success:
            err = outcome.error
            if not isinstance(err, CWFAError):
                raise err
            logger.warning(f"cell G={G} q={q} failed: {err}")
            family: Dict[ConstraintCode, FamilyEntry] = {
                c: FitFailure(c, G, q, err.message, type(err).__name__, err.error_code) for c in codes
            }
        else:
            family = outcome.result
        for code in codes:
            result = family.get(code)
            entries.append(_entry(code, G, q, result))
            if isinstance(result, FitResult):
                fits[(str(code), G, q)] = result
    if not fits:
        raise SearchFailedError(
            f"all {len(entries)} fits failed",
            context={"G_set": G_values, "q_set": q_values, "codes": [str(c) for c in codes]},
        )
    entries.sort(key=_sort_key)
    candidates = [i for i, e in enumerate(entries) if not e.failed and e.converged]
    if not candidates:
        logger.warning("no fit converged; selecting among non-converged fits")
        candidates = [i for i, e in enumerate(entries) if not e.failed]
    best = max(candidates, key=lambda i: entries[i].bic)
    best_bic = entries[best].bic
    result = SearchResult(
        entries=tuple(entries),
        best=best,
        one_percent_line=best_bic - ONE_PERCENT * abs(best_bic),
        n=data.n,
        fits=fits,
    )
    logger.info(
        f"grid search: best {entries[best].code} G={entries[best].G} q={entries[best].q} BIC={best_bic:.3f}"
    )
    return result


__all__ = ["SearchEntry", "SearchResult", "grid_search", "within_one_percent"]
