"""
Batch execution helper
Runs independent jobs on a thread pool and returns results in submission order.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence

from utils.smart_logger import get_logger


logger = get_logger("system")


@dataclass
class BatchResult:
    """Outcome of one job."""
    success: bool
    result: Any = None
    error: Optional[BaseException] = None
    duration: float = 0.0
    index: int = 0


class BatchProcessor:
    """Thread-pool batch processor; `max_workers=1` runs inline."""

    def __init__(self, max_workers: int = 1):
        if max_workers < 1:
            raise ValueError(f"max_workers must be >= 1, got {max_workers}")
        self.max_workers = int(max_workers)

    def process_batch(self, items: Sequence[Any], func: Callable[[Any], Any]) -> List[BatchResult]:
        """
        Apply `func` to every item. Exceptions are captured in the results.

        Returns:
            one BatchResult per item, ordered like `items`
        """
        workers = min(self.max_workers, len(items))
        logger.debug(f"[Batch] {len(items)} jobs on {max(workers, 1)} worker(s)")
        if workers <= 1:
            return [self._process_single(func, item, idx) for idx, item in enumerate(items)]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(self._process_single, func, item, idx) for idx, item in enumerate(items)]
            return [future.result() for future in futures]

    @staticmethod
    def _process_single(func: Callable, item: Any, index: int) -> BatchResult:
        start = time.perf_counter()
        try:
            return BatchResult(success=True, result=func(item), duration=time.perf_counter() - start, index=index)
        except Exception as e:
            return BatchResult(success=False, error=e, duration=time.perf_counter() - start, index=index)


__all__ = ["BatchResult", "BatchProcessor"]
