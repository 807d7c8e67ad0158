"""Model-selection and agreement criteria."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np
import pandas as pd

from core.errors import InvalidInputError


def bic(loglik: float, eta: int, n: int) -> float:
    """2·loglik − η·ln n (larger is better)."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if eta < 0:
        raise InvalidInputError(f"eta must be >= 0, got {eta}")
    return 2.0 * float(loglik) - eta * math.log(n)


def confusion_table(a: Sequence, b: Sequence) -> pd.DataFrame:
    """Cross-tabulation of two labelings (rows: a, columns: b)."""
    sa = pd.Series(np.asarray(a).reshape(-1), name="a")
    sb = pd.Series(np.asarray(b).reshape(-1), name="b")
    if len(sa) != len(sb):
        raise InvalidInputError(f"label vectors differ in length: {len(sa)} vs {len(sb)}")
    return pd.crosstab(sa, sb)


def _pairs(counts: np.ndarray) -> int:
    c = counts.astype(np.int64)
    return int(np.sum(c * (c - 1) // 2))


def ari_from_table(table: np.ndarray) -> float:
    """Hubert–Arabie adjusted Rand index of a contingency table, exact integer pair counts."""
    table = np.asarray(table, dtype=np.int64)
    n = int(table.sum())
    if n < 2:
        raise InvalidInputError("ARI needs at least two observations")
    index = _pairs(table)
    rows = _pairs(table.sum(axis=1))
    cols = _pairs(table.sum(axis=0))
    total = n * (n - 1) // 2
    # exact rationals: expected = rows*cols/total, max = (rows+cols)/2
    numerator = 2 * (index * total - rows * cols)
    denominator = (rows + cols) * total - 2 * rows * cols
    if denominator == 0:
        return 1.0 if numerator == 0 else 0.0
    return numerator / denominator


def ari(a: Sequence, b: Sequence) -> float:
    """Adjusted Rand index of two labelings; 1 for identical partitions up to relabeling."""
    a_arr = np.asarray(a).reshape(-1)
    b_arr = np.asarray(b).reshape(-1)
    if a_arr.shape[0] != b_arr.shape[0]:
        raise InvalidInputError(f"label vectors differ in length: {a_arr.shape[0]} vs {b_arr.shape[0]}")
    if a_arr.shape[0] < 2:
        raise InvalidInputError("ARI needs at least two observations")
    return ari_from_table(confusion_table(a_arr, b_arr).to_numpy())


__all__ = ["bic", "ari", "ari_from_table", "confusion_table"]
