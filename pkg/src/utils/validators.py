from __future__ import annotations

import math
import re
from typing import Iterable, List, Sequence, Union

import numpy as np

Numeric = Union[str, int, float]
_CODE_PATTERN = re.compile(r"^[CU]{4}$")
_RANGE_PATTERN = re.compile(r"^\s*(\d+)\s*-\s*(\d+)\s*$")
_MISSING_TOKENS = {"", "na", "nan", "none", "null", "?"}


def parse_int_set(value: Union[str, Iterable[int]], min_value: int = 1) -> List[int]:
    """Parse "2,3", "2-5" or "1,3-4" into a sorted list of distinct ints."""
    if not isinstance(value, str):
        items = sorted({int(v) for v in value})
    else:
        items_set = set()
        for part in value.split(","):
            part = part.strip()
            if not part:
                continue
            match = _RANGE_PATTERN.match(part)
            if match:
                lo, hi = int(match.group(1)), int(match.group(2))
                if lo > hi:
                    raise ValueError(f"Invalid range: {part}")
                items_set.update(range(lo, hi + 1))
                continue
            try:
                items_set.add(int(part))
            except ValueError:
                raise ValueError(f"Invalid integer: {part}") from None
        items = sorted(items_set)
    if not items:
        raise ValueError("At least one value is required")
    if items[0] < min_value:
        raise ValueError(f"Values must be >= {min_value}, got {items[0]}")
    return items


def parse_code_tokens(value: str) -> List[str]:
    """Split a constraint-code list; returns ["ALL"] for "all"."""
    tokens = [t.strip().upper() for t in (value or "").split(",") if t.strip()]
    if not tokens:
        raise ValueError("At least one constraint code is required")
    if tokens == ["ALL"]:
        return tokens
    for token in tokens:
        if not _CODE_PATTERN.match(token):
            raise ValueError(f"Invalid constraint code: {token} (expected four letters from C/U)")
    return list(dict.fromkeys(tokens))


def parse_label_value(value: Numeric) -> int:
    """Label cell to int; 0 means unlabeled."""
    if value is None:
        return 0
    if isinstance(value, float):
        if math.isnan(value):
            return 0
        if not value.is_integer():
            raise ValueError(f"Label must be an integer, got {value}")
        value = int(value)
    if isinstance(value, str):
        candidate = value.strip()
        if candidate.lower() in _MISSING_TOKENS:
            return 0
        try:
            as_float = float(candidate)
        except ValueError:
            raise ValueError(f"Label must be an integer, got {value!r}") from None
        if not as_float.is_integer():
            raise ValueError(f"Label must be an integer, got {value!r}")
        value = int(as_float)
    label = int(value)
    if label < 1:
        raise ValueError(f"Label must be >= 1, got {label}")
    return label


def validate_labels(labels: Sequence[int], G: int, name: str = "labels") -> None:
    """Every labeled entry (nonzero) must be within 1..G."""
    values = np.asarray(labels, dtype=np.int64).reshape(-1)
    bad = values[(values != 0) & ((values < 1) | (values > G))]
    if bad.size:
        raise ValueError(f"{name}: label {int(bad[0])} outside 1..{G}")


__all__ = [
    "parse_int_set",
    "parse_code_tokens",
    "parse_label_value",
    "validate_labels",
]
