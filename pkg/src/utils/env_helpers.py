"""
CWFA_* environment reads.

Unset, blank or malformed values fall back to the caller's default; malformed
ones are reported once on the `system` channel.
"""
from __future__ import annotations

import logging
import os
from typing import Callable, List, Optional, TypeVar

from utils.project_paths import PROJECT_ROOT

T = TypeVar("T")
_TRUE = frozenset({"1", "true", "yes", "y", "on"})
_reported: set = set()


def _raw(name: str) -> Optional[str]:
    value = os.getenv(name)
    if value is None or not value.strip():
        return None
    return value.strip()


def _typed(name: str, default: T, cast: Callable[[str], T]) -> T:
    value = _raw(name)
    if value is None:
        return default
    try:
        return cast(value)
    except ValueError:
        if (name, value) not in _reported:
            _reported.add((name, value))
            # smart_logger imports this module, so the logger is looked up by name
            logging.getLogger("cwfa.system").warning(f"ignoring {name}={value!r}; using {default!r}")
        return default


def env_str(name: str, default: str = "") -> str:
    value = _raw(name)
    return default if value is None else value


def env_int(name: str, default: int = 0) -> int:
    return _typed(name, default, int)


def env_float(name: str, default: float = 0.0) -> float:
    return _typed(name, default, float)


def env_bool(name: str, default: bool = False) -> bool:
    """1/true/yes/y/on (any case) are true; anything else set is false."""
    value = _raw(name)
    return default if value is None else value.lower() in _TRUE


def resolve_path(path: str, default_rel: str, base_dir: Optional[str] = None) -> str:
    """`path` (or `default_rel` when blank); relative paths join `base_dir`, else the repo root."""
    chosen = (path or "").strip() or default_rel
    if os.path.isabs(chosen):
        return chosen
    return os.path.join(str(PROJECT_ROOT) if base_dir is None else base_dir, chosen)


def parse_list(value: Optional[str]) -> List[str]:
    """Comma-separated column names, blanks dropped."""
    return [item.strip() for item in (value or "").split(",") if item.strip()]


__all__ = ["env_str", "env_int", "env_float", "env_bool", "resolve_path", "parse_list"]
