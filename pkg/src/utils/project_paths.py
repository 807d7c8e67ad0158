"""Repository root, located by marker files so moved modules keep working."""
from __future__ import annotations

from pathlib import Path
from typing import Optional

_MARKERS = (".git", "requirements.txt")


def find_repo_root(start: Optional[Path] = None) -> Path:
    here = (start or Path(__file__)).resolve()
    for candidate in (here, *here.parents):
        if any((candidate / marker).exists() for marker in _MARKERS):
            return candidate
    return Path.cwd().resolve()


PROJECT_ROOT: Path = find_repo_root()

__all__ = ["PROJECT_ROOT", "find_repo_root"]
