"""
sys.path setup for the layered src/ tree.

Only `repo_root/src` goes on sys.path; modules import as the top-level packages
`core.*`, `skills.*`, `storage.*`, `tools.*`, `utils.*`.
"""
from __future__ import annotations

import sys
from pathlib import Path

_MARKERS = (".git", "requirements.txt")


def _repo_root() -> Path:
    here = Path(__file__).resolve()
    for parent in here.parents:
        if any((parent / m).exists() for m in _MARKERS):
            return parent
    # src/core/path_setup.py -> src -> repo
    return here.parents[2]


def setup_sys_path() -> Path:
    src = _repo_root() / "src"
    if str(src) not in sys.path:
        sys.path.insert(0, str(src))
    return src


__all__ = ["setup_sys_path"]
