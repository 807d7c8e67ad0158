"""
CWFA command-line entry
=======================
Stable launcher at the repository root; the implementation lives in
`src/core/cli.py`.

    python cwfa.py simulate --spec example1 --seed 7
    python cwfa.py search reports/example1_seed7.csv --G 2,3 --q 1,2
"""
from __future__ import annotations

import os
import sys


def _bootstrap() -> None:
    repo_root = os.path.dirname(os.path.abspath(__file__))
    src_dir = os.path.join(repo_root, "src")
    if src_dir not in sys.path:
        sys.path.insert(0, src_dir)
    from core.path_setup import setup_sys_path

    setup_sys_path()


_bootstrap()

from core.cli import main  # noqa: E402


if __name__ == "__main__":
    sys.exit(main())
