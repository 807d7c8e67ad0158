"""
CWFA command-line interface
===========================
Subcommands: simulate, search, fit, classify, ari.

Exit codes: 0 success, 2 usage or input error, 3 computational failure.
Results go to stdout; diagnostics go to stderr and the log files.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from dotenv import load_dotenv

from utils.project_paths import PROJECT_ROOT
from tools.ari_tools import register_commands as _register_ari_commands
from tools.classify_tools import register_commands as _register_classify_commands
from tools.fit_tools import register_commands as _register_fit_commands
from tools.search_tools import register_commands as _register_search_commands
from tools.simulate_tools import register_commands as _register_simulate_commands

_REGISTRARS = (
    _register_simulate_commands,
    _register_search_commands,
    _register_fit_commands,
    _register_classify_commands,
    _register_ari_commands,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cwfa",
        description="Parsimonious cluster-weighted factor analyzers: simulate, fit, select and classify.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for register in _REGISTRARS:
        register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv(str(PROJECT_ROOT / ".env"))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
