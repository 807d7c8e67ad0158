"""`ari`: adjusted Rand index between two labelings."""
from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any

import numpy as np

from core.command_safety import command_safe
from core.errors import InvalidInputError
from skills.selection.criteria import ari, confusion_table
from tools.common import adapter

_JSON_LABEL_KEYS = {"cwfa-truth": "labels", "cwfa-fit": "map_labels"}


def read_labels(path: str, column: str) -> np.ndarray:
    """
    Labels from a CSV column, a truth JSON (`labels`) or a fit JSON
    (`map_labels`). CSV labels are compared as text, so species names work.
    """
    store = adapter()
    if Path(path).suffix.lower() == ".json":
        document = store.load_json(path)
        key = _JSON_LABEL_KEYS.get(document.get("kind"))
        if key is None:
            raise InvalidInputError(f"{path}: no labels in a {document.get('kind')!r} document")
        return np.asarray(document[key], dtype=np.int64)
    frame = store.read_frame(path)
    if column not in frame.columns:
        raise InvalidInputError(f"{path}: missing column {column!r}", context={"columns": list(frame.columns)})
    values = frame[column].str.strip()
    blank = np.flatnonzero((values == "").to_numpy())
    if blank.size:
        raise InvalidInputError(f"{path}: empty label in column {column!r} at data row {blank[0] + 1}")
    return values.to_numpy(dtype=object)


@command_safe
def cmd_ari(args: argparse.Namespace) -> int:
    first = read_labels(args.first, args.first_col)
    second = read_labels(args.second, args.second_col)
    score = ari(first, second)
    if args.table:
        print(confusion_table(first, second).to_string())
    print(f"{score:.4f}")
    return 0


def register_commands(subparsers: Any) -> None:
    parser = subparsers.add_parser("ari", help="adjusted Rand index of two labelings")
    parser.add_argument("first", help="CSV file or truth/fit JSON")
    parser.add_argument("second", help="CSV file or truth/fit JSON")
    parser.add_argument("--first-col", default="label", help="label column of the first CSV (default: label)")
    parser.add_argument("--second-col", default="label", help="label column of the second CSV (default: label)")
    parser.add_argument("--table", action="store_true", help="also print the confusion table")
    parser.set_defaults(handler=cmd_ari)


__all__ = ["cmd_ari", "register_commands", "read_labels"]
