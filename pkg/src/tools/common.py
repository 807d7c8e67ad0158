"""Options and helpers shared by the subcommands."""
from __future__ import annotations

import argparse
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.errors import InvalidInputError
from core.model import ConstraintCode, Dataset
from skills.aecm.config import FitConfig
from storage.base import StorageResult
from skills.initialization.partitions import mask_labels
from storage.file_adapter import FileAdapter, load_voles_csv
from utils.env_helpers import env_int, env_str, parse_list, resolve_path
from utils.smart_logger import CWFAError, get_logger
from utils.validators import parse_code_tokens, parse_int_set

logger = get_logger("cli")


DATA_FORMATS = ("csv", "voles")


def add_data_options(parser: argparse.ArgumentParser, label_default: Optional[str] = None) -> None:
    parser.add_argument("input", help="dataset CSV (header row required)")
    parser.add_argument(
        "--format",
        choices=DATA_FORMATS,
        default="csv",
        help="csv: numeric columns; voles: Species, Age and six skull measurements (default: csv)",
    )
    parser.add_argument("--y-col", default="y", help="response column (default: y)")
    parser.add_argument(
        "--label-col",
        default=label_default,
        help="column of known memberships; blank or NA cells are unlabeled",
    )
    parser.add_argument("--exclude", default="", help="comma-separated columns to ignore")
    parser.add_argument(
        "--label-fraction",
        type=float,
        default=None,
        help="keep this random fraction of the known labels (voles: species; default all for csv, none for voles)",
    )


def add_fit_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="seed for k-means/random starts (env CWFA_SEED)")
    parser.add_argument("--epsilon", type=float, default=None, help="Aitken tolerance (env CWFA_EPSILON, default 0.05)")
    parser.add_argument("--max-iters", type=int, default=None, help="outer iteration cap (env CWFA_MAX_OUTER_ITERS)")
    parser.add_argument(
        "--restarts", type=int, default=None, help="k-means restarts (env CWFA_RESTARTS, default 10)"
    )


def add_output_option(parser: argparse.ArgumentParser, help_text: str) -> None:
    parser.add_argument("--output", "-o", default=None, help=help_text)


def output_dir() -> Path:
    return Path(resolve_path(env_str("CWFA_OUTPUT_DIR", ""), "reports"))


def adapter() -> FileAdapter:
    """Explicit paths resolve against the working directory."""
    return FileAdapter(Path.cwd())


def default_path(*parts: str) -> Path:
    return output_dir().joinpath(*parts)


def require_saved(result: StorageResult) -> StorageResult:
    if not result.success:
        raise CWFAError(f"cannot write {result.location}: {result.error}", module="storage")
    return result


def fit_config(args: argparse.Namespace) -> FitConfig:
    return FitConfig.from_env(
        epsilon=getattr(args, "epsilon", None),
        max_outer_iters=getattr(args, "max_iters", None),
        seed=getattr(args, "seed", None),
    )


def restarts(args: argparse.Namespace) -> int:
    value = getattr(args, "restarts", None)
    return env_int("CWFA_RESTARTS", 10) if value is None else int(value)


def load_dataset_and_species(args: argparse.Namespace) -> Tuple[Dataset, Optional[np.ndarray]]:
    """
    The dataset named by `args.input`, plus the species labels for `--format voles`.

    Voles rows are unlabeled unless `--label-fraction` is given; the CSV format
    reads labels from `--label-col` and masks them only when a fraction is given.
    """
    fraction = getattr(args, "label_fraction", None)
    seed = env_int("CWFA_SEED", 0) if getattr(args, "seed", None) is None else args.seed
    if getattr(args, "format", "csv") == "voles":
        data, species, names = load_voles_csv(args.input)
        logger.info(f"{args.input}: {data.n} voles of species {', '.join(names)}")
        if fraction is not None:
            data = data.with_labels(_masked(species, fraction, seed))
        return data, species
    exclude = parse_list(args.exclude)
    data = FileAdapter(".").read_dataset_csv(
        args.input, y_col=args.y_col, label_col=args.label_col, exclude=exclude
    )
    if fraction is not None and data.labels is not None:
        data = data.with_labels(_masked(data.labels, fraction, seed))
    return data, None


def _masked(labels: np.ndarray, fraction: float, seed: int) -> np.ndarray:
    try:
        return mask_labels(labels, fraction, seed=seed)
    except InvalidInputError as e:
        raise InvalidInputError(f"--label-fraction: {e.message}") from None


def load_dataset(args: argparse.Namespace) -> Dataset:
    return load_dataset_and_species(args)[0]


def usable_G_set(data: Dataset, G_set: Sequence[int]) -> List[int]:
    """G values that can hold every known label; smaller ones are skipped with a warning."""
    largest = data.max_label
    usable = [G for G in G_set if G >= largest]
    skipped = [G for G in G_set if G < largest]
    if not usable:
        raise InvalidInputError(
            f"--G: labels go up to {largest}, every requested G is smaller", context={"G_set": list(G_set)}
        )
    if skipped:
        logger.warning(f"skipping G={skipped}: labels go up to {largest}")
    data.check_labels(max(usable))
    return usable


def int_set(value: str, name: str) -> List[int]:
    try:
        return parse_int_set(value, min_value=1)
    except ValueError as e:
        raise InvalidInputError(f"--{name}: {e}") from None


def code_list(value: str) -> List[ConstraintCode]:
    try:
        tokens = parse_code_tokens(value)
    except ValueError as e:
        raise InvalidInputError(f"--codes: {e}") from None
    if tokens == ["ALL"]:
        return ConstraintCode.all_codes()
    return [ConstraintCode.parse(t) for t in tokens]


def labels_frame_columns(given: Optional[np.ndarray], predicted: np.ndarray) -> dict:
    columns = {"row": np.arange(1, predicted.shape[0] + 1)}
    if given is not None:
        columns["given"] = np.asarray(given, dtype=np.int64)
    columns["label"] = np.asarray(predicted, dtype=np.int64)
    return columns


__all__ = [
    "add_data_options",
    "add_fit_options",
    "add_output_option",
    "output_dir",
    "adapter",
    "default_path",
    "require_saved",
    "fit_config",
    "restarts",
    "DATA_FORMATS",
    "load_dataset",
    "load_dataset_and_species",
    "usable_G_set",
    "int_set",
    "code_list",
    "labels_frame_columns",
]
