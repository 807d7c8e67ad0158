"""
File storage adapter
====================
JSON documents, plain-text reports and dataset CSVs on the local filesystem.

Relative paths resolve against `base_dir`; absolute paths are used as given.
JSON is written with sorted keys and a trailing newline so the same content
always produces the same bytes.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from core.errors import InvalidInputError
from core.model import Dataset
from storage.base import FORMAT_VERSION, StorageResult
from utils.smart_logger import get_logger
from utils.validators import parse_label_value

logger = get_logger("storage")

PathLike = Union[str, Path]

VOLES_SPECIES_COL = "Species"
VOLES_Y_COL = "Age"
VOLES_X_COLS = ("L2", "L9", "L7", "B3", "B4", "H1")


class FileAdapter:
    def __init__(self, base_dir: PathLike = "reports"):
        self.base_dir = Path(base_dir)

    def resolve(self, path: PathLike) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p

    def _write(self, path: PathLike, text: str, kind: str) -> StorageResult:
        target = self.resolve(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8", newline="\n")
        except OSError as e:
            logger.error(f"failed to write {kind} to {target}: {e}")
            return StorageResult(success=False, location=str(target), error=str(e))
        logger.info(f"{kind} saved to {target}")
        return StorageResult(
            success=True,
            location=str(target.absolute()),
            message=f"{kind} saved to {target}",
            metadata={"bytes": len(text.encode("utf-8"))},
        )

    def save_json(self, path: PathLike, document: Dict[str, Any]) -> StorageResult:
        text = json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=True) + "\n"
        return self._write(path, text, str(document.get("kind", "json")))

    def load_json(self, path: PathLike, kind: Optional[str] = None) -> Dict[str, Any]:
        """
        Read a JSON document.

        Raises:
            InvalidInputError: unreadable file, invalid JSON, wrong `kind` or
                unsupported `format_version`
        """
        source = self.resolve(path)
        try:
            document = json.loads(source.read_text(encoding="utf-8"))
        except OSError as e:
            raise InvalidInputError(f"cannot read {source}: {e}") from None
        except json.JSONDecodeError as e:
            raise InvalidInputError(
                f"{source} is not valid JSON: {e.msg}", context={"line": e.lineno, "column": e.colno}
            ) from None
        if not isinstance(document, dict):
            raise InvalidInputError(f"{source} does not hold a JSON object")
        if kind is not None and document.get("kind") != kind:
            raise InvalidInputError(f"{source} holds {document.get('kind')!r}, expected {kind!r}")
        version = document.get("format_version", FORMAT_VERSION)
        if version != FORMAT_VERSION:
            raise InvalidInputError(f"{source}: unsupported format_version {version!r}")
        return document

    def save_text(self, path: PathLike, text: str) -> StorageResult:
        return self._write(path, text, "text")

    def write_dataset_csv(
        self,
        path: PathLike,
        data: Dataset,
        labels: Optional[Sequence[int]] = None,
        label_col: str = "label",
    ) -> StorageResult:
        """Columns x1..xp (or the dataset's names), y, then the optional label column (blank = unlabeled)."""
        frame = pd.DataFrame(np.asarray(data.x), columns=list(data.x_names))
        frame[data.y_name] = np.asarray(data.y)
        if labels is not None:
            values = np.asarray(labels, dtype=np.int64)
            if values.shape[0] != data.n:
                raise InvalidInputError(f"{values.shape[0]} labels for {data.n} rows")
            frame[label_col] = ["" if v == 0 else str(int(v)) for v in values]
        return self._write(path, frame.to_csv(index=False, lineterminator="\n"), "dataset")

    def read_frame(self, path: PathLike) -> pd.DataFrame:
        source = self.resolve(path)
        try:
            return pd.read_csv(source, dtype=str, keep_default_na=False, skipinitialspace=True)
        except FileNotFoundError:
            raise InvalidInputError(f"no such file: {source}") from None
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise InvalidInputError(f"cannot parse {source}: {e}") from None

    def read_dataset_csv(
        self,
        path: PathLike,
        y_col: str = "y",
        label_col: Optional[str] = None,
        exclude: Sequence[str] = (),
    ) -> Dataset:
        """
        Load a dataset. Covariates are every column except `y_col`, `label_col`
        and `exclude`, in file order.

        Raises:
            InvalidInputError: missing columns, or a non-numeric x/y cell
                (reported with its 1-based data row and column name), or an
                invalid label
        """
        frame = self.read_frame(path)
        return frame_to_dataset(frame, y_col=y_col, label_col=label_col, exclude=exclude, source=str(path))


def _numeric_column(frame: pd.DataFrame, column: str, source: str) -> np.ndarray:
    raw = frame[column]
    values = pd.to_numeric(raw.str.strip(), errors="coerce").to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        row = int(bad[0])
        raise InvalidInputError(
            f"{source}: non-numeric value {raw.iloc[row]!r} in column {column!r} at data row {row + 1}",
            context={"row": row + 1, "column": column, "value": raw.iloc[row]},
        )
    return values


def _label_column(frame: pd.DataFrame, column: str, source: str) -> np.ndarray:
    labels = np.zeros(len(frame), dtype=np.int64)
    for row, cell in enumerate(frame[column]):
        try:
            labels[row] = parse_label_value(cell)
        except ValueError as e:
            raise InvalidInputError(
                f"{source}: {e} in column {column!r} at data row {row + 1}",
                context={"row": row + 1, "column": column, "value": cell},
            ) from None
    return labels


def frame_to_dataset(
    frame: pd.DataFrame,
    y_col: str = "y",
    label_col: Optional[str] = None,
    exclude: Sequence[str] = (),
    source: str = "<frame>",
) -> Dataset:
    missing = [c for c in (y_col, label_col) if c is not None and c not in frame.columns]
    if missing:
        raise InvalidInputError(
            f"{source}: missing column(s) {missing}", context={"columns": list(frame.columns)}
        )
    skip = {y_col, *exclude} | ({label_col} if label_col else set())
    x_cols = [c for c in frame.columns if c not in skip]
    if not x_cols:
        raise InvalidInputError(f"{source}: no covariate columns besides {y_col!r}")
    if frame.empty:
        raise InvalidInputError(f"{source}: no data rows")
    x = np.column_stack([_numeric_column(frame, c, source) for c in x_cols])
    y = _numeric_column(frame, y_col, source)
    labels = _label_column(frame, label_col, source) if label_col else None
    logger.debug(f"read {len(frame)} rows, p={len(x_cols)} from {source}")
    return Dataset(x=x, y=y, labels=labels, x_names=tuple(x_cols), y_name=y_col)


def load_voles_csv(path: PathLike) -> Tuple[Dataset, np.ndarray, Tuple[str, ...]]:
    """
    Read the vole skull layout (Species, Age, L2, L9, L7, B3, B4, H1).

    Returns the unlabeled dataset (y = Age), species labels 1..k in sorted
    species-name order, and the species names.
    """
    adapter = FileAdapter(".")
    frame = adapter.read_frame(path)
    needed = (VOLES_SPECIES_COL, VOLES_Y_COL, *VOLES_X_COLS)
    missing = [c for c in needed if c not in frame.columns]
    if missing:
        raise InvalidInputError(f"{path}: missing vole column(s) {missing}")
    species = frame[VOLES_SPECIES_COL].str.strip()
    names = tuple(sorted(species.unique()))
    labels = species.map({name: i + 1 for i, name in enumerate(names)}).to_numpy(dtype=np.int64)
    data = frame_to_dataset(frame[list(needed[1:])], y_col=VOLES_Y_COL, source=str(path))
    return data, labels, names


__all__ = ["FileAdapter", "frame_to_dataset", "load_voles_csv", "VOLES_X_COLS"]
