"""
Storage layer: JSON documents, text reports and dataset CSVs on disk.
"""
from .base import FORMAT_VERSION, StorageResult
from .file_adapter import FileAdapter, frame_to_dataset, load_voles_csv


__all__ = [
    "FORMAT_VERSION",
    "StorageResult",
    "FileAdapter",
    "frame_to_dataset",
    "load_voles_csv",
]
