"""Initial hard partitions (labels in 1..G)."""
from __future__ import annotations

import numpy as np
from sklearn.cluster import KMeans

from core.errors import InvalidInputError
from core.model import Dataset
from utils.smart_logger import get_logger

logger = get_logger("selection")

MAX_RANDOM_ATTEMPTS = 100


def _standardized_features(data: Dataset) -> np.ndarray:
    features = np.column_stack([data.x, data.y])
    scale = features.std(axis=0)
    scale[scale == 0.0] = 1.0
    return (features - features.mean(axis=0)) / scale


def kmeans_partition(data: Dataset, G: int, restarts: int = 10, seed: int = 0) -> np.ndarray:
    """
    Lloyd's k-means on the z-scored joint vector (x, y), best of `restarts` starts
    by within-cluster sum of squares. Labeled rows keep their labels.
    """
    if G < 1:
        raise InvalidInputError(f"G must be >= 1, got {G}")
    if restarts < 1:
        raise InvalidInputError(f"restarts must be >= 1, got {restarts}")
    if data.n < G:
        raise InvalidInputError(f"cannot split {data.n} rows into {G} clusters")
    if G == 1:
        partition = np.ones(data.n, dtype=np.int64)
    else:
        features = _standardized_features(data)
        distinct = np.unique(features, axis=0).shape[0]
        if distinct < G:
            raise InvalidInputError(f"only {distinct} distinct rows for {G} clusters", context={"G": G})
        model = KMeans(n_clusters=G, n_init=restarts, random_state=seed, algorithm="lloyd")
        partition = model.fit_predict(features).astype(np.int64) + 1
        logger.debug(f"k-means G={G}: inertia={model.inertia_:.4f}")
    if data.has_labels:
        data.check_labels(G)
        mask = data.labeled_mask
        partition[mask] = data.labels[mask]
    return partition


def random_partition(n: int, G: int, seed: int = 0) -> np.ndarray:
    """Uniform multinomial assignment, redrawn until no group is empty."""
    if G < 1 or n < G:
        raise InvalidInputError(f"need n >= G >= 1, got n={n}, G={G}")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RANDOM_ATTEMPTS):
        partition = rng.integers(1, G + 1, size=n)
        if np.bincount(partition, minlength=G + 1)[1:].min() > 0:
            return partition.astype(np.int64)
    raise InvalidInputError(f"no partition with {G} non-empty groups in {MAX_RANDOM_ATTEMPTS} draws")


def mask_labels(labels: np.ndarray, fraction: float, seed: int = 0) -> np.ndarray:
    """Keep a random `fraction` of labels, set the rest to 0 (unlabeled)."""
    if not 0.0 <= fraction <= 1.0:
        raise InvalidInputError(f"fraction must be in [0, 1], got {fraction}")
    labels = np.asarray(labels, dtype=np.int64).copy()
    rng = np.random.default_rng(seed)
    keep = int(round(fraction * labels.shape[0]))
    hidden = rng.permutation(labels.shape[0])[keep:]
    labels[hidden] = 0
    return labels


__all__ = ["kmeans_partition", "random_partition", "mask_labels"]
