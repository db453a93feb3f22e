"""Rule-base initialization from k-means clusters of the training inputs."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InsufficientDataError, InvalidArgumentError, ShapeError
from .fuzzy import AnfisModel, Normalization, log_firing_strengths

#: Spread floor as a fraction of each feature's standard deviation.
SPREAD_FLOOR_FRACTION = 0.05
MAX_LLOYD_ITERATIONS = 300


class CoverageWarning(UserWarning):
    """Some training point lies far outside every seeded rule."""


@dataclass(frozen=True)
class ClusterSeed:
    center: np.ndarray
    spread: np.ndarray


def spread_floor(X: np.ndarray) -> np.ndarray:
    """Per-feature width floor; constant features count as unit scale."""
    std = np.asarray(X, dtype=float).std(axis=0)
    return SPREAD_FLOOR_FRACTION * np.where(std > 0, std, 1.0)


def _kmeanspp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    m = X.shape[0]
    chosen = [int(rng.integers(m))]
    d2 = np.sum((X - X[chosen[0]]) ** 2, axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(m, p=d2 / total))
        else:
            # every point coincides with a chosen center
            unused = np.setdiff1d(np.arange(m), chosen)
            idx = int(unused[0])
        chosen.append(idx)
        d2 = np.minimum(d2, np.sum((X - X[idx]) ** 2, axis=1))
    return X[chosen].copy()


def _assign(X: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=-1)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(X.shape[0]), labels]


def kmeans(X, k: int, seed: int = 0, max_iter: int = MAX_LLOYD_ITERATIONS) -> tuple[np.ndarray, np.ndarray]:
    """Lloyd's algorithm with k-means++ seeding. Returns ``(centers, labels)``.

    An empty cluster is re-seeded at the point farthest from its current center.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got {X.ndim}-D")
    m = X.shape[0]
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise InvalidArgumentError(f"number of clusters must be a positive integer, got {k!r}")
    if m < k:
        raise InsufficientDataError(f"{m} points cannot form {k} clusters")
    rng = np.random.default_rng(seed)
    centers = _kmeanspp_init(X, k, rng)
    labels, dist = _assign(X, centers)
    for _ in range(max_iter):
        new_centers = centers.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                new_centers[j] = X[members].mean(axis=0)
            else:
                far = int(np.argmax(dist))
                new_centers[j] = X[far]
                dist[far] = 0.0
        new_labels, dist = _assign(X, new_centers)
        converged = np.array_equal(new_labels, labels) and np.array_equal(new_centers, centers)
        centers, labels = new_centers, new_labels
        if converged:
            break
    return centers, labels


def cluster(X, n_clusters: int, seed: int = 0, floor: Optional[np.ndarray] = None) -> list[ClusterSeed]:
    """Partition ``X`` into ``n_clusters`` groups and describe each by center and spread.

    The spread is the per-feature standard deviation of a cluster's members,
    clamped below by ``floor`` (default: :func:`spread_floor` of ``X``).
    """
    X = np.asarray(X, dtype=float)
    centers, labels = kmeans(X, n_clusters, seed)
    floor = spread_floor(X) if floor is None else np.broadcast_to(np.asarray(floor, dtype=float), (X.shape[1],))
    seeds = []
    for j in range(n_clusters):
        members = X[labels == j]
        spread = members.std(axis=0) if len(members) else np.zeros(X.shape[1])
        seeds.append(ClusterSeed(centers[j].copy(), np.maximum(spread, floor)))
    return seeds


def seed_model(seeds: Sequence[ClusterSeed], n_inputs: int, normalization: Optional[Normalization] = None) -> AnfisModel:
    """One rule per seed; premises from the seed, consequents zero."""
    if not seeds:
        raise InvalidArgumentError("at least one cluster seed is required")
    centers = np.array([s.center for s in seeds], dtype=float)
    widths = np.array([s.spread for s in seeds], dtype=float)
    if centers.shape != (len(seeds), n_inputs):
        raise ShapeError(f"seed centers have shape {centers.shape}, expected {(len(seeds), n_inputs)}")
    consequents = np.zeros((len(seeds), n_inputs + 1))
    return AnfisModel(centers, widths, consequents, normalization)


def check_coverage(model: AnfisModel, Z: np.ndarray) -> bool:
    """Warn if some z-scored row has no rule with strength above ``exp(-8 * n_inputs)``."""
    best = log_firing_strengths(model, Z).max(axis=1)
    uncovered = int(np.sum(best <= -8.0 * model.n_inputs))
    if uncovered:
        warnings.warn(f"{uncovered} training point(s) are not covered by any rule", CoverageWarning, stacklevel=2)
    return uncovered == 0
