"""Cluster-center estimation on the ratio embedding rows.

Both entry points run Lloyd iterations from greedy distance-weighted seeds:
kmeans with Euclidean geometry and coordinate means, kmedians with L1
geometry and coordinate medians. All tie-breaking is deterministic so a
(seed, restarts) pair fully determines the output. Restart r draws from its
own stream keyed by (seed, r); adding restarts never changes the streams of
the earlier ones, so the best objective is non-increasing in restarts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import BACKEND, accumulate_clusters, assign_points
from .errors import ValidationError

__all__ = ["ClusterCenters", "kmeans", "kmedians", "BACKEND"]

_MAX_ITER = 300


@dataclass(frozen=True)
class ClusterCenters:
    """Fitted centers with per-row assignments and the mean-distance cost."""

    centers: np.ndarray
    assignments: np.ndarray
    objective: float

    def __post_init__(self):
        self.centers.setflags(write=False)
        self.assignments.setflags(write=False)

    @property
    def k(self) -> int:
        return self.centers.shape[0]


def kmeans(rows: np.ndarray, k: int, seed: int = 0, restarts: int = 10) -> ClusterCenters:
    """Best-of-restarts Lloyd K-means; ties go to the earliest restart."""
    return _lloyd(rows, k, seed, restarts, l1=False)


def kmedians(rows: np.ndarray, k: int, seed: int = 0, restarts: int = 10) -> ClusterCenters:
    """K-medians twin of kmeans: L1 distances, coordinate-wise medians."""
    return _lloyd(rows, k, seed, restarts, l1=True)


def _lloyd(rows, k, seed, restarts, l1):
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] == 0 or rows.shape[1] == 0:
        raise ValidationError("rows must be a nonempty 2-d array")
    if not np.all(np.isfinite(rows)):
        raise ValidationError("rows contain non-finite values")
    if k < 1:
        raise ValidationError(f"k must be at least 1, got {k}")
    if restarts < 1:
        raise ValidationError(f"restarts must be at least 1, got {restarts}")
    if seed < 0:
        raise ValidationError(f"seed must be nonnegative, got {seed}")
    distinct = np.unique(rows, axis=0).shape[0]
    if k > distinct:
        raise ValidationError(f"k={k} exceeds the {distinct} distinct rows")

    best = None
    for restart in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence([seed, restart]))
        centers = _seed_centers(rows, k, rng, l1)
        labels, dists = assign_points(rows, centers, l1)
        for _ in range(_MAX_ITER):
            centers = _update_centers(rows, labels, k, dists, l1)
            new_labels, dists = assign_points(rows, centers, l1)
            converged = bool(np.array_equal(new_labels, labels))
            labels = new_labels
            if converged:
                break
        objective = float(np.mean(dists))
        if best is None or objective < best.objective:
            best = ClusterCenters(centers=centers, assignments=labels, objective=objective)
    return best


def _point_dist(rows, center, l1):
    diff = rows - center
    if l1:
        return np.abs(diff).sum(axis=1)
    return np.square(diff).sum(axis=1)


def _seed_centers(rows, k, rng, l1):
    """Greedy seeding: sample each next center with probability proportional
    to its distance from the chosen set (squared L2 for kmeans, L1 for
    kmedians). Rows equal to a chosen center carry zero weight, so the k
    seeds are distinct whenever k distinct rows exist."""
    n = rows.shape[0]
    centers = np.empty((k, rows.shape[1]))
    centers[0] = rows[int(rng.integers(n))]
    weight = _point_dist(rows, centers[0], l1)
    for c in range(1, k):
        total = weight.sum()
        idx = int(rng.choice(n, p=weight / total))
        centers[c] = rows[idx]
        np.minimum(weight, _point_dist(rows, centers[c], l1), out=weight)
    return centers


def _update_centers(rows, labels, k, dists, l1):
    if l1:
        counts = np.bincount(labels, minlength=k)
        centers = np.zeros((k, rows.shape[1]))
        for c in range(k):
            if counts[c]:
                centers[c] = np.median(rows[labels == c], axis=0)
    else:
        sums, counts = accumulate_clusters(rows, labels, k)
        centers = np.zeros_like(sums)
        nonempty = counts > 0
        centers[nonempty] = sums[nonempty] / counts[nonempty, None]
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        # re-seed each empty cluster at the row farthest from its center
        avail = np.array(dists, dtype=np.float64)
        for c in empty:
            pick = int(np.argmax(avail))
            centers[c] = rows[pick]
            avail[pick] = -np.inf
    return centers
