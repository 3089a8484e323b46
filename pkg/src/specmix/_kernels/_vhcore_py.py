"""Numpy fallback for the compiled Lloyd kernels.

Same contract as _vhcore: nearest center with smallest-index tie-breaking,
per-cluster sums accumulated in row order.
"""
from __future__ import annotations

import numpy as np


def assign_points(rows: np.ndarray, centers: np.ndarray, l1: bool):
    diff = rows[:, None, :] - centers[None, :, :]
    if l1:
        dist = np.abs(diff).sum(axis=2)
    else:
        dist = np.square(diff).sum(axis=2)
    labels = dist.argmin(axis=1).astype(np.int64)
    best = dist[np.arange(rows.shape[0]), labels]
    if not l1:
        best = np.sqrt(best)
    return labels, best


def accumulate_clusters(rows: np.ndarray, labels: np.ndarray, k: int):
    d = rows.shape[1]
    sums = np.zeros((k, d))
    np.add.at(sums, labels, rows)
    counts = np.bincount(labels, minlength=k).astype(np.int64)
    return sums, counts
