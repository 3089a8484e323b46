"""Permutation-minimized recovery errors for memberships and hard labels.

Community indices carry no meaning across two labelings, so both metrics
minimize over all k! relabelings: exhaustively for small k, via the
linear assignment solver above that. Both paths score the chosen relabeling
with the same expression, so they agree exactly whenever the optimum is
unique.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ValidationError

__all__ = ["ErrorReport", "mixed_hamming", "hamming_error", "best_label_permutation"]

#: largest k for which the default path enumerates all permutations
BRUTE_FORCE_MAX_K = 8

_SIMPLEX_TOL = 1e-6


@dataclass(frozen=True)
class ErrorReport:
    """Recovery errors under the best community relabeling.

    best_permutation maps estimated community index a (0-based) to the
    matched ground-truth community best_permutation[a]. hamming is only
    present when hard ground-truth labels were scored.
    """

    mixed_hamming: float | None
    hamming: float | None
    best_permutation: tuple[int, ...]


def _min_cost_permutation(cost: np.ndarray, method: str) -> tuple[int, ...]:
    k = cost.shape[0]
    if method == "auto":
        method = "brute" if k <= BRUTE_FORCE_MAX_K else "assignment"
    if method == "brute":
        best_total = np.inf
        best_perm = None
        index = np.arange(k)
        for perm in itertools.permutations(range(k)):
            total = cost[index, perm].sum()
            if total < best_total:
                best_total = total
                best_perm = perm
        return best_perm
    if method == "assignment":
        _, cols = linear_sum_assignment(cost)
        return tuple(int(c) for c in cols)
    raise ValidationError(f"unknown method {method!r}")


def mixed_hamming(estimated: np.ndarray, truth: np.ndarray, method: str = "auto") -> ErrorReport:
    """Mean L1 row distance between two membership matrices, minimized over
    column permutations. Lies in [0, 2]."""
    estimated = np.asarray(estimated, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if estimated.ndim != 2 or estimated.shape != truth.shape:
        raise ValidationError(
            f"membership shapes differ: {estimated.shape} vs {truth.shape}"
        )
    n, k = estimated.shape
    for name, mat in (("estimated", estimated), ("truth", truth)):
        if np.any(mat < -_SIMPLEX_TOL) or np.any(np.abs(mat.sum(axis=1) - 1.0) > _SIMPLEX_TOL):
            raise ValidationError(f"{name} memberships are not row-stochastic")
    # cost[a, b] = total L1 gap between estimated column a and truth column b
    cost = np.abs(estimated[:, :, None] - truth[:, None, :]).sum(axis=0)
    perm = _min_cost_permutation(cost, method)
    value = float(cost[np.arange(k), perm].sum() / n)
    return ErrorReport(mixed_hamming=value, hamming=None, best_permutation=perm)


def _check_labels(labels: np.ndarray, k: int, name: str) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ValidationError(f"{name} labels must be 1-d")
    if not np.issubdtype(labels.dtype, np.integer):
        raise ValidationError(f"{name} labels must be integers")
    if labels.size == 0 or labels.min() < 1 or labels.max() > k:
        raise ValidationError(f"{name} labels must lie in 1..{k}")
    return labels.astype(np.int64)


def best_label_permutation(
    estimated: np.ndarray, truth: np.ndarray, k: int, method: str = "auto"
) -> tuple[tuple[int, ...], int]:
    """Best relabeling of estimated onto truth plus its misclassified count."""
    if k < 1:
        raise ValidationError(f"k must be positive, got {k}")
    estimated = _check_labels(estimated, k, "estimated")
    truth = _check_labels(truth, k, "truth")
    if estimated.shape != truth.shape:
        raise ValidationError("label vectors must have equal length")
    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (estimated - 1, truth - 1), 1)
    perm = _min_cost_permutation(-confusion.astype(np.float64), method)
    matched = int(confusion[np.arange(k), perm].sum())
    return perm, estimated.shape[0] - matched


def hamming_error(estimated: np.ndarray, truth: np.ndarray, k: int, method: str = "auto") -> float:
    """Fraction of nodes misclassified under the best relabeling, in [0, 1]."""
    _, mistakes = best_label_permutation(estimated, truth, k, method)
    return mistakes / np.asarray(estimated).shape[0]
