"""Spectral embedding: leading eigenpairs and the entrywise eigenvector ratios.

The embedding coordinates are ratios of eigenvalue-scaled eigenvectors against
the leading one, clamped to a slowly growing band so a handful of nodes with
near-zero leading coordinates cannot dominate the clustering step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, NumericError, ValidationError
from .graph import RegularizedLaplacian

__all__ = [
    "EigenPairs",
    "RatioMatrix",
    "leading_eigenpairs",
    "signal_weakness",
    "select_embedding_dim",
    "eigen_ratio_matrix",
    "threshold_ratios",
    "default_ratio_threshold",
]

#: denominators smaller than this in absolute value are replaced (sign kept,
#: zero counted as positive) before dividing
RATIO_GUARD = 1e-12


@dataclass(frozen=True)
class EigenPairs:
    """Leading eigenpairs of a symmetric matrix, ordered by |eigenvalue|.

    Columns of vectors have unit norm with a fixed sign: the coordinate of
    largest absolute value is nonnegative (ties broken by smallest index).
    scaled_vectors = vectors * values, column by column.
    """

    values: np.ndarray
    vectors: np.ndarray
    scaled_vectors: np.ndarray

    def __post_init__(self):
        for arr in (self.values, self.vectors, self.scaled_vectors):
            arr.setflags(write=False)

    @property
    def count(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class RatioMatrix:
    """Entrywise ratio embedding with n rows and num_vectors - 1 columns."""

    entries: np.ndarray
    num_vectors: int
    thresholded: bool = False
    threshold: float | None = None

    def __post_init__(self):
        self.entries.setflags(write=False)


def leading_eigenpairs(lap: RegularizedLaplacian, count: int) -> EigenPairs:
    """Eigenpairs of largest absolute eigenvalue, deterministically ordered.

    Uses the dense symmetric solver; the magnitude sort is stable, so exact
    ties keep the solver's ascending-eigenvalue order.
    """
    matrix = lap.matrix
    n = matrix.shape[0]
    if count < 1 or count > n:
        raise ValidationError(f"count must be in [1, {n}], got {count}")
    try:
        values, vectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise NumericError("eigensolver returned non-finite output")
    # descending-value order first, so exact magnitude ties list the positive
    # eigenvalue before its negative twin regardless of solver conventions
    values = values[::-1]
    vectors = vectors[:, ::-1]
    order = np.argsort(-np.abs(values), kind="stable")[:count]
    values = values[order].copy()
    vectors = vectors[:, order].copy()
    for col in range(count):
        anchor = int(np.argmax(np.abs(vectors[:, col])))
        if vectors[anchor, col] < 0:
            vectors[:, col] = -vectors[:, col]
    scaled = vectors * values
    return EigenPairs(values=values, vectors=vectors, scaled_vectors=scaled)


def signal_weakness(eig: EigenPairs, k: int) -> float:
    """Relative eigenvalue drop 1 - |lambda_(k+1)| / |lambda_k|."""
    if eig.count < k + 1:
        raise ValidationError(f"need {k + 1} eigenpairs, have {eig.count}")
    lead, trail = eig.values[k - 1], eig.values[k]
    if lead == 0.0:
        raise DegenerateSpectrumError(f"eigenvalue {k} is exactly zero")
    return 1.0 - abs(trail) / abs(lead)


def select_embedding_dim(eig: EigenPairs, k: int, weak_signal_threshold: float = 0.1) -> int:
    """Pick how many eigenvectors feed the embedding: k, or k+1 when weak.

    The extra eigenvector is kept when the relative drop between the k-th and
    (k+1)-th eigenvalue magnitudes is at most the threshold, meaning the
    trailing eigenvalue is nearly as large and the signal may extend past k.
    """
    if k < 1:
        raise ValidationError(f"k must be positive, got {k}")
    t = float(weak_signal_threshold)
    if not np.isfinite(t) or t < 0:
        raise ValidationError(f"weak_signal_threshold must be >= 0, got {t}")
    return k + 1 if signal_weakness(eig, k) <= t else k


def eigen_ratio_matrix(eig: EigenPairs, num_vectors: int, guard: float = RATIO_GUARD) -> RatioMatrix:
    """Divide scaled eigenvectors 2..num_vectors entrywise by the leading one.

    Denominators within guard of zero are replaced by +-guard, keeping the
    sign (an exactly zero coordinate counts as positive).
    """
    if num_vectors < 2 or num_vectors > eig.count:
        raise ValidationError(
            f"num_vectors must be in [2, {eig.count}], got {num_vectors}"
        )
    if guard <= 0:
        raise ValidationError(f"guard must be positive, got {guard}")
    lead = eig.scaled_vectors[:, 0]
    safe = np.where(np.abs(lead) < guard, np.where(lead < 0, -guard, guard), lead)
    entries = eig.scaled_vectors[:, 1:num_vectors] / safe[:, None]
    return RatioMatrix(entries=entries, num_vectors=num_vectors)


def default_ratio_threshold(n: int) -> float:
    """Default clamp half-width for n nodes: log(n)."""
    if n < 2:
        raise ValidationError(f"need at least 2 nodes, got {n}")
    return math.log(n)


def threshold_ratios(ratios: RatioMatrix, limit: float) -> RatioMatrix:
    """Clamp every ratio entry to [-limit, limit]. Idempotent."""
    limit = float(limit)
    if not np.isfinite(limit) or limit <= 0:
        raise ValidationError(f"threshold must be positive and finite, got {limit}")
    entries = np.clip(ratios.entries, -limit, limit)
    return RatioMatrix(
        entries=entries,
        num_vectors=ratios.num_vectors,
        thresholded=True,
        threshold=limit,
    )
