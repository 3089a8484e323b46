"""Membership reconstruction from embedding rows and cluster centers.

Each node's thresholded ratio row is written as a combination of the fitted
centers by solving the normal equations of a least-squares fit in augmented
(ones-prefixed) coordinates. The resulting weights are cleaned up to the
probability simplex and normalized into membership rows.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import vertex_hunting
from .errors import ReconstructionError, ValidationError
from .graph import Graph, regularized_laplacian
from .spectral import (
    RatioMatrix,
    default_ratio_threshold,
    eigen_ratio_matrix,
    leading_eigenpairs,
    select_embedding_dim,
    signal_weakness,
    threshold_ratios,
)
from .vertex_hunting import ClusterCenters

__all__ = [
    "AugmentedSystem",
    "DetectionResult",
    "augment",
    "project",
    "rectify",
    "normalize",
    "hard_labels",
    "detect",
]

#: reciprocal condition number below which the center system is rejected
RCOND_MIN = 1e-12


@dataclass(frozen=True)
class AugmentedSystem:
    """Ones-prefixed centers and embedding rows plus the center Gram matrix."""

    vertices: np.ndarray
    rows: np.ndarray
    gram: np.ndarray

    def __post_init__(self):
        for arr in (self.vertices, self.rows, self.gram):
            arr.setflags(write=False)


def augment(ratios: RatioMatrix, centers: ClusterCenters | np.ndarray) -> AugmentedSystem:
    """Prefix a constant-1 coordinate to centers and rows; form the Gram matrix."""
    if isinstance(centers, ClusterCenters):
        centers = centers.centers
    centers = np.asarray(centers, dtype=np.float64)
    entries = ratios.entries
    if centers.ndim != 2 or centers.shape[1] != entries.shape[1]:
        raise ValidationError(
            f"centers have width {centers.shape[-1] if centers.ndim == 2 else '?'}, "
            f"embedding rows have width {entries.shape[1]}"
        )
    if entries.shape[1] < 1:
        raise ValidationError("embedding must have at least one ratio column")
    if np.unique(centers, axis=0).shape[0] < centers.shape[0]:
        raise ReconstructionError(
            "identical cluster centers; re-run vertex hunting with a different "
            "seed or more restarts"
        )
    vertices = np.hstack([np.ones((centers.shape[0], 1)), centers])
    rows = np.hstack([np.ones((entries.shape[0], 1)), entries])
    gram = vertices @ vertices.T
    return AugmentedSystem(vertices=vertices, rows=rows, gram=gram)


def project(system: AugmentedSystem) -> np.ndarray:
    """Least-squares weights of each row over the augmented centers.

    Solves the normal equations instead of inverting the Gram matrix. A Gram
    matrix with reciprocal condition number below RCOND_MIN is rejected.
    """
    gram = system.gram
    singular = np.linalg.svd(gram, compute_uv=False)
    if not np.all(np.isfinite(singular)) or singular[0] == 0.0:
        raise ReconstructionError("center Gram matrix is not usable")
    if singular[-1] / singular[0] < RCOND_MIN:
        raise ReconstructionError(
            "center Gram matrix is numerically singular (rcond < 1e-12); "
            "try a different vertex hunting seed or more restarts"
        )
    return np.linalg.solve(gram, system.vertices @ system.rows.T).T


def rectify(weights: np.ndarray) -> tuple[np.ndarray, int]:
    """Push raw projection weights onto the nonnegative orthant.

    Rows that are negative in every entry are negated before clamping at
    zero. Rows left all-zero get a uniform fallback; the count of such rows
    is returned alongside the matrix.
    """
    weights = np.array(weights, dtype=np.float64)
    if weights.ndim != 2 or weights.shape[1] < 1:
        raise ValidationError("weights must be a 2-d array")
    all_negative = np.all(weights < 0, axis=1)
    weights[all_negative] *= -1.0
    np.maximum(weights, 0.0, out=weights)
    dead = ~np.any(weights > 0, axis=1)
    fallback_rows = int(dead.sum())
    if fallback_rows:
        weights[dead] = 1.0 / weights.shape[1]
    return weights, fallback_rows


def normalize(weights: np.ndarray) -> np.ndarray:
    """Scale each nonnegative row to sum to one."""
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(weights < 0):
        raise ValidationError("normalize expects nonnegative entries")
    sums = weights.sum(axis=1)
    if np.any(sums <= 0):
        raise ValidationError("normalize expects every row to have positive sum")
    return weights / sums[:, None]


def hard_labels(memberships: np.ndarray) -> np.ndarray:
    """One-based argmax community per row; ties go to the smallest index."""
    memberships = np.asarray(memberships)
    if memberships.ndim != 2:
        raise ValidationError("memberships must be a 2-d array")
    return np.argmax(memberships, axis=1).astype(np.int64) + 1


@dataclass(frozen=True)
class DetectionResult:
    """Estimated memberships plus the run's diagnostics."""

    memberships: np.ndarray
    labels: np.ndarray
    tau: float
    num_vectors: int
    eigenvalues: np.ndarray
    weak_signal: float
    ratio_threshold: float
    vh_objective: float
    fallback_rows: int

    def __post_init__(self):
        for arr in (self.memberships, self.labels, self.eigenvalues):
            arr.setflags(write=False)

    @property
    def k(self) -> int:
        return self.memberships.shape[1]


def detect(
    g: Graph,
    k: int,
    *,
    tau: float | None = None,
    weak_signal_threshold: float = 0.1,
    ratio_threshold: float | None = None,
    method: str = "kmeans",
    seed: int = 0,
    restarts: int = 10,
) -> DetectionResult:
    """Estimate mixed membership over k communities for every node of g.

    Pipeline: regularized Laplacian -> leading k+1 eigenpairs -> keep k or
    k+1 of them depending on the trailing eigenvalue strength -> entrywise
    eigenvector ratios, clamped to +-ratio_threshold (default log n) ->
    cluster rows into k centers (kmeans or kmedians) -> express rows over the
    centers, rectify, and row-normalize.

    seed and restarts drive the clustering step only; everything else is
    deterministic in the input graph.
    """
    if k < 2:
        raise ValidationError(f"k must be at least 2, got {k}")
    if k + 1 > g.n:
        raise ValidationError(f"graph has {g.n} nodes, too few for k={k}")
    if method not in ("kmeans", "kmedians"):
        raise ValidationError(f"unknown vertex hunting method {method!r}")

    lap = regularized_laplacian(g, tau)
    eig = leading_eigenpairs(lap, k + 1)
    weakness = signal_weakness(eig, k)
    num_vectors = select_embedding_dim(eig, k, weak_signal_threshold)
    limit = default_ratio_threshold(g.n) if ratio_threshold is None else float(ratio_threshold)
    ratios = threshold_ratios(eigen_ratio_matrix(eig, num_vectors), limit)

    hunt = vertex_hunting.kmeans if method == "kmeans" else vertex_hunting.kmedians
    centers = hunt(ratios.entries, k, seed=seed, restarts=restarts)

    weights = project(augment(ratios, centers))
    weights, fallback_rows = rectify(weights)
    memberships = normalize(weights)
    return DetectionResult(
        memberships=memberships,
        labels=hard_labels(memberships),
        tau=lap.tau,
        num_vectors=num_vectors,
        eigenvalues=eig.values,
        weak_signal=weakness,
        ratio_threshold=limit,
        vh_objective=centers.objective,
        fallback_rows=fallback_rows,
    )
