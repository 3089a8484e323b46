"""Shared builders for synthetic test instances."""
from __future__ import annotations

import numpy as np

from specmix import DcmmParams, Graph


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    """Erdos-Renyi style graph; guarantees at least one edge."""
    draws = rng.random((n, n))
    hits = np.triu(draws < p, k=1)
    if not hits.any():
        hits[0, 1] = True
    return Graph(n=n, edges=np.argwhere(hits))


def planted_block_params(
    per_block: int,
    k: int,
    within: float = 0.9,
    between: float = 0.05,
    theta: float = 0.9,
) -> DcmmParams:
    """All-pure equal blocks with constant degree weights."""
    n = per_block * k
    pi = np.zeros((n, k))
    for block in range(k):
        pi[block * per_block : (block + 1) * per_block, block] = 1.0
    mixing = np.full((k, k), between)
    np.fill_diagonal(mixing, within)
    return DcmmParams(memberships=pi, mixing=mixing, degree_weights=np.full(n, theta))


def random_dcmm_params(rng: np.random.Generator, n: int, k: int) -> DcmmParams:
    """Random mixed-membership model with a few guaranteed pure nodes per
    community so the simplex vertices stay identifiable."""
    pi = np.zeros((n, k))
    for i in range(n):
        if i < 2 * k:
            pi[i, i % k] = 1.0
        elif rng.random() < 0.6:
            pi[i, rng.integers(k)] = 1.0
        else:
            pi[i] = rng.dirichlet(np.ones(k))
    off = rng.uniform(0.03, 0.12)
    mixing = np.full((k, k), off)
    np.fill_diagonal(mixing, rng.uniform(0.6, 0.9, size=k))
    mixing = (mixing + mixing.T) / 2
    theta = rng.uniform(0.35, 0.95, size=n)
    return DcmmParams(memberships=pi, mixing=mixing, degree_weights=theta)
