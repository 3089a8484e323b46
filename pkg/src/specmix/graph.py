"""Undirected graphs: edge-list loading, degrees, and the regularized Laplacian.

Graphs are simple (no self loops, no multi edges) and undirected. Nodes are
re-indexed to 0..n-1 internally; the original ids are kept so output files can
refer to them.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import EdgeListParseError, ValidationError

__all__ = [
    "Graph",
    "DegreeVector",
    "RegularizedLaplacian",
    "load_edge_list",
    "degrees",
    "default_tau",
    "regularized_laplacian",
    "largest_component",
]

_COMMENT_PREFIXES = ("#", "%")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes 0..n-1.

    edges holds one row (i, j) with i < j per undirected edge, deduplicated
    and lexicographically sorted. labels maps internal index -> original id;
    when None the original ids are the internal indices themselves.
    """

    n: int
    edges: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("graph needs at least one node")
        edges = np.asarray(self.edges, dtype=np.int64)
        if edges.size == 0:
            edges = edges.reshape(0, 2)
        if edges.ndim != 2 or edges.shape[1] != 2:
            raise ValidationError("edges must be an (m, 2) array")
        if edges.size and (edges.min() < 0 or edges.max() >= self.n):
            raise ValidationError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ValidationError("self loops are not allowed")
        # canonical form: i < j, sorted, unique
        edges = np.sort(edges, axis=1)
        edges = np.unique(edges, axis=0)
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (self.n,):
                raise ValidationError("labels must have one entry per node")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return self.edges.shape[0]

    def node_labels(self) -> np.ndarray:
        if self.labels is not None:
            return self.labels
        return np.arange(self.n, dtype=np.int64)

    def adjacency(self) -> np.ndarray:
        """Dense symmetric 0/1 adjacency matrix."""
        a = np.zeros((self.n, self.n))
        i, j = self.edges[:, 0], self.edges[:, 1]
        a[i, j] = 1.0
        a[j, i] = 1.0
        return a


@dataclass(frozen=True)
class DegreeVector:
    values: np.ndarray
    d_max: int
    d_min: int

    def __post_init__(self):
        self.values.setflags(write=False)


@dataclass(frozen=True)
class RegularizedLaplacian:
    """Symmetric regularized graph Laplacian together with the tau used."""

    matrix: np.ndarray
    tau: float

    def __post_init__(self):
        self.matrix.setflags(write=False)


def load_edge_list(source, indexing: str = "zero-based", num_nodes: int | None = None) -> Graph:
    """Parse a whitespace-delimited edge list into a Graph.

    source may be a path or an open text stream. Lines starting with '#' or
    '%' and blank lines are skipped. Each remaining line must hold exactly two
    integer node ids. With indexing="one-based" ids are shifted down by one.
    num_nodes overrides the inferred node count (max id + 1) so trailing
    isolated nodes can be represented.
    """
    if indexing not in ("zero-based", "one-based"):
        raise ValidationError(f"unknown indexing {indexing!r}")
    offset = 1 if indexing == "one-based" else 0

    if hasattr(source, "read"):
        stream = source
        close = False
    else:
        stream = io.open(Path(source), "r", encoding="utf-8")
        close = True
    pairs = []
    try:
        for line_number, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line.startswith(_COMMENT_PREFIXES):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise EdgeListParseError(
                    line_number, f"expected two node ids, got {len(tokens)} tokens"
                )
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise EdgeListParseError(line_number, f"non-integer node id in {line!r}") from None
            u -= offset
            v -= offset
            if u < 0 or v < 0:
                raise EdgeListParseError(
                    line_number, f"node id below {offset} with {indexing} indexing"
                )
            if u == v:
                raise EdgeListParseError(line_number, f"self loop at node {u + offset}")
            pairs.append((u, v) if u < v else (v, u))
    finally:
        if close:
            stream.close()

    if not pairs:
        raise ValidationError("edge list contains no edges")
    edges = np.array(sorted(set(pairs)), dtype=np.int64)
    inferred = int(edges.max()) + 1
    n = inferred if num_nodes is None else int(num_nodes)
    if n < inferred:
        raise ValidationError(f"num_nodes={n} but edge list references node {inferred - 1 + offset}")
    labels = np.arange(n, dtype=np.int64) + offset
    return Graph(n=n, edges=edges, labels=labels)


def degrees(g: Graph) -> DegreeVector:
    d = np.bincount(g.edges.ravel(), minlength=g.n).astype(np.int64)
    return DegreeVector(values=d, d_max=int(d.max()), d_min=int(d.min()))


def default_tau(deg: DegreeVector) -> float:
    """Regularizer used when none is supplied: 0.1 * (d_max + d_min) / 2."""
    return 0.1 * (deg.d_max + deg.d_min) / 2.0


def regularized_laplacian(g: Graph, tau: float | None = None) -> RegularizedLaplacian:
    """Build D_tau^(-1/2) A D_tau^(-1/2) with D_tau = D + tau I.

    tau=None picks the default based on the degree extremes. tau must be
    nonnegative, and tau=0 requires every node to have positive degree.
    """
    deg = degrees(g)
    if tau is None:
        tau = default_tau(deg)
    tau = float(tau)
    if not np.isfinite(tau) or tau < 0:
        raise ValidationError(f"tau must be a nonnegative number, got {tau}")
    if tau == 0 and deg.d_min == 0:
        node = int(np.argmin(deg.values))
        label = int(g.node_labels()[node])
        raise ValidationError(f"tau=0 with isolated node {label}: D_tau is singular")
    scale = 1.0 / np.sqrt(deg.values + tau)
    lap = g.adjacency() * np.outer(scale, scale)
    return RegularizedLaplacian(matrix=lap, tau=tau)


def largest_component(g: Graph) -> Graph:
    """Restrict to the largest connected component, re-indexing nodes.

    Nodes keep their relative order; original labels follow them. Ties
    between equally sized components go to the one containing the smallest
    internal index.
    """
    i, j = g.edges[:, 0], g.edges[:, 1]
    data = np.ones(g.m)
    adj = sp.coo_matrix((data, (i, j)), shape=(g.n, g.n))
    n_comp, member = connected_components(adj, directed=False)
    if n_comp <= 1:
        return g
    sizes = np.bincount(member, minlength=n_comp)
    keep = int(np.argmax(sizes))
    mask = member == keep
    new_index = -np.ones(g.n, dtype=np.int64)
    new_index[mask] = np.arange(int(mask.sum()))
    kept_edges = g.edges[mask[g.edges[:, 0]] & mask[g.edges[:, 1]]]
    edges = new_index[kept_edges]
    labels = g.node_labels()[mask]
    return Graph(n=int(mask.sum()), edges=edges, labels=labels)
