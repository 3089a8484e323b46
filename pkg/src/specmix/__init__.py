"""Spectral mixed membership community detection.

The pipeline embeds nodes via eigenvector ratios of a regularized graph
Laplacian, finds community vertices by clustering the embedded rows, and
reconstructs a membership probability row per node. A degree-corrected
mixed membership generator and a permutation-minimized error metric support
synthetic benchmarking end to end.
"""
from .dcmm import (
    EXPERIMENTS,
    DcmmParams,
    ExperimentScenario,
    build_scenario,
    expected_adjacency,
    experiment_grid,
    run_experiment,
    sample_adjacency,
)
from .errors import (
    DegenerateSpectrumError,
    EdgeListParseError,
    NumericError,
    ReconstructionError,
    SpecmixError,
    ValidationError,
)
from .graph import (
    DegreeVector,
    Graph,
    RegularizedLaplacian,
    default_tau,
    degrees,
    largest_component,
    load_edge_list,
    regularized_laplacian,
)
from .membership import (
    AugmentedSystem,
    DetectionResult,
    augment,
    detect,
    hard_labels,
    normalize,
    project,
    rectify,
)
from .metrics import ErrorReport, best_label_permutation, hamming_error, mixed_hamming
from .spectral import (
    EigenPairs,
    RatioMatrix,
    default_ratio_threshold,
    eigen_ratio_matrix,
    leading_eigenpairs,
    select_embedding_dim,
    signal_weakness,
    threshold_ratios,
)
from .vertex_hunting import ClusterCenters, kmeans, kmedians

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Graph",
    "DegreeVector",
    "RegularizedLaplacian",
    "load_edge_list",
    "degrees",
    "default_tau",
    "regularized_laplacian",
    "largest_component",
    "EigenPairs",
    "RatioMatrix",
    "leading_eigenpairs",
    "signal_weakness",
    "select_embedding_dim",
    "eigen_ratio_matrix",
    "threshold_ratios",
    "default_ratio_threshold",
    "ClusterCenters",
    "kmeans",
    "kmedians",
    "AugmentedSystem",
    "DetectionResult",
    "augment",
    "project",
    "rectify",
    "normalize",
    "hard_labels",
    "detect",
    "DcmmParams",
    "ExperimentScenario",
    "EXPERIMENTS",
    "expected_adjacency",
    "sample_adjacency",
    "build_scenario",
    "experiment_grid",
    "run_experiment",
    "ErrorReport",
    "mixed_hamming",
    "hamming_error",
    "best_label_permutation",
    "SpecmixError",
    "ValidationError",
    "EdgeListParseError",
    "DegenerateSpectrumError",
    "ReconstructionError",
    "NumericError",
]
