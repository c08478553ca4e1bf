"""Auto-weighted low-rank representation graphs with spectral clustering.

The package learns a similarity graph by representing every sample as a
combination of the others under low-rank, sparse-error, block-diagonal
and adaptive feature-weight regularization, then clusters the graph
with normalized cuts and scores the labels against ground truth.
"""

from .data import LabeledDataset, load_csv, make_blobs, make_spiral, normalize
from .graphs import (
    block_diag_regularizer,
    da_matrix,
    dy_matrix,
    knn_init_graph,
    laplacian,
    symmetrize,
)
from .metrics import (
    MetricsReport,
    clustering_accuracy,
    evaluate,
    hungarian,
    pairwise_fscore,
)
from .prox import smallest_eigvecs, soft_threshold, svt
from .solver import Hyperparams, NumericalFailure, SolverResult, objective, solve
from .spectral import kmeans, ncut

__version__ = "0.1.0"

__all__ = [
    "LabeledDataset",
    "load_csv",
    "make_blobs",
    "make_spiral",
    "normalize",
    "block_diag_regularizer",
    "da_matrix",
    "dy_matrix",
    "knn_init_graph",
    "laplacian",
    "symmetrize",
    "MetricsReport",
    "clustering_accuracy",
    "evaluate",
    "hungarian",
    "pairwise_fscore",
    "smallest_eigvecs",
    "soft_threshold",
    "svt",
    "Hyperparams",
    "NumericalFailure",
    "SolverResult",
    "objective",
    "solve",
    "kmeans",
    "ncut",
    "__version__",
]
