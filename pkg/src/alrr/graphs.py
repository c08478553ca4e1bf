"""Graph algebra shared by the solver and the clustering pipeline.

Conventions: data matrices are d x n with samples as columns; similarity
graphs are n x n with row i describing sample i's affinities.
"""

import numpy as np

__all__ = [
    "knn_init_graph",
    "laplacian",
    "symmetrize",
    "block_diag_regularizer",
    "dy_matrix",
    "da_matrix",
]


def _pairwise_sq_dists(V):
    """Squared Euclidean distances between the columns of V."""
    g = V.T @ V
    sq = np.diag(g)
    d2 = sq[:, None] + sq[None, :] - 2.0 * g
    np.fill_diagonal(d2, 0.0)
    return np.maximum(d2, 0.0)


def knn_init_graph(X, k_nn):
    """Row-stochastic k-nearest-neighbor graph with heat-kernel weights.

    Row i carries weights exp(-d_ij^2 / (2 sigma^2)) on the k_nn nearest
    neighbors of sample i (Euclidean distance, ties broken by lower
    index), then is rescaled to sum to 1. sigma is the median pairwise
    distance; if it degenerates to 0 the selected neighbors get uniform
    weight. The diagonal is always 0.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a d x n matrix")
    n = X.shape[1]
    if not 1 <= k_nn < n:
        raise ValueError(f"k_nn must be in [1, n-1], got {k_nn} with n={n}")
    dist = np.sqrt(_pairwise_sq_dists(X))
    sigma = float(np.median(dist[np.triu_indices(n, 1)]))
    np.fill_diagonal(dist, np.inf)
    # stable argsort keeps the lower index first among equal distances
    neigh = np.argsort(dist, axis=1, kind="stable")[:, :k_nn]
    rows = np.repeat(np.arange(n), k_nn)
    cols = neigh.ravel()
    Z = np.zeros((n, n))
    if sigma > 0.0:
        Z[rows, cols] = np.exp(-dist[rows, cols] ** 2 / (2.0 * sigma**2))
    else:
        Z[rows, cols] = 1.0
    row_sums = Z.sum(axis=1)
    dead = row_sums <= 0.0  # all selected weights underflowed
    if np.any(dead):
        Z[np.repeat(np.where(dead)[0], k_nn), neigh[dead].ravel()] = 1.0
        row_sums = Z.sum(axis=1)
    return Z / row_sums[:, None]


def laplacian(S):
    """Graph Laplacian Diag((S1 + S^T 1)/2) - (S + S^T)/2 of a square S."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("S must be square")
    sym = 0.5 * (S + S.T)
    return np.diag(sym.sum(axis=1)) - sym


def symmetrize(Z):
    """Symmetric nonnegative affinity W = (|Z| + |Z|^T) / 2."""
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise ValueError("Z must be square")
    A = np.abs(Z)
    return 0.5 * (A + A.T)


def block_diag_regularizer(B, k):
    """Sum of the k smallest eigenvalues of laplacian(B).

    Zero exactly when the symmetrized graph splits into at least k
    connected components. Eigenvalues in [-1e-8, 0) are clamped to 0 to
    absorb floating-point PSD error.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError("B must be square")
    n = B.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, n], got {k} with n={n}")
    vals = np.linalg.eigvalsh(laplacian(B))[:k].copy()
    vals[(vals < 0.0) & (vals >= -1e-8)] = 0.0
    return float(vals.sum())


def dy_matrix(Y):
    """Matrix with entry (i, j) = Y_ii - Y_ij, i.e. diag(Y) 1^T - Y."""
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[0] != Y.shape[1]:
        raise ValueError("Y must be square")
    return np.diag(Y)[:, None] - Y


def da_matrix(X, a):
    """Squared weighted distances d_ij = sum_f (a_f (x_fi - x_fj))^2.

    X is d x n, a is a length-d weight vector. The result is symmetric
    with a zero diagonal.
    """
    X = np.asarray(X, dtype=float)
    a = np.asarray(a, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a d x n matrix")
    if a.ndim != 1 or a.size != X.shape[0]:
        raise ValueError("a must have one weight per feature row of X")
    D = _pairwise_sq_dists(X * a[:, None])
    return 0.5 * (D + D.T)
