"""Proximal operators and the small spectral kernel used by the solver."""

import numpy as np

__all__ = ["soft_threshold", "svt", "smallest_eigvecs"]


def soft_threshold(M, tau):
    """Entrywise shrinkage sign(m) * max(|m| - tau, 0).

    Solves min_E tau * ||E||_1 + 0.5 * ||E - M||_F^2.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    M = np.asarray(M, dtype=float)
    return np.sign(M) * np.maximum(np.abs(M) - tau, 0.0)


def svt(M, tau):
    """Singular value thresholding U diag(max(s - tau, 0)) V^T.

    Solves min_U tau * ||U||_* + 0.5 * ||U - M||_F^2. The full SVD is
    kept; no truncation.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise ValueError("svt input must be finite")
    u, s, vt = np.linalg.svd(M, full_matrices=False)
    s = np.maximum(s - tau, 0.0)
    return (u * s) @ vt


def smallest_eigvecs(L, k):
    """Orthonormal eigenvectors of symmetric L for the k smallest eigenvalues.

    Deterministic convention: ascending eigenvalue order with index
    tie-break, and each column is flipped so its first largest-magnitude
    entry is positive. With a degenerate gap at position k any
    orthonormal basis of the subspace may be returned.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError("L must be square")
    n = L.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, n], got {k} with n={n}")
    if np.max(np.abs(L - L.T)) > 1e-8:
        raise ValueError("L must be symmetric")
    _, vecs = np.linalg.eigh(0.5 * (L + L.T))
    F = vecs[:, :k].copy()
    for j in range(k):
        lead = int(np.argmax(np.abs(F[:, j])))
        if F[lead, j] < 0:
            F[:, j] = -F[:, j]
    return F
