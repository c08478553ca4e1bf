"""Normalized-cut spectral clustering with a deterministic k-means backend."""

import numpy as np

from .prox import smallest_eigvecs

__all__ = ["ncut", "kmeans"]


def _sq_dists(P, C):
    """Squared Euclidean distances between rows of P and rows of C."""
    d2 = (
        np.sum(P * P, axis=1)[:, None]
        + np.sum(C * C, axis=1)[None, :]
        - 2.0 * P @ C.T
    )
    return np.maximum(d2, 0.0)


def _seed_centers(points, k, rng):
    """Greedy distance-weighted seeding.

    The first center is uniform; each later center is the best of a few
    candidates drawn proportionally to the current squared distances,
    judged by the total potential it would leave.
    """
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[int(rng.integers(n))]
    if k == 1:
        return centers
    d2 = _sq_dists(points, centers[:1])[:, 0]
    n_trials = 2 + int(np.log(k))
    for j in range(1, k):
        total = d2.sum()
        if total > 0.0:
            cand = rng.choice(n, size=n_trials, p=d2 / total)
        else:
            cand = rng.integers(n, size=n_trials)
        best_d2 = None
        best_pot = np.inf
        best_c = 0
        for c in cand:
            nd2 = np.minimum(d2, _sq_dists(points, points[int(c)][None, :])[:, 0])
            pot = nd2.sum()
            if pot < best_pot:
                best_c, best_pot, best_d2 = int(c), pot, nd2
        centers[j] = points[best_c]
        d2 = best_d2
    return centers


def _lloyd(points, centers, max_iter=300):
    """Lloyd refinement; returns (labels, centers, inertia trace).

    The recorded inertia is non-increasing across iterations. An empty
    cluster is re-seeded at the point currently farthest from its
    center, which can only lower the inertia.
    """
    n = points.shape[0]
    k = centers.shape[0]
    centers = centers.copy()
    prev = None
    history = []
    labels = np.zeros(n, dtype=int)
    for _ in range(max_iter):
        D = _sq_dists(points, centers)
        labels = D.argmin(axis=1)
        dmin = D[np.arange(n), labels]
        for j in range(k):
            if not np.any(labels == j):
                far = int(np.argmax(dmin))
                centers[j] = points[far]
                labels[far] = j
                dmin[far] = 0.0
        history.append(float(dmin.sum()))
        if prev is not None and np.array_equal(labels, prev):
            break
        prev = labels
        for j in range(k):
            centers[j] = points[labels == j].mean(axis=0)
    return labels, centers, history


def kmeans(points, k, seed, n_restarts=20, max_iter=300):
    """Best-of-restarts k-means labels, deterministic for a fixed seed.

    Runs n_restarts seeded Lloyd passes and keeps the first restart
    attaining the lowest within-cluster sum of squares.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError("points must be an n x m matrix")
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, n], got {k} with n={n}")
    rng = np.random.default_rng(seed)
    best_labels = None
    best_inertia = np.inf
    for _ in range(n_restarts):
        labels, _, history = _lloyd(points, _seed_centers(points, k, rng), max_iter)
        if history[-1] < best_inertia:
            best_inertia = history[-1]
            best_labels = labels
    return best_labels


def ncut(W, k, seed):
    """Normalized-cut clustering of a symmetric nonnegative affinity W.

    Degrees are floored at 1e-12 to keep isolated nodes finite; the
    embedding rows are scaled to unit length (exact-zero rows are left
    zero and fall to the nearest centroid in k-means).
    """
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("W must be square")
    n = W.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, n], got {k} with n={n}")
    deg = np.maximum(W.sum(axis=1), 1e-12)
    dhalf = 1.0 / np.sqrt(deg)
    L = np.eye(n) - dhalf[:, None] * W * dhalf[None, :]
    F = smallest_eigvecs(0.5 * (L + L.T), k)
    norms = np.linalg.norm(F, axis=1)
    emb = np.zeros_like(F)
    alive = norms > 1e-12
    emb[alive] = F[alive] / norms[alive, None]
    return kmeans(emb, k, seed)
