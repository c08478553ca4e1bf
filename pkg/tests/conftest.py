"""Shared reference implementations used as test oracles.

Everything in here is deliberately naive (explicit loops, bisection,
exhaustive enumeration) and independent of the library code paths it is
used to check.
"""

import itertools

import numpy as np


def weighted_sq_dists(X, a):
    """Double-loop weighted squared distances between columns of X."""
    d, n = X.shape
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            D[i, j] = sum((a[f] * (X[f, i] - X[f, j])) ** 2 for f in range(d))
    return D


def diag_gap_matrix(Y):
    """Entry (i, j) = Y_ii - Y_ij written as explicit loops."""
    n = Y.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = Y[i, i] - Y[i, j]
    return out


def loop_laplacian(S):
    """Entrywise Diag((S1 + S^T 1)/2) - (S + S^T)/2."""
    n = S.shape[0]
    L = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            L[i, j] = -0.5 * (S[i, j] + S[j, i])
        L[i, i] += 0.5 * (S[i, :].sum() + S[:, i].sum())
    return L


def project_rows_bisect(V, iters=60):
    """Row-wise simplex projection by bisecting the KKT shift.

    Independent of the sort-based projection inside the solver; the
    shift sigma solves sum(max(v + sigma, 0)) = 1 for each row.
    """
    V = np.asarray(V, dtype=float)
    m = V.shape[1]
    lo = -V.max(axis=1)
    hi = -V.min(axis=1) + 1.0 / m
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        low = np.maximum(V + mid[:, None], 0.0).sum(axis=1) < 1.0
        lo = np.where(low, mid, lo)
        hi = np.where(low, hi, mid)
    return np.maximum(V + (0.5 * (lo + hi))[:, None], 0.0)


def random_graph_step_instance(rng, n=4, d=3):
    """One random input tuple for the constrained graph step."""
    Z = rng.standard_normal((n, n))
    C2 = rng.standard_normal((n, n))
    X = rng.standard_normal((d, n))
    a = rng.random(d) + 0.1
    a = a / a.sum()
    mu = float(0.5 + 2.0 * rng.random())
    lam3 = float(rng.choice([0.0, 0.04, 1.0]))
    Y = None
    if lam3 > 0:
        Q = rng.standard_normal((n, n))
        _, vecs = np.linalg.eigh(Q + Q.T)
        F = vecs[:, :2]
        Y = F @ F.T
    return Z, C2, X, a, Y, mu, lam3


def stack_graph_step_instances(instances):
    """Batch instance tuples into arrays for the vectorized oracle."""
    n = instances[0][0].shape[0]
    Zs = np.stack([t[0] for t in instances])
    C2s = np.stack([t[1] for t in instances])
    DAs = np.stack([weighted_sq_dists(t[2], t[3]) for t in instances])
    DYs = []
    for t in instances:
        if t[4] is None:
            DYs.append(np.zeros((n, n)))
        else:
            DY = diag_gap_matrix(t[4])
            DYs.append(DY + DY.T)
    mus = np.array([t[5] for t in instances]).reshape(-1, 1, 1)
    lam3s = np.array([t[6] for t in instances]).reshape(-1, 1, 1)
    return Zs, C2s, DAs, np.stack(DYs), mus, lam3s


def pg_graph_step(Zs, C2s, DAs, DYsyms, mus, lam3s, iters=5000):
    """Projected-gradient reference for the constrained graph step.

    Minimizes tr(D_A^T S) + (mu/2)||Z - S + C2/mu + (lam3/2mu)(D_Y +
    D_Y^T)||_F^2 over {S >= 0, diag 0, off-diagonal rows on the
    simplex}, batched over the leading axis.
    """
    b, n, _ = Zs.shape
    M = Zs + C2s / mus + lam3s / (2.0 * mus) * DYsyms
    off = ~np.eye(n, dtype=bool)
    S = np.zeros_like(Zs)
    S[:, off] = 1.0 / (n - 1)
    step = 0.5 / mus
    for _ in range(iters):
        G = S - step * (DAs + mus * (S - M))
        proj = project_rows_bisect(G[:, off].reshape(b * n, n - 1))
        S = np.zeros_like(Zs)
        S[:, off] = proj.reshape(b, n * (n - 1))
    return S


def qp_objectives(S, Zs, C2s, DAs, DYsyms, mus, lam3s):
    """Batched graph-step objective values for candidate solutions S."""
    R = Zs - S + C2s / mus + lam3s / (2.0 * mus) * DYsyms
    return (DAs * S).sum(axis=(1, 2)) + 0.5 * mus[:, 0, 0] * (R * R).sum(axis=(1, 2))


def brute_force_accuracy(pred, truth):
    """Best matched fraction over all injective cluster maps, by
    explicit permutation enumeration (keep k <= 5)."""
    _, p = np.unique(np.asarray(pred).ravel(), return_inverse=True)
    _, t = np.unique(np.asarray(truth).ravel(), return_inverse=True)
    side = max(p.max(), t.max()) + 1
    M = np.zeros((side, side), dtype=int)
    for i in range(p.size):
        M[p[i], t[i]] += 1
    best = 0
    for perm in itertools.permutations(range(side)):
        best = max(best, sum(M[r, perm[r]] for r in range(side)))
    return best / p.size


def enumerate_pair_fscore(pred, truth):
    """Pair-by-pair precision, recall and fscore."""
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    n = pred.size
    tp = fp = fn = 0
    for i in range(n):
        for j in range(i + 1, n):
            same_p = pred[i] == pred[j]
            same_t = truth[i] == truth[j]
            tp += same_p and same_t
            fp += same_p and not same_t
            fn += same_t and not same_p
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0:
        return 0.0, precision, recall
    return 2.0 * precision * recall / (precision + recall), precision, recall


def component_graph(rng, sizes):
    """Random symmetric affinity whose connected components are exactly
    the given blocks: a ring inside each block keeps it connected, plus
    random extra within-block edges. Block sizes must be >= 2."""
    n = int(sum(sizes))
    W = np.zeros((n, n))
    labels = np.zeros(n, dtype=int)
    start = 0
    for b, m in enumerate(sizes):
        idx = np.arange(start, start + m)
        labels[idx] = b
        for pos in range(m):
            i, j = idx[pos], idx[(pos + 1) % m]
            if i != j:
                w = 0.5 + rng.random()
                W[i, j] = W[j, i] = w
        keep = rng.random((m, m)) < 0.4
        for ii in range(m):
            for jj in range(ii + 1, m):
                if keep[ii, jj]:
                    w = 0.5 + rng.random()
                    W[idx[ii], idx[jj]] = W[idx[jj], idx[ii]] = w
        start += m
    return W, labels
