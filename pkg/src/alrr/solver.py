"""ADMM solver for auto-weighted low-rank self-representation graphs.

The model represents each sample as a combination of the others,
X = XZ + E, while learning a row-stochastic similarity graph S coupled
to Z, a low-rank surrogate U, per-feature weights a (A = diag(a)), and
optionally a rank-k spectral projector Y that pushes S toward a k-block
structure. The loop alternates closed-form updates for Z, E, U, Y, S
and a under a growing penalty mu, with scaled Lagrange multipliers
C1, C2, C3 enforcing X = XZ + E, Z = S and Z = U.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .graphs import da_matrix, dy_matrix, knn_init_graph, laplacian, symmetrize
from .prox import smallest_eigvecs, soft_threshold, svt

__all__ = [
    "Hyperparams",
    "SolverResult",
    "NumericalFailure",
    "update_z",
    "update_e",
    "update_u",
    "update_y",
    "update_s",
    "update_a",
    "update_multipliers",
    "objective",
    "solve",
]


class NumericalFailure(RuntimeError):
    """An iterate left the finite range during a solve."""

    def __init__(self, step, iteration=None, detail="non-finite values"):
        self.step = step
        self.iteration = iteration
        where = f" at iteration {iteration}" if iteration is not None else ""
        super().__init__(f"{detail} in step '{step}'{where}")


@dataclass
class Hyperparams:
    """Solver knobs. The penalty schedule defaults mirror the usual
    inexact augmented-Lagrangian setup: mu grows by rho each iteration
    from mu0 until mu_max."""

    lambda1: float = 5.0**-2
    lambda2: float = 5.0**-2
    lambda3: float = 5.0**-2
    k: int = 3
    k_nn: int = 5
    mu0: float = 0.01
    rho: float = 1.1
    mu_max: float = 1e8
    tol: float = 1e-6
    max_iter: int = 200
    seed: int = 0
    weight_mode: str = "auto"

    def validate(self):
        if min(self.lambda1, self.lambda2, self.lambda3) < 0:
            raise ValueError("lambda1, lambda2, lambda3 must be nonnegative")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.k_nn < 1:
            raise ValueError("k_nn must be at least 1")
        if self.mu0 <= 0:
            raise ValueError("mu0 must be positive")
        if self.rho <= 1:
            raise ValueError("rho must exceed 1")
        if self.mu_max < self.mu0:
            raise ValueError("mu_max must be at least mu0")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.weight_mode not in ("auto", "identity"):
            raise ValueError(f"unknown weight_mode: {self.weight_mode!r}")


@dataclass
class SolverResult:
    Z: np.ndarray
    S: np.ndarray
    W: np.ndarray
    E: np.ndarray
    a: np.ndarray
    objective_trace: list = field(default_factory=list)
    objective_trace_s: list = field(default_factory=list)
    residual_trace: list = field(default_factory=list)
    mu_trace: list = field(default_factory=list)
    row_sum_gap_trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def update_z(X, E, S, U, C1, C2, C3, mu, factor=None):
    """Closed-form minimizer of the quadratic Z-subproblem.

    Solves (X^T X + 2I) Z = X^T (X - E + C1/mu) + (S - C2/mu) + (U - C3/mu).
    The coefficient matrix never changes across iterations, so repeated
    callers should pass `factor`, a cho_factor of (X^T X + 2I).
    """
    rhs = X.T @ (X - E + C1 / mu) + (S - C2 / mu) + (U - C3 / mu)
    if factor is None:
        factor = cho_factor(X.T @ X + 2.0 * np.eye(X.shape[1]))
    return cho_solve(factor, rhs)


def update_e(X, Z, C1, mu, lambda2):
    """Sparse-error step: shrink the fit residual X - XZ + C1/mu."""
    return soft_threshold(X - X @ Z + C1 / mu, lambda2 / mu)


def update_u(Z, C3, mu, lambda1):
    """Low-rank step: singular value thresholding of Z + C3/mu."""
    return svt(Z + C3 / mu, lambda1 / mu)


def update_y(S, k):
    """Rank-k spectral projector Y = F F^T of the Laplacian of S.

    F holds the k smallest-eigenvalue eigenvectors, so trace(Y) = k and
    <laplacian(S), Y> is the sum of the k smallest eigenvalues.
    """
    F = smallest_eigvecs(laplacian(S), k)
    return F @ F.T


def _project_rows_simplex(V):
    """Euclidean projection of each row of V onto {p >= 0, sum(p) = 1}."""
    m = V.shape[1]
    u = np.sort(V, axis=1)[:, ::-1]
    css = np.cumsum(u, axis=1)
    j = np.arange(1, m + 1)
    # the active-set size per row; the condition is true on a prefix
    rho = np.count_nonzero(u * j > css - 1.0, axis=1)
    sigma = (1.0 - css[np.arange(V.shape[0]), rho - 1]) / rho
    return np.maximum(V + sigma[:, None], 0.0)


def update_s(Z, C2, X, a, Y, mu, lambda3):
    """Constrained graph step.

    Builds the unconstrained minimizer
    S_bar = (2 mu Z + 2 C2 + lambda3 (D_Y + D_Y^T) - 2 D_A) / (2 mu)
    and projects each row (diagonal excluded, then pinned to 0) exactly
    onto the probability simplex, so every row of the result is
    nonnegative and sums to 1. Pass Y=None when the spectral term is
    disabled.
    """
    n = Z.shape[0]
    if n < 2:
        raise ValueError("need at least 2 samples")
    Sbar = Z + (C2 - da_matrix(X, a)) / mu
    if lambda3 > 0 and Y is not None:
        DY = dy_matrix(Y)
        Sbar = Sbar + (lambda3 / (2.0 * mu)) * (DY + DY.T)
    off = ~np.eye(n, dtype=bool)
    S = np.zeros_like(Sbar)
    S[off] = _project_rows_simplex(Sbar[off].reshape(n, n - 1)).ravel()
    return S


def update_a(X, S):
    """Closed-form feature weights a_i = 1 / (w_i * sum_j 1/w_j).

    w_i = x^i L_S (x^i)^T over the i-th feature row x^i of X, with
    L_S = laplacian(S). Each w_i is floored at 1e-12 * max(w) so a
    constant feature cannot divide by zero; if every w is zero the
    weights fall back to uniform.
    """
    L = laplacian(S)
    w = np.einsum("ij,ij->i", X @ L, X)
    if not np.all(np.isfinite(w)):
        raise NumericalFailure("update_a")
    d = X.shape[0]
    w_max = float(w.max())
    if w_max <= 0.0:
        return np.full(d, 1.0 / d)
    w = np.maximum(w, 1e-12 * w_max)
    inv = 1.0 / w
    return inv / inv.sum()


def update_multipliers(X, Z, E, S, U, C1, C2, C3, mu, rho, mu_max):
    """Gradient-ascent multiplier step, then grow the penalty.

    The C updates use the current mu; mu is scaled afterwards.
    """
    C1 = C1 + mu * (X - X @ Z - E)
    C2 = C2 + mu * (Z - S)
    C3 = C3 + mu * (Z - U)
    return C1, C2, C3, min(mu_max, rho * mu)


def objective(X, Z, E, a, params, Y=None):
    """Normalized objective value

    (<D_A, Z> + lambda1 ||Z||_* + lambda2 ||E||_1
     + lambda3 <laplacian(Z), Y>) / ||X||_F

    where D_A = da_matrix(X, a). The Y term is dropped when Y is None
    or lambda3 = 0.
    """
    x_norm = float(np.linalg.norm(X))
    if x_norm == 0.0:
        raise ValueError("X must be nonzero")
    val = float(np.sum(da_matrix(X, a) * Z))
    val += params.lambda1 * float(np.linalg.svd(Z, compute_uv=False).sum())
    val += params.lambda2 * float(np.abs(E).sum())
    if params.lambda3 > 0 and Y is not None:
        val += params.lambda3 * float(np.sum(laplacian(Z) * Y))
    return val / x_norm


def _require_finite(step, iteration, arr):
    if not np.all(np.isfinite(arr)):
        raise NumericalFailure(step, iteration)


def solve(X, params):
    """Run the full alternating loop on X (d x n, columns are samples).

    Initialization: Z = S = U = row-stochastic kNN graph, E = 0, all
    multipliers 0, mu = mu0, uniform feature weights. Update order per
    iteration: Z, E, U, Y, S, a, multipliers. Stops when
    max(||X - XZ - E||_inf, ||Z - S||_inf, ||Z - U||_inf) < tol or at
    max_iter. With lambda3 = 0 the Y step is skipped entirely; with
    weight_mode="identity" the weights stay uniform and the a step is
    skipped.
    """
    params.validate()
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a d x n matrix")
    d, n = X.shape
    if d < 1:
        raise ValueError("X needs at least one feature row")
    if n < max(params.k + 1, params.k_nn + 1):
        raise ValueError(
            f"need n >= max(k+1, k_nn+1) = {max(params.k + 1, params.k_nn + 1)}, got n={n}"
        )
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite entries")
    x_norm = float(np.linalg.norm(X))
    if x_norm == 0.0:
        raise ValueError("X must be nonzero")

    Z = knn_init_graph(X, params.k_nn)
    S = Z.copy()
    U = Z.copy()
    E = np.zeros((d, n))
    C1 = np.zeros((d, n))
    C2 = np.zeros((n, n))
    C3 = np.zeros((n, n))
    mu = params.mu0
    a = np.full(d, 1.0 / d)
    Y = None
    factor = cho_factor(X.T @ X + 2.0 * np.eye(n))

    result = SolverResult(Z=Z, S=S, W=symmetrize(Z), E=E, a=a)
    for t in range(1, params.max_iter + 1):
        Z = update_z(X, E, S, U, C1, C2, C3, mu, factor)
        _require_finite("update_z", t, Z)
        E = update_e(X, Z, C1, mu, params.lambda2)
        _require_finite("update_e", t, E)
        U = update_u(Z, C3, mu, params.lambda1)
        _require_finite("update_u", t, U)
        if params.lambda3 > 0:
            Y = update_y(S, params.k)
            _require_finite("update_y", t, Y)
        S = update_s(Z, C2, X, a, Y, mu, params.lambda3)
        _require_finite("update_s", t, S)
        if params.weight_mode == "auto":
            try:
                a = update_a(X, S)
            except NumericalFailure as err:
                raise NumericalFailure(err.step, t) from None

        r1 = float(np.max(np.abs(X - X @ Z - E)))
        r2 = float(np.max(np.abs(Z - S)))
        r3 = float(np.max(np.abs(Z - U)))
        obj = objective(X, Z, E, a, params, Y)
        if params.lambda3 > 0 and Y is not None:
            obj_s = obj + params.lambda3 * float(
                np.sum((laplacian(S) - laplacian(Z)) * Y)
            ) / x_norm
        else:
            obj_s = obj
        result.objective_trace.append(obj)
        result.objective_trace_s.append(obj_s)
        result.residual_trace.append((r1, r2, r3))
        result.mu_trace.append(mu)
        result.row_sum_gap_trace.append(float(np.max(np.abs(S.sum(axis=1) - 1.0))))
        result.iterations = t
        if max(r1, r2, r3) < params.tol:
            result.converged = True
            break
        C1, C2, C3, mu = update_multipliers(
            X, Z, E, S, U, C1, C2, C3, mu, params.rho, params.mu_max
        )

    result.Z = Z
    result.S = S
    result.W = symmetrize(Z)
    result.E = E
    result.a = a
    return result
