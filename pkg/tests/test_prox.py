"""Proximal operators and the smallest-eigenvector kernel."""

import numpy as np
import pytest

from alrr.graphs import block_diag_regularizer, laplacian
from alrr.prox import smallest_eigvecs, soft_threshold, svt

from conftest import component_graph


def test_soft_threshold_example():
    M = np.array([[1.2, -0.3], [0.5, -2.0]])
    np.testing.assert_allclose(
        soft_threshold(M, 0.5), np.array([[0.7, 0.0], [0.0, -1.5]]), atol=1e-15
    )


def test_soft_threshold_zero_tau_is_identity():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((3, 5))
    np.testing.assert_array_equal(soft_threshold(M, 0.0), M)


def test_soft_threshold_rejects_negative_tau():
    with pytest.raises(ValueError):
        soft_threshold(np.zeros((2, 2)), -0.1)


def test_soft_threshold_local_optimality():
    # output must beat every +-1e-3 single-entry perturbation on the
    # prox objective tau*||E||_1 + 0.5*||E - M||_F^2
    rng = np.random.default_rng(1)
    M = rng.standard_normal((4, 4))
    tau = 0.3
    E = soft_threshold(M, tau)

    def obj(A):
        return tau * np.abs(A).sum() + 0.5 * np.sum((A - M) ** 2)

    base = obj(E)
    for i in range(4):
        for j in range(4):
            for delta in (1e-3, -1e-3):
                trial = E.copy()
                trial[i, j] += delta
                assert obj(trial) >= base - 1e-12


def test_soft_threshold_non_expansive():
    rng = np.random.default_rng(2)
    for _ in range(10):
        A = rng.standard_normal((4, 4))
        B = rng.standard_normal((4, 4))
        tau = float(rng.random())
        lhs = np.linalg.norm(soft_threshold(A, tau) - soft_threshold(B, tau))
        assert lhs <= np.linalg.norm(A - B) + 1e-12


def test_svt_diagonal_example():
    out = svt(np.diag([3.0, 1.0, 0.2]), 0.5)
    np.testing.assert_allclose(out, np.diag([2.5, 0.5, 0.0]), atol=1e-12)


def test_svt_zero_tau_is_identity():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((4, 6))
    np.testing.assert_allclose(svt(M, 0.0), M, atol=1e-10)


def test_svt_symmetric_example():
    out = svt(np.array([[0.0, 2.0], [2.0, 0.0]]), 1.0)
    np.testing.assert_allclose(out, np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-12)


def test_svt_rejects_bad_input():
    with pytest.raises(ValueError):
        svt(np.zeros((2, 2)), -1.0)
    with pytest.raises(ValueError):
        svt(np.array([[np.nan, 0.0], [0.0, 1.0]]), 0.5)


def test_svt_thresholds_singular_values():
    rng = np.random.default_rng(4)
    for _ in range(10):
        M = rng.standard_normal((5, 5))
        tau = float(rng.random())
        s_in = np.linalg.svd(M, compute_uv=False)
        s_out = np.linalg.svd(svt(M, tau), compute_uv=False)
        np.testing.assert_allclose(s_out, np.maximum(s_in - tau, 0.0), atol=1e-8)


def test_svt_shrinks_nuclear_norm():
    rng = np.random.default_rng(5)
    M = rng.standard_normal((6, 4))
    before = np.linalg.svd(M, compute_uv=False).sum()
    after = np.linalg.svd(svt(M, 0.3), compute_uv=False).sum()
    assert after <= before + 1e-12


def test_smallest_eigvecs_nullspace_of_components():
    rng = np.random.default_rng(6)
    W, _ = component_graph(rng, [4, 4])
    L = laplacian(W)
    F = smallest_eigvecs(L, 2)
    np.testing.assert_allclose(L @ F, np.zeros((8, 2)), atol=1e-8)
    np.testing.assert_allclose(F.T @ F, np.eye(2), atol=1e-8)


def test_smallest_eigvecs_sign_convention():
    F = smallest_eigvecs(np.eye(3), 1)
    assert F[np.argmax(np.abs(F[:, 0])), 0] > 0
    np.testing.assert_allclose(np.linalg.norm(F[:, 0]), 1.0, atol=1e-12)
    # deterministic across repeated calls
    np.testing.assert_array_equal(F, smallest_eigvecs(np.eye(3), 1))


def test_smallest_eigvecs_trace_oracle():
    rng = np.random.default_rng(7)
    A = rng.standard_normal((6, 6))
    L = A @ A.T  # PSD
    F = smallest_eigvecs(L, 3)
    vals = np.linalg.eigvalsh(L)
    assert np.trace(F.T @ L @ F) == pytest.approx(vals[:3].sum(), abs=1e-8)


def test_smallest_eigvecs_matches_block_score():
    rng = np.random.default_rng(8)
    B = rng.random((8, 8))
    L = laplacian(B)
    for k in (1, 2, 5):
        F = smallest_eigvecs(L, k)
        want = block_diag_regularizer(B, k)
        assert np.trace(F.T @ L @ F) == pytest.approx(want, abs=1e-8)


def test_smallest_eigvecs_rejects_bad_input():
    with pytest.raises(ValueError):
        smallest_eigvecs(np.eye(3), 4)
    with pytest.raises(ValueError):
        smallest_eigvecs(np.array([[0.0, 1.0], [0.0, 0.0]]), 1)
    with pytest.raises(ValueError):
        smallest_eigvecs(np.zeros((2, 3)), 1)
