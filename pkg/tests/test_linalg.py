import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfw_opt.core import gershgorin_bound
from gfw_opt.errors import NonSymmetric
from gfw_opt.linalg import estimate_lambda_min, jacobi_eigh


def sym(n, seed):
    G = np.random.default_rng(seed).standard_normal((n, n))
    return (G + G.T) / 2


@pytest.mark.parametrize("seed", range(6))
def test_power_iteration_accuracy(seed):
    A = sym(30, seed)
    lam = np.linalg.eigvalsh(A)[0]
    assert abs(estimate_lambda_min(A, max_iter=20_000) - lam) <= 1e-4 * gershgorin_bound(A)


def test_known_spectra():
    assert estimate_lambda_min(np.diag([1.0, -2.0])) == pytest.approx(-2.0, abs=1e-9)
    assert estimate_lambda_min(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(-1.0, abs=1e-9)
    assert estimate_lambda_min(np.zeros((3, 3))) == 0.0


def test_power_iteration_rejects_nonsymmetric():
    with pytest.raises(NonSymmetric):
        estimate_lambda_min(np.array([[0.0, 1.0], [0.0, 0.0]]))


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_jacobi_matches_numpy(n, seed):
    A = sym(n, seed)
    w, V = jacobi_eigh(A)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(A), atol=1e-12 * max(1.0, np.abs(A).max()))
    np.testing.assert_allclose(V.T @ V, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(A @ V, V * w, atol=1e-11)
