import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finitekey.exceptions import DomainError
from finitekey.linalg import HermitianMatrix, jacobi_eig, matrix_function, symmetric_eig, trace_norm


def _random_hermitian(rng, n, complex_=False):
    a = rng.normal(size=(n, n))
    if complex_:
        a = a + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


@pytest.mark.parametrize("n", [1, 2, 5, 12])
@pytest.mark.parametrize("complex_", [False, True])
def test_eig_reconstructs(n, complex_):
    rng = np.random.default_rng(n)
    a = _random_hermitian(rng, n, complex_)
    w, v = symmetric_eig(a)
    assert np.all(np.diff(w) <= 0)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, a, atol=1e-12)
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
    assert np.allclose(w, np.sort(np.linalg.eigvalsh(a))[::-1], atol=1e-12)


def test_jacobi_reports_sweeps():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    w, v, sweeps = jacobi_eig(a)
    assert sorted(w) == pytest.approx([1.0, 3.0], abs=1e-14)
    assert sweeps >= 1


def test_rejects_non_hermitian_and_large():
    with pytest.raises(DomainError):
        HermitianMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(DomainError):
        HermitianMatrix(np.eye(65))
    with pytest.raises(DomainError):
        HermitianMatrix(np.array([[np.nan]]))


def test_matrix_is_read_only():
    m = HermitianMatrix(np.eye(2))
    with pytest.raises(ValueError):
        m.entries[0, 0] = 3.0


def test_matrix_function_sqrt():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    s = matrix_function(a, np.sqrt)
    assert np.allclose(s @ s, a, atol=1e-13)


def test_trace_norm_known():
    assert trace_norm(np.diag([1.0, -2.0, 0.5])) == pytest.approx(3.5, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**31 - 1))
def test_trace_norm_unitary_invariance(n, seed):
    rng = np.random.default_rng(seed)
    a = _random_hermitian(rng, n, complex_=True)
    u, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    assert trace_norm(u @ a @ u.conj().T) == pytest.approx(trace_norm(a), rel=1e-11, abs=1e-12)
