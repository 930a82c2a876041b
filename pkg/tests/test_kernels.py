import numpy as np
import pytest
import sympy

from kount import _kernels


@pytest.mark.parametrize("n", [1, 2, 3, 8, 31, 70])
def test_jacobi_matches_lapack(backend, n):
    rng = np.random.default_rng(n)
    a = rng.standard_normal((n, n))
    a = a + a.T
    w, V, sweeps = _kernels.jacobi_eigh(a, backend=backend)
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-11 * max(1, np.abs(a).max()))
    assert np.allclose(V.T @ V, np.eye(n), atol=1e-11)
    assert np.allclose(a @ V, V * w, atol=1e-10)
    assert sweeps < 20


def test_jacobi_diagonal_input_needs_no_sweeps(backend):
    w, V, sweeps = _kernels.jacobi_eigh(np.diag([3.0, 1.0, 2.0]), backend=backend)
    assert list(w) == [1.0, 2.0, 3.0]
    assert sweeps == 0


def test_jacobi_backends_agree():
    if len({"numpy", "numba"} & {_kernels.backend_name(), "numpy"}) < 1 or _kernels._numba is None:
        pytest.skip("numba unavailable")
    a = np.array([[2, 1, 1], [1, 3, 1], [1, 1, 5]], dtype=float)
    w1 = _kernels.jacobi_eigh(a, backend="numpy")[0]
    w2 = _kernels.jacobi_eigh(a, backend="numba")[0]
    assert np.allclose(w1, w2, atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_charpoly_mod_matches_sympy(backend, n):
    rng = np.random.default_rng(100 + n)
    A = rng.integers(-20, 21, (n, n))
    primes = np.array([16777213, 16777199, 101], dtype=np.int64)
    res = np.stack([A % p for p in primes])
    got = _kernels.charpoly_mod(res, primes, backend=backend)
    ref = [int(c) for c in sympy.Matrix(A.tolist()).charpoly().all_coeffs()[::-1]]
    for k, p in enumerate(primes.tolist()):
        assert got[k].tolist() == [c % p for c in ref]


def test_charpoly_mod_rejects_large_primes():
    with pytest.raises(ValueError):
        _kernels.charpoly_mod(np.zeros((1, 2, 2), dtype=np.int64), np.array([1 << 25]))


def test_backend_env(monkeypatch):
    monkeypatch.setenv("KOUNT_BACKEND", "numpy")
    assert _kernels.backend_name() == "numpy"
    monkeypatch.setenv("KOUNT_THREADS", "2")
    assert _kernels.thread_cap() == 2
