import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aip.errors import DimensionMismatch, NotHermitian, NotIsometric, NotPsd
from aip.linalg_core import (Subspace, as_cmatrix, complete_isometry_to_unitary,
                             hermitian_psd_decompose, orthonormal_complement, pinv,
                             range_subspace, unitarity_defect)


def _random_psd(seed, n, rank):
    r = np.random.default_rng(seed)
    X = r.standard_normal((n, rank)) + 1j * r.standard_normal((n, rank))
    return X @ X.conj().T


def test_as_cmatrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_cmatrix([[np.nan]])


def test_as_cmatrix_shape_check():
    with pytest.raises(DimensionMismatch):
        as_cmatrix(np.zeros((2, 3)), rows=3)


def test_decompose_scalar():
    r, L = hermitian_psd_decompose([[1.0]])
    assert r == 1
    assert np.allclose(L, [[1.0]])


def test_decompose_indefinite_reports_eigenvalue():
    with pytest.raises(NotPsd) as exc:
        hermitian_psd_decompose([[1, 1], [1, 0]])
    assert exc.value.eigenvalue == pytest.approx((1 - np.sqrt(5)) / 2)


def test_decompose_zero_form():
    r, L = hermitian_psd_decompose(np.zeros((2, 2)))
    assert r == 0
    assert L.shape == (2, 0)


def test_decompose_not_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_psd_decompose([[1, 1], [0, 1]])


def test_decompose_order_and_ties():
    r, L = hermitian_psd_decompose(np.diag([1.0, 3.0, 1.0]))
    assert r == 3
    # descending eigenvalue, equal eigenvalues ordered by leading coordinate
    expect = np.array([[0, 1, 0], [np.sqrt(3), 0, 0], [0, 0, 1]])
    assert np.allclose(np.abs(L), expect)
    assert np.argmax(np.abs(L[:, 2])) == 2


@given(st.integers(0, 10_000), st.integers(1, 50), st.integers(0, 50))
def test_decompose_reconstructs(seed, n, rank):
    rank = min(rank, n)
    G = _random_psd(seed, n, rank)
    r, L = hermitian_psd_decompose(G)
    assert r == rank
    scale = max(np.linalg.norm(G, 2), 1e-300)
    assert np.linalg.norm(G - L @ L.conj().T, 2) <= 1e-10 * scale + 1e-12


def test_complement_of_e1():
    c = orthonormal_complement(Subspace(2, np.array([[1.0], [0.0]])))
    assert c.dim == 1
    assert np.allclose(c.projector(), np.diag([0, 1]))


def test_complement_of_diagonal():
    c = orthonormal_complement(Subspace(2, np.array([[1.0], [1.0]]) / np.sqrt(2)))
    v = np.array([1, -1]) / np.sqrt(2)
    assert np.allclose(c.projector(), np.outer(v, v))


def test_complement_of_everything():
    assert orthonormal_complement(Subspace(3, np.eye(3))).dim == 0


@given(st.integers(0, 10_000), st.integers(1, 8), st.integers(0, 8))
def test_complement_is_orthogonal(seed, n, k):
    k = min(k, n)
    r = np.random.default_rng(seed)
    M = r.standard_normal((n, k)) + 1j * r.standard_normal((n, k))
    S = range_subspace(M) if k else Subspace(n, np.zeros((n, 0)))
    c = orthonormal_complement(S)
    assert c.dim == n - S.dim
    assert np.allclose(S.projector() + c.projector(), np.eye(n), atol=1e-10)


def test_subspace_requires_orthonormal():
    with pytest.raises(ValueError):
        Subspace(2, np.array([[2.0], [0.0]]))


def test_complete_full_unitary_returns_v():
    V = np.array([[0, 1j], [1, 0]])
    full = Subspace(2, np.eye(2))
    assert np.allclose(complete_isometry_to_unitary(V, full, full), V)


def test_complete_partial_isometry():
    e1 = Subspace(2, np.array([[1.0], [0.0]]))
    U = complete_isometry_to_unitary(np.eye(2), e1, e1)
    assert U.shape == (3, 3)
    assert unitarity_defect(U) <= 1e-10
    assert np.allclose(U @ [1, 0, 0], [1, 0, 0])   # identity on e1
    assert np.allclose(U @ [0, 1, 0], [0, 0, 1])   # e2 -> N1
    assert np.allclose(U @ [0, 0, 1], [0, 1, 0])   # N2 -> e2


def test_complete_rejects_non_isometry():
    e1 = Subspace(2, np.array([[1.0], [0.0]]))
    with pytest.raises(NotIsometric):
        complete_isometry_to_unitary(2 * np.eye(2), e1, e1)


def test_complete_is_deterministic(rng):
    M = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    dom = range_subspace(M)
    Q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    ran = range_subspace(Q @ dom.basis)
    a = complete_isometry_to_unitary(Q, dom, ran)
    b = complete_isometry_to_unitary(Q, dom, ran)
    assert np.array_equal(a, b)
    assert unitarity_defect(a) <= 1e-10


def test_pinv_examples():
    assert np.allclose(pinv(np.eye(3)), np.eye(3))
    assert np.allclose(pinv([[1, 1], [1, 1]]), np.full((2, 2), 0.25))
    assert np.allclose(pinv(np.zeros((2, 3))), np.zeros((3, 2)))


@given(st.integers(0, 10_000), st.integers(1, 6), st.integers(1, 6))
def test_pinv_penrose_identities(seed, m, n):
    r = np.random.default_rng(seed)
    M = r.standard_normal((m, n)) + 1j * r.standard_normal((m, n))
    P = pinv(M)
    assert np.allclose(M @ P @ M, M, atol=1e-8)
    assert np.allclose(P @ M @ P, P, atol=1e-8)
    assert np.allclose((M @ P).conj().T, M @ P, atol=1e-8)
    assert np.allclose((P @ M).conj().T, P @ M, atol=1e-8)
    if m == n and np.linalg.cond(M) < 1e6:
        assert np.allclose(pinv(P), M, atol=1e-8)
