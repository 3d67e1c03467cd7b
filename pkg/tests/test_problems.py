import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aip.errors import DimensionMismatch, NotContractive, NotPsd
from aip.problems import (AipProblem, BoundaryData, NpData, SarasonData, blaschke,
                          build_boundary, build_np, build_sarason, check_fundamental_identity,
                          kernel_gram, kernel_values, pick_matrix, sarason_from_np,
                          validate_problem)
from aip.suites import random_boundary, random_np, random_sarason


def test_identity_single_node():
    p = AipProblem(D=[[1 / 0.75]], T1=[[0.5]], T2=[[1]], M1=[[1]], M2=[[0]])
    assert check_fundamental_identity(p) == pytest.approx(0, abs=1e-15)


def test_identity_boundary_example():
    p = build_boundary(BoundaryData(1, 1, 2))
    assert check_fundamental_identity(p) == 0


def test_identity_detects_perturbation():
    p = AipProblem(D=[[1 / 0.75]], T1=[[0.5]], T2=[[1]], M1=[[1]], M2=[[0.1]])
    assert check_fundamental_identity(p) == pytest.approx(0.01)


def test_identity_shape_mismatch():
    p = AipProblem(D=[[1]], T1=[[0]], T2=[[1]], M1=[[1]], M2=[[0]])
    object.__setattr__(p, "T1", np.zeros((2, 2)))
    with pytest.raises(DimensionMismatch):
        check_fundamental_identity(p)


def test_np_single_node_matrices():
    p = build_np(NpData([0], [0]))
    assert np.allclose(p.D, [[1]])
    assert np.allclose(p.T1, [[0]])
    assert np.allclose(p.M1, [[1]])
    assert np.allclose(p.M2, [[0]])


def test_np_infeasible():
    with pytest.raises(NotPsd) as exc:
        build_np(NpData([0, 0.5], [0, 1]))
    assert exc.value.eigenvalue < 0
    assert np.linalg.det(pick_matrix([0, 0.5], [0, 1])) == pytest.approx(-1)


def test_np_rank_one_pick_accepted():
    p = build_np(NpData([0, 0.5], [0, 0.5]))
    assert np.allclose(p.D, np.ones((2, 2)))


def test_np_data_validation():
    with pytest.raises(ValueError):
        NpData([0, 0], [0.1, 0.2])
    with pytest.raises(ValueError):
        NpData([1.2], [0])
    with pytest.raises(ValueError):
        NpData([0.1], [0, 0])


def test_boundary_matrices():
    p = build_boundary(BoundaryData(1, -1, 3))
    assert np.allclose([p.D, p.T1, p.T2, p.M1, p.M2], [[[3]], [[1]], [[1]], [[1]], [[-1]]])
    assert check_fundamental_identity(p) == 0
    assert check_fundamental_identity(build_boundary(BoundaryData(1j, 1, 1))) == pytest.approx(0, abs=1e-15)
    assert np.allclose(build_boundary(BoundaryData(1, 1, 0)).D, [[0]])


def test_boundary_validation():
    with pytest.raises(ValueError):
        BoundaryData(0.9, 1, 1)
    with pytest.raises(ValueError):
        BoundaryData(1, 1, -1)


def test_kernel_gram_is_reproducing():
    # G[a, b] = <k_b, k_a> = k_b(z_a); check by quadrature
    z = np.array([0.3j, -0.5, 0.2 + 0.4j])
    t = np.exp(2j * np.pi * (np.arange(2048) + 0.5) / 2048)
    K = kernel_values(z, t)
    quad = K.conj().T @ K / t.size
    assert np.allclose(kernel_gram(z), quad, atol=1e-12)


def test_blaschke_unimodular_and_zeros():
    zeros = [0.5, -0.3j, 0]
    t = np.exp(1j * np.linspace(0, 2 * np.pi, 50))
    assert np.allclose(np.abs(blaschke(zeros, t)), 1)
    assert np.allclose(blaschke(zeros, np.array(zeros)), 0)


def test_sarason_single_node():
    d = SarasonData([0.5], [[0.5]])
    p = build_sarason(d)
    assert np.allclose(p.D, 0.75 * kernel_gram([0.5]))
    assert check_fundamental_identity(p) <= 1e-10


def test_sarason_zero_operator():
    z = [0.1, -0.4j]
    p = build_sarason(SarasonData(z, np.zeros((2, 2))))
    assert np.allclose(p.D, kernel_gram(z))


def test_sarason_backward_shift_matrix():
    # T2 acts on kernels as P_+ conj(t) k_j = conj(z_j) k_j; check by FFT projection
    from aip.circle import circle_grid, project_plus
    z = np.array([0.3, -0.2 + 0.5j])
    p = build_sarason(SarasonData(z, np.zeros((2, 2))))
    t = circle_grid(1024)
    K = kernel_values(z, t)
    lhs = project_plus(np.conj(t)[:, None] * K)
    assert np.allclose(lhs, K @ p.T2, atol=1e-12)


def test_sarason_rejects_expansive():
    with pytest.raises(NotContractive):
        build_sarason(SarasonData([0.5], [[1.5]]))


def test_sarason_rejects_noncommuting():
    with pytest.raises(NotContractive):
        build_sarason(SarasonData([0.1, 0.6], [[0, 0.3], [0, 0]]))


def test_sarason_from_np_matches_remark():
    d = sarason_from_np(NpData([0.1, 0.5j], [0.2, -0.3]))
    assert np.allclose(d.Wstar, np.diag([0.2, -0.3]))
    assert check_fundamental_identity(build_sarason(d)) <= 1e-10


@given(st.integers(0, 10_000), st.integers(1, 8))
def test_builders_satisfy_identity(seed, n):
    rng = np.random.default_rng(seed)
    for p in (build_np(random_np(rng, n)), build_sarason(random_sarason(rng, n)),
              build_boundary(random_boundary(rng))):
        assert validate_problem(p) <= 1e-10


@given(st.integers(0, 10_000), st.integers(1, 6))
def test_random_np_has_full_rank_pick(seed, n):
    d = random_np(np.random.default_rng(seed), n)
    assert np.linalg.matrix_rank(pick_matrix(d.nodes, d.values), tol=1e-12) == n
